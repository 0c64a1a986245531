#include "kwsql/similarity.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kwsql/catalog.hpp"
#include "kwsql/error.hpp"

namespace kwsql {

std::string_view to_string(SimilarityMetric metric) {
  return metric == SimilarityMetric::kPath ? "path" : "wup";
}

SimilarityMetric parse_metric(std::string_view name) {
  if (name == "path") return SimilarityMetric::kPath;
  if (name == "wup") return SimilarityMetric::kWuPalmer;
  throw UsageError("unknown similarity metric '" + std::string(name) + "' (expected path or wup)");
}

void SimilarityConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw UsageError("similarity threshold must be in (0, 1], got " + std::to_string(threshold));
  }
}

const std::vector<std::size_t>& Taxonomy::senses(std::string_view word) const {
  static const std::vector<std::size_t> kNone;
  auto it = word_senses_.find(word);
  return it == word_senses_.end() ? kNone : it->second;
}

std::size_t Taxonomy::lcs(std::size_t a, std::size_t b) const {
  while (synsets_[a].depth > synsets_[b].depth) a = *synsets_[a].parent;
  while (synsets_[b].depth > synsets_[a].depth) b = *synsets_[b].parent;
  while (a != b) {
    a = *synsets_[a].parent;
    b = *synsets_[b].parent;
  }
  return a;
}

Taxonomy parse_taxonomy(std::string_view json_text) {
  using json = nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(DataErrorKind::kMalformed, std::string("taxonomy: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("synsets") || !doc["synsets"].is_array()) {
    throw DataError(DataErrorKind::kMalformed, "taxonomy: expected an object with a 'synsets' array");
  }

  Taxonomy tax;
  std::map<std::string, std::size_t> by_id;
  std::vector<std::optional<std::string>> parent_ids;
  for (const auto& s : doc["synsets"]) {
    if (!s.is_object() || !s.contains("id") || !s["id"].is_string()) {
      throw DataError(DataErrorKind::kMalformed, "taxonomy: synset without a string id");
    }
    Taxonomy::Synset syn;
    syn.id = s["id"].get<std::string>();
    if (!by_id.emplace(syn.id, tax.synsets_.size()).second) {
      throw DataError(DataErrorKind::kMalformed, "taxonomy: synset " + syn.id + " declared twice");
    }
    if (s.contains("parent") && !s["parent"].is_null()) {
      if (!s["parent"].is_string()) throw DataError(DataErrorKind::kMalformed, "taxonomy: bad parent of " + syn.id);
      parent_ids.emplace_back(s["parent"].get<std::string>());
    } else {
      parent_ids.emplace_back(std::nullopt);
    }
    if (s.contains("words")) {
      for (const auto& w : s["words"]) {
        if (!w.is_string()) throw DataError(DataErrorKind::kMalformed, "taxonomy: non-string word in " + syn.id);
        std::string word = w.get<std::string>();
        std::transform(word.begin(), word.end(), word.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        syn.words.push_back(std::move(word));
      }
    }
    tax.synsets_.push_back(std::move(syn));
  }

  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < tax.synsets_.size(); ++i) {
    if (!parent_ids[i]) {
      if (root) {
        throw DataError(DataErrorKind::kTaxonomyRoot,
                        "taxonomy has two roots: " + tax.synsets_[*root].id + " and " + tax.synsets_[i].id);
      }
      root = i;
      continue;
    }
    auto it = by_id.find(*parent_ids[i]);
    if (it == by_id.end()) {
      throw DataError(DataErrorKind::kTaxonomyOrphan,
                      "synset " + tax.synsets_[i].id + " has unknown parent " + *parent_ids[i]);
    }
    tax.synsets_[i].parent = it->second;
  }
  if (!root) throw DataError(DataErrorKind::kTaxonomyRoot, "taxonomy has no root synset");
  tax.root_ = *root;

  // Depths; a walk longer than the synset count means a cycle.
  for (std::size_t i = 0; i < tax.synsets_.size(); ++i) {
    int depth = 1;
    std::size_t cur = i;
    while (tax.synsets_[cur].parent) {
      cur = *tax.synsets_[cur].parent;
      if (++depth > static_cast<int>(tax.synsets_.size())) {
        throw DataError(DataErrorKind::kTaxonomyCycle, "hypernym cycle through synset " + tax.synsets_[i].id);
      }
    }
    tax.synsets_[i].depth = depth;
  }

  for (std::size_t i = 0; i < tax.synsets_.size(); ++i) {
    for (const auto& w : tax.synsets_[i].words) {
      auto& senses = tax.word_senses_[w];
      if (std::find(senses.begin(), senses.end(), i) == senses.end()) senses.push_back(i);
    }
  }
  return tax;
}

Taxonomy load_taxonomy(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError(DataErrorKind::kMissingData, "cannot open taxonomy " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_taxonomy(ss.str());
}

namespace {

template <class Score>
double best_over_senses(std::string_view w1, std::string_view w2, const Taxonomy& tax, Score score) {
  double best = 0.0;
  for (std::size_t a : tax.senses(w1)) {
    for (std::size_t b : tax.senses(w2)) best = std::max(best, score(a, b));
  }
  return best;
}

}  // namespace

double path_similarity(std::string_view w1, std::string_view w2, const Taxonomy& tax) {
  return best_over_senses(w1, w2, tax, [&](std::size_t a, std::size_t b) {
    const auto& s = tax.synsets();
    int edges = s[a].depth + s[b].depth - 2 * s[tax.lcs(a, b)].depth;
    return 1.0 / (edges + 1);
  });
}

double wup_similarity(std::string_view w1, std::string_view w2, const Taxonomy& tax) {
  return best_over_senses(w1, w2, tax, [&](std::size_t a, std::size_t b) {
    const auto& s = tax.synsets();
    return 2.0 * s[tax.lcs(a, b)].depth / (s[a].depth + s[b].depth);
  });
}

double similarity(std::string_view w1, std::string_view w2, const Taxonomy& tax, SimilarityMetric metric) {
  return metric == SimilarityMetric::kPath ? path_similarity(w1, w2, tax) : wup_similarity(w1, w2, tax);
}

double schema_name_similarity(std::string_view keyword, std::string_view schema_name, const Taxonomy& tax,
                              SimilarityMetric metric) {
  double best = 0.0;
  for (const auto& token : tokenize(schema_name)) best = std::max(best, similarity(keyword, token, tax, metric));
  return best;
}

}  // namespace kwsql
