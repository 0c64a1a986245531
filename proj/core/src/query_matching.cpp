#include "kwsql/query_matching.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace kwsql {

std::string QueryMatch::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < matches.size(); ++i) {
    if (i > 0) out += "; ";
    out += matches[i].to_string();
  }
  return out + "}";
}

QueryMatch make_query_match(std::vector<KeywordMatch> matches) {
  QueryMatch qm;
  std::sort(matches.begin(), matches.end());
  matches.erase(std::unique(matches.begin(), matches.end()), matches.end());
  for (const auto& km : matches) {
    auto kws = km.keywords();
    qm.covered.insert(kws.begin(), kws.end());
  }
  qm.matches = std::move(matches);
  qm.value_contributions.assign(qm.matches.size(), 1.0);
  return qm;
}

bool minimal_cover(const std::vector<KeywordMatch>& m, const KeywordQuery& q) {
  KeywordSet query(q.keywords.begin(), q.keywords.end());
  KeywordSet covered;
  for (const auto& km : m) {
    auto kws = km.keywords();
    covered.insert(kws.begin(), kws.end());
  }
  if (covered != query) return false;
  for (std::size_t i = 0; i < m.size(); ++i) {
    KeywordSet rest;
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j == i) continue;
      auto kws = m[j].keywords();
      rest.insert(kws.begin(), kws.end());
    }
    if (rest == query) return false;
  }
  return true;
}

std::vector<KeywordMatch> merge_keyword_matches(const std::vector<KeywordMatch>& m) {
  std::map<std::string, std::vector<KeywordMatch>> vkms;
  std::map<std::string, std::vector<KeywordMatch>> skms;
  for (const auto& km : m) (km.has_values() ? vkms : skms)[km.relation].push_back(km);

  std::vector<KeywordMatch> out;
  for (auto& [rel, group] : skms) {
    KeywordMatch merged(rel);
    for (const auto& s : group) merged = *km_intersect(merged, s);
    auto vit = vkms.find(rel);
    if (vit != vkms.end() && !vit->second.empty()) {
      auto least = std::min_element(vit->second.begin(), vit->second.end(),
                                    [](const KeywordMatch& a, const KeywordMatch& b) {
                                      return a.to_string() < b.to_string();
                                    });
      merged = *km_intersect(merged, *least);
      vit->second.erase(least);
    }
    out.push_back(std::move(merged));
  }
  // VKMs of relations without schema matches are kept too.
  for (auto& [rel, group] : vkms) {
    for (auto& km : group) out.push_back(std::move(km));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<KeywordMatch>> enumerate_minimal_covers(const KeywordQuery& q,
                                                                const std::vector<KeywordMatch>& vkms,
                                                                const std::vector<KeywordMatch>& skms,
                                                                std::size_t max_size) {
  std::vector<KeywordMatch> pool;
  std::set<KeywordMatch> seen;
  for (const auto* src : {&vkms, &skms}) {
    for (const auto& km : *src) {
      if (!km.is_free() && seen.insert(km).second) pool.push_back(km);
    }
  }
  std::size_t limit = std::min(q.keywords.size(), max_size);
  std::vector<std::vector<KeywordMatch>> out;
  std::vector<std::size_t> idx;
  std::vector<KeywordMatch> current;
  // Combinations by increasing size, lexicographic within a size.
  for (std::size_t size = 1; size <= limit && size <= pool.size(); ++size) {
    idx.resize(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      current.clear();
      for (std::size_t i : idx) current.push_back(pool[i]);
      if (minimal_cover(current, q)) out.push_back(current);
      std::size_t i = size;
      while (i > 0 && idx[i - 1] == pool.size() - size + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

std::vector<QueryMatch> qm_generate(const KeywordQuery& q, const std::vector<KeywordMatch>& vkms,
                                    const std::vector<KeywordMatch>& skms, std::size_t max_size) {
  std::vector<QueryMatch> out;
  std::set<std::vector<KeywordMatch>> seen;
  for (auto& cover : enumerate_minimal_covers(q, vkms, skms, max_size)) {
    QueryMatch qm = make_query_match(merge_keyword_matches(cover));
    if (seen.insert(qm.matches).second) out.push_back(std::move(qm));
  }
  return out;
}

void score_query_match(QueryMatch& qm, const ValueIndex& vi, const SchemaIndex& si, const Taxonomy& tax,
                       const SimilarityConfig& cfg) {
  double value_score = 1.0;
  double schema_score = 1.0;
  qm.value_contributions.assign(qm.matches.size(), 1.0);
  for (std::size_t i = 0; i < qm.matches.size(); ++i) {
    const auto& km = qm.matches[i];
    for (const auto& [attr, kws] : km.value_map) {
      double weight_sum = 0.0;
      for (const auto& word : kws) {
        weight_sum += static_cast<double>(vi.frequency(word, km.relation, attr)) * vi.iaf(word);
      }
      double norm = si.stats(km.relation, attr).norm;
      if (norm == 0.0) {
        throw std::logic_error("attribute " + km.relation + "." + attr + " has zero norm but carries value keywords");
      }
      value_score *= weight_sum / norm;
      qm.value_contributions[i] *= weight_sum / norm;
    }
    for (const auto& [attr, kws] : km.schema_map) {
      const std::string& element = attr == kSelf ? km.relation : attr;
      double weight_sum = 0.0;
      for (const auto& word : kws) weight_sum += schema_name_similarity(word, element, tax, cfg.metric);
      schema_score *= weight_sum / static_cast<double>(kws.size());
    }
  }
  qm.weights = {value_score, schema_score, value_score * schema_score};
}

std::vector<QueryMatch> qm_rank(std::vector<QueryMatch> qms, const ValueIndex& vi, const SchemaIndex& si,
                                const Taxonomy& tax, const SimilarityConfig& cfg) {
  for (auto& qm : qms) score_query_match(qm, vi, si, tax, cfg);
  std::stable_sort(qms.begin(), qms.end(),
                   [](const QueryMatch& a, const QueryMatch& b) { return a.score() > b.score(); });
  return qms;
}

}  // namespace kwsql
