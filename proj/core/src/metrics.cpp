#include "kwsql/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kwsql/error.hpp"

namespace kwsql {

std::vector<QuerySetEntry> parse_query_set(std::string_view json_text) {
  using json = nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(DataErrorKind::kMalformed, std::string("query set: ") + e.what());
  }
  if (!doc.is_array()) throw DataError(DataErrorKind::kMalformed, "query set: expected a JSON list");
  std::vector<QuerySetEntry> out;
  std::set<std::string> ids;
  for (const auto& e : doc) {
    auto field = [&](const char* key) {
      if (!e.is_object() || !e.contains(key) || !e[key].is_string()) {
        throw DataError(DataErrorKind::kMalformed, std::string("query set: entry without string field '") + key + "'");
      }
      return e[key].get<std::string>();
    };
    QuerySetEntry entry{field("id"), field("keywords"), field("golden_cjn"), field("golden_qm")};
    if (!ids.insert(entry.id).second) {
      throw DataError(DataErrorKind::kMalformed, "query set: id " + entry.id + " repeated");
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<QuerySetEntry> load_query_set(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError(DataErrorKind::kMissingData, "cannot open query set " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_query_set(ss.str());
}

QueryMatch parse_query_match(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw DataError(DataErrorKind::kMalformed, "query match '" + std::string(text) + "' must be wrapped in braces");
  }
  std::string_view body = text.substr(1, text.size() - 2);
  std::vector<KeywordMatch> kms;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t semi = body.find(';', start);
    std::string_view part = trim(body.substr(start, semi == std::string_view::npos ? body.size() - start : semi - start));
    if (part.empty()) throw DataError(DataErrorKind::kMalformed, "query match '" + std::string(text) + "': empty member");
    kms.push_back(parse_keyword_match(part));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return make_query_match(std::move(kms));
}

MetricsReport compute_metrics(const std::map<std::string, std::vector<std::string>>& ranked,
                              const std::map<std::string, std::string>& relevant) {
  MetricsReport report;
  for (const auto& [id, _] : ranked) {
    if (!relevant.count(id)) throw UsageError("result for unknown query id " + id);
  }
  for (const auto& [id, _] : relevant) {
    if (!ranked.count(id)) throw UsageError("no result for query id " + id);
  }
  if (relevant.empty()) return report;

  std::array<std::size_t, kMaxK> hits{};
  double rr_sum = 0.0;
  for (const auto& [id, target] : relevant) {
    const auto& list = ranked.at(id);
    auto it = std::find(list.begin(), list.end(), target);
    double rr = 0.0;
    if (it != list.end()) {
      std::size_t rank = static_cast<std::size_t>(it - list.begin()) + 1;
      rr = 1.0 / static_cast<double>(rank);
      for (std::size_t k = rank; k <= kMaxK; ++k) ++hits[k - 1];
    }
    report.per_query_rr[id] = rr;
    rr_sum += rr;
  }
  double n = static_cast<double>(relevant.size());
  for (std::size_t k = 0; k < kMaxK; ++k) report.p_at_k[k] = static_cast<double>(hits[k]) / n;
  report.mrr = rr_sum / n;
  return report;
}

EvaluationReport evaluate_query_set(const Dataset& ds, const Taxonomy& tax, const std::vector<QuerySetEntry>& entries,
                                    const EngineConfig& cfg) {
  EvaluationReport report;
  std::map<std::string, std::vector<std::string>> cjn_ranked;
  std::map<std::string, std::vector<std::string>> qm_ranked;
  std::map<std::string, std::string> cjn_relevant;
  std::map<std::string, std::string> qm_relevant;

  for (const auto& e : entries) {
    JoiningNetwork golden = parse_network(e.golden_cjn, ds.graph);
    if (!is_tree_over(golden, ds.graph)) {
      throw DataError(DataErrorKind::kMalformed, "query " + e.id + ": golden network does not fit the schema graph");
    }
    QueryOutcome out;
    out.id = e.id;
    out.golden_cjn = golden.canonical();
    out.golden_qm = parse_query_match(e.golden_qm).to_string();

    QueryResult r = run_query(ds, tax, e.keywords, cfg);
    for (const auto& j : r.cjns.networks) out.cjns.push_back(j.canonical());
    for (const auto& qm : r.query_matches) out.qms.push_back(qm->to_string());

    cjn_ranked[e.id] = out.cjns;
    qm_ranked[e.id] = out.qms;
    cjn_relevant[e.id] = out.golden_cjn;
    qm_relevant[e.id] = out.golden_qm;
    report.queries.push_back(std::move(out));
  }
  report.cjn = compute_metrics(cjn_ranked, cjn_relevant);
  report.qm = compute_metrics(qm_ranked, qm_relevant);
  return report;
}

StatsReport stats_report(const Dataset& ds, const Taxonomy& tax, const std::vector<QuerySetEntry>& entries,
                         const EngineConfig& cfg) {
  cfg.validate();
  StatsReport report;
  for (const auto& e : entries) {
    StatsRow row;
    row.id = e.id;
    KeywordQuery q = KeywordQuery::parse(e.keywords);
    auto vkms = vkm_generate(q, ds.value_index);
    auto skms = skm_generate(q, ds.db, cfg.similarity, tax);
    row.kms = vkms.size() + skms.size();
    auto qms = qm_rank(qm_generate(q, vkms, skms, cfg.max_qm_size), ds.value_index, ds.schema_index, tax,
                       cfg.similarity);
    row.qms = qms.size();
    for (auto& qm : qms) {
      auto shared = std::make_shared<const QueryMatch>(std::move(qm));
      row.cjns += cjn_interleave(shared, ds.graph, cfg.setup).size();
    }
    report.rows.push_back(std::move(row));
  }
  auto summarize = [&](auto member) {
    StatsSummary s;
    if (report.rows.empty()) return s;
    double total = 0.0;
    for (const auto& row : report.rows) {
      s.max = std::max(s.max, row.*member);
      total += static_cast<double>(row.*member);
    }
    s.avg = total / static_cast<double>(report.rows.size());
    return s;
  };
  report.kms = summarize(&StatsRow::kms);
  report.qms = summarize(&StatsRow::qms);
  report.cjns = summarize(&StatsRow::cjns);
  return report;
}

}  // namespace kwsql
