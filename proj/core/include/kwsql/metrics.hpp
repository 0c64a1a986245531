#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kwsql/pipeline.hpp"

namespace kwsql {

struct QuerySetEntry {
  std::string id;
  std::string keywords;
  std::string golden_cjn;  // rooted or canonical network form
  std::string golden_qm;   // `{KM; KM}`
};

/// JSON list of {"id", "keywords", "golden_cjn", "golden_qm"}.
std::vector<QuerySetEntry> parse_query_set(std::string_view json_text);
std::vector<QuerySetEntry> load_query_set(const std::filesystem::path& file);

/// Parses `{KM1; KM2}` into a query match with sorted members.
QueryMatch parse_query_match(std::string_view text);

inline constexpr std::size_t kMaxK = 10;

struct MetricsReport {
  std::array<double, kMaxK> p_at_k{};  // p_at_k[k - 1] is P@k
  double mrr = 0.0;
  std::map<std::string, double> per_query_rr;
};

/// `ranked` maps a query id to its ranked results, `relevant` maps it to the
/// one relevant result. Throws UsageError when the id sets differ.
MetricsReport compute_metrics(const std::map<std::string, std::vector<std::string>>& ranked,
                              const std::map<std::string, std::string>& relevant);

struct QueryOutcome {
  std::string id;
  std::vector<std::string> cjns;  // canonical, ranked
  std::vector<std::string> qms;   // ranked
  std::string golden_cjn;         // canonicalized
  std::string golden_qm;          // canonicalized
};

struct EvaluationReport {
  std::vector<QueryOutcome> queries;
  MetricsReport cjn;
  MetricsReport qm;
};

/// Runs every query and scores both the CJN and the query-match rankings.
/// Golden structures are validated against the dataset's schema graph.
EvaluationReport evaluate_query_set(const Dataset& ds, const Taxonomy& tax, const std::vector<QuerySetEntry>& entries,
                                    const EngineConfig& cfg);

struct StatsRow {
  std::string id;
  std::size_t kms = 0;   // value and schema keyword matches
  std::size_t qms = 0;   // all query matches
  std::size_t cjns = 0;  // CJNs over all query matches, no per-QM limit
};

struct StatsSummary {
  std::size_t max = 0;
  double avg = 0.0;
};

struct StatsReport {
  std::vector<StatsRow> rows;
  StatsSummary kms;
  StatsSummary qms;
  StatsSummary cjns;
};

StatsReport stats_report(const Dataset& ds, const Taxonomy& tax, const std::vector<QuerySetEntry>& entries,
                         const EngineConfig& cfg);

}  // namespace kwsql
