#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "kwsql/error.hpp"
#include "kwsql/executor.hpp"
#include "kwsql/metrics.hpp"
#include "kwsql/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string data_dir;
  std::string taxonomy;
  std::string dataset;
  std::string keywords;
  std::string query_set;
  kwsql::EngineConfig engine;
  std::string metric = "path";
  bool no_eager = false;
  bool emit_sql = false;
  bool postgres = false;
  bool as_json = false;
  bool no_cache = false;
  std::size_t limit = kwsql::kDefaultEvaluationLimit;
  std::size_t answers = 1;
};

std::string default_data_dir() {
  if (const char* env = std::getenv("KWSQL_DATA_DIR"); env && *env) return env;
  return KWSQL_DEFAULT_DATA_DIR;
}

// A dataset is either a directory path or a name under the data directory.
fs::path resolve_dataset(const Options& o) {
  fs::path direct(o.dataset);
  if (fs::is_directory(direct) && fs::exists(direct / "schema.json")) return direct;
  fs::path named = fs::path(o.data_dir) / o.dataset;
  if (fs::is_directory(named) && fs::exists(named / "schema.json")) return named;
  throw kwsql::UsageError("unknown dataset: " + o.dataset);
}

kwsql::Taxonomy open_taxonomy(const Options& o) {
  fs::path file = o.taxonomy.empty() ? fs::path(o.data_dir) / "mini_wordnet.json" : fs::path(o.taxonomy);
  return kwsql::load_taxonomy(file);
}

kwsql::EngineConfig engine_config(const Options& o) {
  kwsql::EngineConfig cfg = o.engine;
  cfg.similarity.metric = kwsql::parse_metric(o.metric);
  if (o.no_eager) cfg.setup.p_cjn = 0;
  cfg.validate();
  return cfg;
}

fs::path query_set_path(const Options& o, const fs::path& dataset_dir) {
  return o.query_set.empty() ? dataset_dir / "queries.json" : fs::path(o.query_set);
}

std::string node_label(const kwsql::JoiningNetwork& j, std::size_t node) {
  return fmt::format("{}#{}", j.nodes[node].relation, node);
}

json answers_json(const kwsql::JoiningNetwork& j, const std::vector<kwsql::JoiningNetworkOfTuples>& jnts) {
  json out = json::array();
  for (const auto& t : jnts) {
    json row;
    row["tuples"] = t.assignment;
    json values = json::array();
    for (const auto& p : t.projected) {
      values.push_back({{"node", node_label(j, p.node)}, {"attribute", p.attribute}, {"value", p.value}});
    }
    row["values"] = values;
    out.push_back(row);
  }
  return out;
}

int cmd_index(const Options& o) {
  fs::path dir = resolve_dataset(o);
  kwsql::Dataset ds = kwsql::open_dataset(dir, !o.no_cache);
  std::uint64_t fp = kwsql::write_index_cache(ds);
  if (o.as_json) {
    json out = {{"dataset", ds.name},
                {"relations", ds.db.relations().size()},
                {"tuples", ds.db.tuple_count()},
                {"attributes", ds.db.attribute_count()},
                {"terms", ds.value_index.terms().size()},
                {"fingerprint", fmt::format("{:016x}", fp)},
                {"cache", kwsql::index_cache_path(dir).string()}};
    std::cout << out.dump(2) << '\n';
  } else {
    fmt::print("dataset     {}\n", ds.name);
    fmt::print("relations   {}\n", ds.db.relations().size());
    fmt::print("tuples      {}\n", ds.db.tuple_count());
    fmt::print("attributes  {}\n", ds.db.attribute_count());
    fmt::print("terms       {}\n", ds.value_index.terms().size());
    fmt::print("fingerprint {:016x}\n", fp);
    fmt::print("cache       {}\n", kwsql::index_cache_path(dir).string());
  }
  return 0;
}

int cmd_query(const Options& o) {
  kwsql::EngineConfig cfg = engine_config(o);
  kwsql::Dataset ds = kwsql::open_dataset(resolve_dataset(o), !o.no_cache);
  kwsql::Taxonomy tax = open_taxonomy(o);
  kwsql::QueryResult r = kwsql::run_query(ds, tax, o.keywords, cfg);
  auto dialect = o.postgres ? kwsql::SqlDialect::kPostgres : kwsql::SqlDialect::kPortable;

  const auto& cjns = r.cjns.networks;
  std::size_t evaluated = std::min(o.answers, cjns.size());
  std::vector<std::vector<kwsql::JoiningNetworkOfTuples>> answers;
  for (std::size_t i = 0; i < evaluated; ++i) answers.push_back(kwsql::evaluate(cjns[i], ds.db, o.limit));

  std::size_t pruned = 0;
  for (const auto& t : r.cjns.trace)
    for (const auto& c : t.candidates)
      if (c.outcome == kwsql::ProbeOutcome::kVoid) ++pruned;

  if (o.as_json) {
    json out;
    out["query"] = r.query.raw;
    out["keywords"] = r.query.keywords;
    out["vkms"] = json::array();
    for (const auto& km : r.vkms) out["vkms"].push_back(km.to_string());
    out["skms"] = json::array();
    for (const auto& km : r.skms) out["skms"].push_back(km.to_string());
    out["query_matches"] = json::array();
    for (const auto& qm : r.query_matches)
      out["query_matches"].push_back({{"match", qm->to_string()}, {"score", qm->score()}});
    out["cjns"] = json::array();
    for (std::size_t i = 0; i < cjns.size(); ++i) {
      json c = {{"rank", i + 1},
                {"network", cjns[i].canonical()},
                {"score", cjns[i].score},
                {"query_match", cjns[i].origin ? cjns[i].origin->to_string() : ""}};
      if (o.emit_sql) c["sql"] = kwsql::emit_sql(cjns[i], ds.db, dialect).text;
      if (i < evaluated) c["answers"] = answers_json(cjns[i], answers[i]);
      out["cjns"].push_back(c);
    }
    out["pruned_void"] = json::array();
    for (const auto& t : r.cjns.trace)
      for (const auto& c : t.candidates)
        if (c.outcome == kwsql::ProbeOutcome::kVoid) out["pruned_void"].push_back(c.network.canonical());
    out["diagnostics"] = r.cjns.diagnostics;
    std::cout << out.dump(2) << '\n';
    return 0;
  }

  fmt::print("query: {}\n", r.query.raw);
  fmt::print("keywords: {}\n", fmt::join(r.query.keywords, " "));
  fmt::print("\nvalue keyword matches ({})\n", r.vkms.size());
  for (const auto& km : r.vkms) fmt::print("  {}\n", km.to_string());
  fmt::print("\nschema keyword matches ({})\n", r.skms.size());
  for (const auto& km : r.skms) fmt::print("  {}\n", km.to_string());
  if (r.query_matches.empty()) {
    fmt::print("\nno query matches\n");
    return 0;
  }
  fmt::print("\nquery matches ({})\n", r.query_matches.size());
  for (std::size_t i = 0; i < r.query_matches.size(); ++i)
    fmt::print("  {:>3}  {:.6f}  {}\n", i + 1, r.query_matches[i]->score(), r.query_matches[i]->to_string());

  fmt::print("\ncandidate joining networks ({}, {} pruned as void)\n", cjns.size(), pruned);
  for (std::size_t i = 0; i < cjns.size(); ++i) {
    fmt::print("  {:>3}  {:.6f}  {}\n", i + 1, cjns[i].score, cjns[i].canonical());
    if (o.emit_sql) {
      std::string sql = kwsql::emit_sql(cjns[i], ds.db, dialect).text;
      fmt::print("\n{}\n", sql);
    }
  }
  for (const auto& d : r.cjns.diagnostics) fmt::print("  note: {}\n", d);

  for (std::size_t i = 0; i < evaluated; ++i) {
    fmt::print("\nanswers for network {} ({})\n", i + 1, answers[i].size());
    for (const auto& t : answers[i]) {
      std::vector<std::string> cells;
      for (const auto& p : t.projected)
        cells.push_back(fmt::format("{}.{}={}", node_label(cjns[i], p.node), p.attribute, p.value));
      fmt::print("  {}\n", fmt::join(cells, " | "));
    }
  }
  return 0;
}

void print_metrics(const char* title, const kwsql::MetricsReport& m) {
  fmt::print("{}\n", title);
  for (std::size_t k = 1; k <= kwsql::kMaxK; ++k) fmt::print("  P@{:<2} {:.4f}\n", k, m.p_at_k[k - 1]);
  fmt::print("  MRR  {:.4f}\n", m.mrr);
}

json metrics_json(const kwsql::MetricsReport& m) {
  json p;
  for (std::size_t k = 1; k <= kwsql::kMaxK; ++k) p[std::to_string(k)] = m.p_at_k[k - 1];
  return {{"p_at_k", p}, {"mrr", m.mrr}, {"per_query_rr", m.per_query_rr}};
}

int cmd_eval(const Options& o) {
  kwsql::EngineConfig cfg = engine_config(o);
  fs::path dir = resolve_dataset(o);
  kwsql::Dataset ds = kwsql::open_dataset(dir, !o.no_cache);
  kwsql::Taxonomy tax = open_taxonomy(o);
  auto entries = kwsql::load_query_set(query_set_path(o, dir));
  auto report = kwsql::evaluate_query_set(ds, tax, entries, cfg);

  if (o.as_json) {
    json queries = json::array();
    for (const auto& q : report.queries) {
      queries.push_back({{"id", q.id},
                         {"golden_cjn", q.golden_cjn},
                         {"golden_qm", q.golden_qm},
                         {"cjns", q.cjns},
                         {"qms", q.qms}});
    }
    json out = {{"dataset", ds.name},
                {"queries", queries},
                {"cjn", metrics_json(report.cjn)},
                {"qm", metrics_json(report.qm)}};
    std::cout << out.dump(2) << '\n';
    return 0;
  }

  fmt::print("dataset {} ({} queries)\n\n", ds.name, report.queries.size());
  fmt::print("  {:<8} {:>7} {:>7}\n", "id", "RR cjn", "RR qm");
  for (const auto& q : report.queries)
    fmt::print("  {:<8} {:>7.4f} {:>7.4f}\n", q.id, report.cjn.per_query_rr.at(q.id), report.qm.per_query_rr.at(q.id));
  fmt::print("\n");
  print_metrics("candidate joining networks", report.cjn);
  print_metrics("query matches", report.qm);
  return 0;
}

int cmd_stats(const Options& o) {
  kwsql::EngineConfig cfg = engine_config(o);
  fs::path dir = resolve_dataset(o);
  kwsql::Dataset ds = kwsql::open_dataset(dir, !o.no_cache);
  kwsql::Taxonomy tax = open_taxonomy(o);
  auto entries = kwsql::load_query_set(query_set_path(o, dir));
  auto report = kwsql::stats_report(ds, tax, entries, cfg);

  if (o.as_json) {
    json rows = json::array();
    for (const auto& r : report.rows) rows.push_back({{"id", r.id}, {"kms", r.kms}, {"qms", r.qms}, {"cjns", r.cjns}});
    auto summary = [](const kwsql::StatsSummary& s) { return json{{"max", s.max}, {"avg", s.avg}}; };
    json out = {{"dataset", ds.name},
                {"rows", rows},
                {"kms", summary(report.kms)},
                {"qms", summary(report.qms)},
                {"cjns", summary(report.cjns)}};
    std::cout << out.dump(2) << '\n';
    return 0;
  }

  fmt::print("  {:<8} {:>6} {:>6} {:>6}\n", "id", "KMs", "QMs", "CJNs");
  for (const auto& r : report.rows) fmt::print("  {:<8} {:>6} {:>6} {:>6}\n", r.id, r.kms, r.qms, r.cjns);
  fmt::print("\n  {:<8} {:>6} {:>6} {:>6}\n", "max", report.kms.max, report.qms.max, report.cjns.max);
  fmt::print("  {:<8} {:>6.2f} {:>6.2f} {:>6.2f}\n", "avg", report.kms.avg, report.qms.avg, report.cjns.avg);
  return 0;
}

void add_engine_flags(CLI::App* cmd, Options& o) {
  auto& s = o.engine.setup;
  cmd->add_option("--top-qm", s.n_qm, "query matches kept after ranking")->capture_default_str();
  cmd->add_option("--cjn-per-qm", s.n_cjn, "networks kept per query match")->capture_default_str();
  cmd->add_option("--probe", s.p_cjn, "networks generated and probed per query match")->capture_default_str();
  cmd->add_option("--max-qm-size", o.engine.max_qm_size, "largest query match")->capture_default_str();
  cmd->add_option("--max-cjn-size", s.max_cjn_size, "largest joining network")->capture_default_str();
  cmd->add_option("--epsilon", o.engine.similarity.threshold, "schema similarity threshold")->capture_default_str();
  cmd->add_option("--metric", o.metric, "path or wup")->check(CLI::IsMember({"path", "wup"}))->capture_default_str();
  cmd->add_flag("--no-eager", o.no_eager, "generate without probing");
  cmd->add_option("--taxonomy", o.taxonomy, "taxonomy JSON (default: <data-dir>/mini_wordnet.json)");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  o.data_dir = default_data_dir();

  CLI::App app{"keyword search over relational data"};
  app.require_subcommand(1);
  app.add_option("--data-dir", o.data_dir, "where named datasets live")->capture_default_str();
  app.add_flag("--json", o.as_json, "machine-readable output");
  app.add_flag("--no-cache", o.no_cache, "ignore the on-disk index cache");

  auto* index = app.add_subcommand("index", "build and cache the indexes of a dataset");
  index->add_option("dataset", o.dataset, "dataset name or directory")->required();

  auto* query = app.add_subcommand("query", "answer a keyword query");
  query->add_option("dataset", o.dataset, "dataset name or directory")->required();
  query->add_option("keywords", o.keywords, "keyword query")->required();
  add_engine_flags(query, o);
  query->add_flag("--emit-sql", o.emit_sql, "print SQL for each network");
  query->add_flag("--postgres", o.postgres, "use ILIKE in emitted SQL");
  query->add_option("--limit", o.limit, "answers per evaluated network")->capture_default_str();
  query->add_option("--answers", o.answers, "how many top networks to evaluate")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "P@K and MRR against a golden query set");
  eval->add_option("dataset", o.dataset, "dataset name or directory")->required();
  eval->add_option("queries", o.query_set, "query set JSON (default: <dataset>/queries.json)");
  add_engine_flags(eval, o);

  auto* stats = app.add_subcommand("stats", "KM, QM and CJN counts for a query set");
  stats->add_option("dataset", o.dataset, "dataset name or directory")->required();
  stats->add_option("queries", o.query_set, "query set JSON (default: <dataset>/queries.json)");
  add_engine_flags(stats, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*index) return cmd_index(o);
    if (*query) return cmd_query(o);
    if (*eval) return cmd_eval(o);
    if (*stats) return cmd_stats(o);
  } catch (const kwsql::UsageError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return 1;
  } catch (const kwsql::DataError& e) {
    fmt::print(std::cerr, "data error: {}\n", e.what());
    return 2;
  }
  return 1;
}
