#include "kwsql/pipeline.hpp"

#include "kwsql/error.hpp"

namespace kwsql {

std::filesystem::path index_cache_path(const std::filesystem::path& dir) { return dir / ".kwsql-index"; }

Dataset open_dataset(const std::filesystem::path& dir, bool use_cache) {
  Dataset ds;
  ds.dir = dir;
  ds.name = dir.filename().string();
  if (ds.name.empty()) ds.name = dir.parent_path().filename().string();
  ds.db = load_dataset_dir(dir);
  ds.graph = build_schema_graph(ds.db);
  if (use_cache) {
    if (auto cached = load_index_cache(index_cache_path(dir), dataset_fingerprint(dir))) {
      ds.value_index = std::move(cached->first);
      ds.schema_index = std::move(cached->second);
      ds.indexes_from_cache = true;
      return ds;
    }
  }
  ds.value_index = build_value_index(ds.db);
  ds.schema_index = build_schema_index(ds.db, ds.value_index);
  return ds;
}

std::uint64_t write_index_cache(const Dataset& ds) {
  std::uint64_t fp = dataset_fingerprint(ds.dir);
  save_index_cache(index_cache_path(ds.dir), fp, ds.value_index, ds.schema_index);
  return fp;
}

void EngineConfig::validate() const {
  setup.validate();
  similarity.validate();
  if (max_qm_size == 0) throw UsageError("maximum query match size must be positive");
}

QueryResult run_query(const Dataset& ds, const Taxonomy& tax, std::string_view query, const EngineConfig& cfg) {
  cfg.validate();
  QueryResult r{KeywordQuery::parse(query), {}, {}, {}, {}};
  r.vkms = vkm_generate(r.query, ds.value_index);
  r.skms = skm_generate(r.query, ds.db, cfg.similarity, tax);

  auto ranked = qm_rank(qm_generate(r.query, r.vkms, r.skms, cfg.max_qm_size), ds.value_index, ds.schema_index, tax,
                        cfg.similarity);
  for (auto& qm : ranked) r.query_matches.push_back(std::make_shared<const QueryMatch>(std::move(qm)));

  Probe probe = [&ds](const JoiningNetwork& j) { return probe_nonvoid(j, ds.db); };
  r.cjns = cjn_generate(r.query_matches, ds.graph, cfg.setup, cfg.setup.p_cjn > 0 ? probe : Probe{});
  return r;
}

}  // namespace kwsql
