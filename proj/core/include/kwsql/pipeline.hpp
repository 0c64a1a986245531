#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kwsql/catalog.hpp"
#include "kwsql/cjn.hpp"
#include "kwsql/executor.hpp"
#include "kwsql/indexes.hpp"
#include "kwsql/matching.hpp"
#include "kwsql/query_matching.hpp"
#include "kwsql/similarity.hpp"

namespace kwsql {

/// A loaded instance with its indexes and schema graph.
struct Dataset {
  std::string name;
  std::filesystem::path dir;
  DatabaseInstance db;
  ValueIndex value_index;
  SchemaIndex schema_index;
  SchemaGraph graph;
  bool indexes_from_cache = false;
};

/// Cache file used by `open_dataset` for a dataset directory.
std::filesystem::path index_cache_path(const std::filesystem::path& dir);

/// Loads a dataset directory. When `use_cache` is set, a valid index cache is
/// used instead of rebuilding; a stale or missing one is ignored.
Dataset open_dataset(const std::filesystem::path& dir, bool use_cache = true);

/// Builds the indexes and writes the cache. Returns the fingerprint written.
std::uint64_t write_index_cache(const Dataset& ds);

struct EngineConfig {
  SetupConfig setup;
  SimilarityConfig similarity;
  std::size_t max_qm_size = 3;

  void validate() const;
};

struct QueryResult {
  KeywordQuery query;
  std::vector<KeywordMatch> vkms;
  std::vector<KeywordMatch> skms;
  /// Every query match, ranked.
  std::vector<std::shared_ptr<const QueryMatch>> query_matches;
  CjnGeneration cjns;
};

/// Phases 1-3: keyword matching, query matching and ranking, CJN generation
/// with optional eager probing against the dataset.
QueryResult run_query(const Dataset& ds, const Taxonomy& tax, std::string_view query, const EngineConfig& cfg);

}  // namespace kwsql
