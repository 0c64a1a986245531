#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kwsql/catalog.hpp"
#include "kwsql/cjn.hpp"

namespace kwsql {

inline constexpr std::size_t kDefaultEvaluationLimit = 1000;

struct ProjectedValue {
  std::size_t node = 0;
  std::string attribute;
  std::string value;

  friend bool operator==(const ProjectedValue&, const ProjectedValue&) = default;
};

/// One answer: a tuple per network node.
struct JoiningNetworkOfTuples {
  std::vector<TupleId> assignment;  // indexed by node
  std::vector<ProjectedValue> projected;

  friend bool operator==(const JoiningNetworkOfTuples&, const JoiningNetworkOfTuples&) = default;
};

/// Nodes with value keywords admit a tuple when each attribute's terms contain
/// the mapped keywords. Schema and free nodes admit every tuple. Edges join on
/// their foreign key; a null key never joins. Nodes over the same relation take
/// distinct tuples.
std::vector<JoiningNetworkOfTuples> evaluate(const JoiningNetwork& cjn, const DatabaseInstance& db,
                                             std::optional<std::size_t> limit = kDefaultEvaluationLimit);

/// True iff `evaluate` would return at least one answer.
bool probe_nonvoid(const JoiningNetwork& cjn, const DatabaseInstance& db);

/// (node, attribute) pairs named by the network's matches; a `self` schema
/// match names every column of its relation. Breadth-first node order from
/// node 0, no repeats.
std::vector<std::pair<std::size_t, std::string>> projection(const JoiningNetwork& cjn, const DatabaseInstance& db);

enum class SqlDialect {
  kPortable,  // LOWER(col) LIKE '%kw%'
  kPostgres,  // col ILIKE '%kw%'
};

struct SqlQuery {
  std::string text;
  std::vector<std::string> aliases;  // indexed by node
};

SqlQuery emit_sql(const JoiningNetwork& cjn, const DatabaseInstance& db, SqlDialect dialect = SqlDialect::kPortable);

}  // namespace kwsql
