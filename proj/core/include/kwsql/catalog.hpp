#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kwsql {

using TupleId = std::int64_t;

struct RelationSchema {
  std::string name;
  std::vector<std::string> attributes;
  std::string primary_key;

  std::optional<std::size_t> attribute_index(std::string_view attribute) const;
  std::size_t primary_key_index() const;

  friend bool operator==(const RelationSchema&, const RelationSchema&) = default;
};

/// A single-attribute foreign key. It always references the primary key of
/// `to_relation`.
struct ForeignKey {
  std::string from_relation;
  std::string from_attribute;
  std::string to_relation;

  std::string to_string() const { return from_relation + "." + from_attribute + "->" + to_relation; }

  friend auto operator<=>(const ForeignKey&, const ForeignKey&) = default;
};

/// Values are kept as strings. An empty string stands for NULL.
struct Tuple {
  TupleId id = 0;
  std::vector<std::string> values;

  friend bool operator==(const Tuple&, const Tuple&) = default;
};

struct Relation {
  RelationSchema schema;
  std::vector<Tuple> tuples;

  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Validated, immutable relational instance.
class DatabaseInstance {
 public:
  DatabaseInstance() = default;

  /// Validates the schema and data; throws DataError on the first violation.
  DatabaseInstance(std::vector<Relation> relations, std::vector<ForeignKey> foreign_keys);

  const std::vector<Relation>& relations() const { return relations_; }
  const std::vector<ForeignKey>& foreign_keys() const { return foreign_keys_; }

  const Relation* find_relation(std::string_view name) const;
  /// Throws std::out_of_range for unknown relations.
  const Relation& relation(std::string_view name) const;

  /// Position of the tuple with the given primary-key value, if any.
  std::optional<std::size_t> find_by_key(std::string_view relation, std::string_view key) const;
  std::optional<std::size_t> find_by_id(std::string_view relation, TupleId id) const;

  std::size_t tuple_count() const;
  /// Total number of attributes over all relations.
  std::size_t attribute_count() const;

  friend bool operator==(const DatabaseInstance& a, const DatabaseInstance& b) {
    return a.relations_ == b.relations_ && a.foreign_keys_ == b.foreign_keys_;
  }

 private:
  void validate_and_index();

  std::vector<Relation> relations_;
  std::vector<ForeignKey> foreign_keys_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
  std::vector<std::unordered_map<std::string, std::size_t>> key_index_;
  std::vector<std::unordered_map<TupleId, std::size_t>> id_index_;
};

/// Loads a schema JSON document plus one CSV file per relation. Each CSV file
/// is matched to its relation by file stem (case-insensitive).
DatabaseInstance load_dataset(const std::filesystem::path& schema_file,
                              const std::vector<std::filesystem::path>& data_files);

/// Loads `<dir>/schema.json` and every `<dir>/*.csv`.
DatabaseInstance load_dataset_dir(const std::filesystem::path& dir);

/// Writes `schema.json` and one CSV per relation into `dir`.
void save_dataset(const DatabaseInstance& db, const std::filesystem::path& dir);

/// Lowercased alphanumeric runs of `value`. Everything that is not a letter or
/// a digit separates terms.
std::vector<std::string> tokenize(std::string_view value);

/// Directed relation graph; one edge per ordered pair with at least one FK.
class SchemaGraph {
 public:
  SchemaGraph() = default;
  SchemaGraph(std::vector<std::string> nodes, const std::vector<ForeignKey>& foreign_keys);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::map<std::pair<std::string, std::string>, std::vector<ForeignKey>>& edges() const { return edges_; }

  /// FKs from `from` to `to`, in declaration order.
  const std::vector<ForeignKey>& foreign_keys(std::string_view from, std::string_view to) const;
  /// Number of referential integrity constraints from `from` to `to`.
  std::size_t ric(std::string_view from, std::string_view to) const;
  /// Relations adjacent to `relation` when edge direction is ignored, in node order.
  const std::vector<std::string>& undirected_neighbors(std::string_view relation) const;

 private:
  std::vector<std::string> nodes_;
  std::map<std::pair<std::string, std::string>, std::vector<ForeignKey>> edges_;
  std::map<std::string, std::vector<std::string>, std::less<>> neighbors_;
};

SchemaGraph build_schema_graph(const DatabaseInstance& db);

}  // namespace kwsql
