#include "kwsql/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "kwsql/error.hpp"

namespace kwsql {

std::string_view to_string(DataErrorKind kind) {
  switch (kind) {
    case DataErrorKind::kMalformed: return "malformed input";
    case DataErrorKind::kDanglingForeignKey: return "dangling foreign key";
    case DataErrorKind::kDuplicateTupleId: return "duplicate tuple id";
    case DataErrorKind::kSelfReferencingKey: return "self-referencing foreign key";
    case DataErrorKind::kMissingData: return "missing data";
    case DataErrorKind::kTaxonomyCycle: return "taxonomy cycle";
    case DataErrorKind::kTaxonomyOrphan: return "taxonomy orphan";
    case DataErrorKind::kTaxonomyRoot: return "taxonomy root";
  }
  return "data error";
}

std::optional<std::size_t> RelationSchema::attribute_index(std::string_view attribute) const {
  auto it = std::find(attributes.begin(), attributes.end(), attribute);
  if (it == attributes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - attributes.begin());
}

std::size_t RelationSchema::primary_key_index() const {
  auto idx = attribute_index(primary_key);
  if (!idx) throw std::logic_error("primary key " + primary_key + " not in relation " + name);
  return *idx;
}

namespace {

using json = nlohmann::json;

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(DataErrorKind::kMissingData, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TupleId parse_id(std::string_view text, const std::string& where) {
  TupleId value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(DataErrorKind::kMalformed, where + ": id '" + std::string(text) + "' is not an integer");
  }
  return value;
}

const std::string& require_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_string()) {
    throw DataError(DataErrorKind::kMalformed, where + ": missing string field '" + key + "'");
  }
  return obj.at(key).get_ref<const std::string&>();
}

struct SchemaDoc {
  std::vector<RelationSchema> relations;
  std::vector<ForeignKey> foreign_keys;
};

SchemaDoc parse_schema(const std::string& text, const std::string& where) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(DataErrorKind::kMalformed, where + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("relations") || !doc["relations"].is_array()) {
    throw DataError(DataErrorKind::kMalformed, where + ": expected an object with a 'relations' array");
  }
  SchemaDoc out;
  for (const auto& r : doc["relations"]) {
    RelationSchema schema;
    schema.name = require_string(r, "name", where);
    if (!r.contains("attributes") || !r["attributes"].is_array()) {
      throw DataError(DataErrorKind::kMalformed, where + ": relation " + schema.name + " has no attribute list");
    }
    for (const auto& a : r["attributes"]) {
      if (!a.is_string()) throw DataError(DataErrorKind::kMalformed, where + ": attribute names must be strings");
      schema.attributes.push_back(a.get<std::string>());
    }
    schema.primary_key = require_string(r, "primary_key", where);
    out.relations.push_back(std::move(schema));
  }
  if (doc.contains("foreign_keys")) {
    if (!doc["foreign_keys"].is_array()) {
      throw DataError(DataErrorKind::kMalformed, where + ": 'foreign_keys' must be an array");
    }
    for (const auto& f : doc["foreign_keys"]) {
      out.foreign_keys.push_back({require_string(f, "from_relation", where), require_string(f, "from_attribute", where),
                                  require_string(f, "to_relation", where)});
    }
  }
  return out;
}

Relation parse_relation_csv(const RelationSchema& schema, const std::string& text, const std::string& where) {
  Relation rel{schema, {}};
  auto records = csv::parse(text);
  if (records.empty()) return rel;  // empty file: no tuples

  // Header may list the attributes in any order.
  const auto& header = records.front();
  if (header.size() != schema.attributes.size()) {
    throw DataError(DataErrorKind::kMalformed, where + ": header has " + std::to_string(header.size()) +
                                                   " columns, relation " + schema.name + " declares " +
                                                   std::to_string(schema.attributes.size()));
  }
  std::vector<std::size_t> column_to_attr(header.size());
  std::set<std::size_t> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    auto idx = schema.attribute_index(header[c]);
    if (!idx || !seen.insert(*idx).second) {
      throw DataError(DataErrorKind::kMalformed, where + ": unexpected header column '" + header[c] + "'");
    }
    column_to_attr[c] = *idx;
  }

  auto id_col = schema.attribute_index("id");
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& row = records[r];
    std::string row_where = where + ":" + std::to_string(r + 1);
    if (row.size() != header.size()) {
      throw DataError(DataErrorKind::kMalformed, row_where + ": expected " + std::to_string(header.size()) +
                                                     " fields, got " + std::to_string(row.size()));
    }
    Tuple t;
    t.values.resize(schema.attributes.size());
    for (std::size_t c = 0; c < row.size(); ++c) t.values[column_to_attr[c]] = row[c];
    t.id = id_col ? parse_id(t.values[*id_col], row_where) : static_cast<TupleId>(r);
    rel.tuples.push_back(std::move(t));
  }
  return rel;
}

}  // namespace

DatabaseInstance::DatabaseInstance(std::vector<Relation> relations, std::vector<ForeignKey> foreign_keys)
    : relations_(std::move(relations)), foreign_keys_(std::move(foreign_keys)) {
  validate_and_index();
}

void DatabaseInstance::validate_and_index() {
  by_name_.clear();
  key_index_.assign(relations_.size(), {});
  id_index_.assign(relations_.size(), {});

  for (std::size_t r = 0; r < relations_.size(); ++r) {
    const auto& schema = relations_[r].schema;
    if (schema.name.empty()) throw DataError(DataErrorKind::kMalformed, "relation with empty name");
    if (!by_name_.emplace(schema.name, r).second) {
      throw DataError(DataErrorKind::kMalformed, "relation " + schema.name + " declared twice");
    }
    std::set<std::string> names;
    for (const auto& a : schema.attributes) {
      if (a.empty()) throw DataError(DataErrorKind::kMalformed, schema.name + ": empty attribute name");
      // "self" is reserved for schema matches on the relation name.
      if (lower_ascii(a) == "self") {
        throw DataError(DataErrorKind::kMalformed, schema.name + ": attribute name 'self' is reserved");
      }
      if (!names.insert(a).second) {
        throw DataError(DataErrorKind::kMalformed, schema.name + ": attribute " + a + " declared twice");
      }
    }
    if (!schema.attribute_index(schema.primary_key)) {
      throw DataError(DataErrorKind::kMalformed,
                      schema.name + ": primary key " + schema.primary_key + " is not an attribute");
    }
  }

  for (std::size_t r = 0; r < relations_.size(); ++r) {
    const auto& rel = relations_[r];
    std::size_t pk = rel.schema.primary_key_index();
    for (std::size_t i = 0; i < rel.tuples.size(); ++i) {
      const auto& t = rel.tuples[i];
      if (t.values.size() != rel.schema.attributes.size()) {
        throw DataError(DataErrorKind::kMalformed, rel.schema.name + ": tuple arity mismatch");
      }
      if (!id_index_[r].emplace(t.id, i).second) {
        throw DataError(DataErrorKind::kDuplicateTupleId,
                        rel.schema.name + ": tuple id " + std::to_string(t.id) + " repeated");
      }
      const std::string& key = t.values[pk];
      if (key.empty()) {
        throw DataError(DataErrorKind::kMalformed,
                        rel.schema.name + ": tuple " + std::to_string(t.id) + " has a null primary key");
      }
      if (!key_index_[r].emplace(key, i).second) {
        throw DataError(DataErrorKind::kDuplicateTupleId, rel.schema.name + ": primary key '" + key + "' repeated");
      }
    }
  }

  for (const auto& fk : foreign_keys_) {
    if (fk.from_relation == fk.to_relation) {
      throw DataError(DataErrorKind::kSelfReferencingKey, fk.to_string());
    }
    const Relation* from = find_relation(fk.from_relation);
    const Relation* to = find_relation(fk.to_relation);
    if (!from || !to) throw DataError(DataErrorKind::kMalformed, fk.to_string() + ": unknown relation");
    auto attr = from->schema.attribute_index(fk.from_attribute);
    if (!attr) throw DataError(DataErrorKind::kMalformed, fk.to_string() + ": unknown attribute");
    for (const auto& t : from->tuples) {
      const std::string& v = t.values[*attr];
      if (!v.empty() && !find_by_key(fk.to_relation, v)) {
        throw DataError(DataErrorKind::kDanglingForeignKey, fk.to_string() + ": tuple " + std::to_string(t.id) +
                                                                " references missing key '" + v + "'");
      }
    }
  }
  if (std::set<ForeignKey>(foreign_keys_.begin(), foreign_keys_.end()).size() != foreign_keys_.size()) {
    throw DataError(DataErrorKind::kMalformed, "foreign key declared twice");
  }
}

const Relation* DatabaseInstance::find_relation(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &relations_[it->second];
}

const Relation& DatabaseInstance::relation(std::string_view name) const {
  const Relation* r = find_relation(name);
  if (!r) throw std::out_of_range("unknown relation " + std::string(name));
  return *r;
}

std::optional<std::size_t> DatabaseInstance::find_by_key(std::string_view relation, std::string_view key) const {
  auto it = by_name_.find(relation);
  if (it == by_name_.end()) return std::nullopt;
  const auto& idx = key_index_[it->second];
  auto t = idx.find(std::string(key));
  if (t == idx.end()) return std::nullopt;
  return t->second;
}

std::optional<std::size_t> DatabaseInstance::find_by_id(std::string_view relation, TupleId id) const {
  auto it = by_name_.find(relation);
  if (it == by_name_.end()) return std::nullopt;
  const auto& idx = id_index_[it->second];
  auto t = idx.find(id);
  if (t == idx.end()) return std::nullopt;
  return t->second;
}

std::size_t DatabaseInstance::tuple_count() const {
  std::size_t n = 0;
  for (const auto& r : relations_) n += r.tuples.size();
  return n;
}

std::size_t DatabaseInstance::attribute_count() const {
  std::size_t n = 0;
  for (const auto& r : relations_) n += r.schema.attributes.size();
  return n;
}

DatabaseInstance load_dataset(const std::filesystem::path& schema_file,
                              const std::vector<std::filesystem::path>& data_files) {
  SchemaDoc doc = parse_schema(read_file(schema_file), schema_file.string());

  std::map<std::string, std::filesystem::path> by_stem;
  for (const auto& f : data_files) {
    std::string stem = lower_ascii(f.stem().string());
    if (!by_stem.emplace(stem, f).second) {
      throw DataError(DataErrorKind::kMalformed, "two data files for relation " + stem);
    }
  }

  std::vector<Relation> relations;
  for (const auto& schema : doc.relations) {
    auto it = by_stem.find(lower_ascii(schema.name));
    if (it == by_stem.end()) {
      throw DataError(DataErrorKind::kMissingData, "no data file for relation " + schema.name);
    }
    relations.push_back(parse_relation_csv(schema, read_file(it->second), it->second.string()));
    by_stem.erase(it);
  }
  if (!by_stem.empty()) {
    throw DataError(DataErrorKind::kMalformed,
                    by_stem.begin()->second.string() + " does not correspond to a declared relation");
  }
  return DatabaseInstance(std::move(relations), std::move(doc.foreign_keys));
}

DatabaseInstance load_dataset_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError(DataErrorKind::kMissingData, dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && lower_ascii(entry.path().extension().string()) == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return load_dataset(dir / "schema.json", files);
}

void save_dataset(const DatabaseInstance& db, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json doc;
  doc["relations"] = json::array();
  for (const auto& r : db.relations()) {
    doc["relations"].push_back(
        {{"name", r.schema.name}, {"attributes", r.schema.attributes}, {"primary_key", r.schema.primary_key}});
  }
  doc["foreign_keys"] = json::array();
  for (const auto& fk : db.foreign_keys()) {
    doc["foreign_keys"].push_back(
        {{"from_relation", fk.from_relation}, {"from_attribute", fk.from_attribute}, {"to_relation", fk.to_relation}});
  }
  std::ofstream(dir / "schema.json") << doc.dump(2) << '\n';

  for (const auto& r : db.relations()) {
    std::ofstream out(dir / (r.schema.name + ".csv"), std::ios::binary);
    csv::write_row(out, r.schema.attributes);
    // Without an id column the id is the row ordinal, so write in id order.
    std::vector<const Tuple*> rows;
    for (const auto& t : r.tuples) rows.push_back(&t);
    if (!r.schema.attribute_index("id")) {
      std::stable_sort(rows.begin(), rows.end(), [](const Tuple* a, const Tuple* b) { return a->id < b->id; });
    }
    for (const Tuple* t : rows) csv::write_row(out, t->values);
  }
}

SchemaGraph::SchemaGraph(std::vector<std::string> nodes, const std::vector<ForeignKey>& foreign_keys)
    : nodes_(std::move(nodes)) {
  for (const auto& fk : foreign_keys) {
    if (fk.from_relation == fk.to_relation) throw DataError(DataErrorKind::kSelfReferencingKey, fk.to_string());
    edges_[{fk.from_relation, fk.to_relation}].push_back(fk);
  }
  for (const auto& n : nodes_) {
    auto& adj = neighbors_[n];
    for (const auto& m : nodes_) {
      if (m == n) continue;
      if (edges_.count({n, m}) || edges_.count({m, n})) adj.push_back(m);
    }
  }
}

const std::vector<ForeignKey>& SchemaGraph::foreign_keys(std::string_view from, std::string_view to) const {
  static const std::vector<ForeignKey> kNone;
  auto it = edges_.find({std::string(from), std::string(to)});
  return it == edges_.end() ? kNone : it->second;
}

std::size_t SchemaGraph::ric(std::string_view from, std::string_view to) const {
  return foreign_keys(from, to).size();
}

const std::vector<std::string>& SchemaGraph::undirected_neighbors(std::string_view relation) const {
  static const std::vector<std::string> kNone;
  auto it = neighbors_.find(relation);
  return it == neighbors_.end() ? kNone : it->second;
}

SchemaGraph build_schema_graph(const DatabaseInstance& db) {
  std::vector<std::string> nodes;
  for (const auto& r : db.relations()) nodes.push_back(r.schema.name);
  return SchemaGraph(std::move(nodes), db.foreign_keys());
}

}  // namespace kwsql
