#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kwsql/catalog.hpp"
#include "kwsql/cjn.hpp"
#include "kwsql/pipeline.hpp"
#include "kwsql/similarity.hpp"

namespace kwsql::test {

inline std::filesystem::path data_dir() { return KWSQL_TEST_DATA_DIR; }

inline const Dataset& imdb() {
  static const Dataset ds = open_dataset(data_dir() / "imdb_toy", false);
  return ds;
}

inline const Dataset& mondial() {
  static const Dataset ds = open_dataset(data_dir() / "mondial_toy", false);
  return ds;
}

inline const Dataset& mondial_dense() {
  static const Dataset ds = open_dataset(data_dir() / "mondial_dense", false);
  return ds;
}

inline const Taxonomy& wordnet() {
  static const Taxonomy tax = load_taxonomy(data_dir() / "mini_wordnet.json");
  return tax;
}

// Plain ASCII word splitter, kept apart from the library tokenizer.
inline std::set<std::string> words_of(const std::string& value) {
  std::set<std::string> out;
  std::string cur;
  for (char c : value) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.insert(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.insert(cur);
  return out;
}

inline std::size_t column(const Relation& r, const std::string& attr) {
  auto it = std::find(r.schema.attributes.begin(), r.schema.attributes.end(), attr);
  return static_cast<std::size_t>(it - r.schema.attributes.begin());
}

inline bool admits(const KeywordMatch& km, const Relation& rel, const Tuple& t) {
  for (const auto& [attr, kws] : km.value_map) {
    auto w = words_of(t.values[column(rel, attr)]);
    for (const auto& k : kws)
      if (!w.count(k)) return false;
  }
  return true;
}

// Backtracking evaluation in node-index order. With `distinct`, every pair of
// nodes over the same relation takes different tuples. With `filter` off,
// keyword predicates are ignored.
inline std::vector<std::vector<TupleId>> brute_force_jnts(const JoiningNetwork& j, const DatabaseInstance& db,
                                                          bool distinct, bool filter = true,
                                                          std::size_t limit = SIZE_MAX) {
  std::vector<std::vector<TupleId>> out;
  std::vector<const Tuple*> chosen(j.size(), nullptr);

  auto edge_ok = [&](const NetworkEdge& e) {
    const Relation& holder = db.relation(j.nodes[e.from].relation);
    const Relation& target = db.relation(j.nodes[e.to].relation);
    const std::string& fk_value = chosen[e.from]->values[column(holder, e.fk.from_attribute)];
    const std::string& pk_value = chosen[e.to]->values[column(target, target.schema.primary_key)];
    return !fk_value.empty() && fk_value == pk_value;
  };

  auto rec = [&](auto&& self, std::size_t node) -> void {
    if (out.size() >= limit) return;
    if (node == j.size()) {
      std::vector<TupleId> ids;
      for (auto* t : chosen) ids.push_back(t->id);
      out.push_back(std::move(ids));
      return;
    }
    const Relation& rel = db.relation(j.nodes[node].relation);
    for (const Tuple& t : rel.tuples) {
      if (filter && !admits(j.nodes[node], rel, t)) continue;
      bool ok = true;
      if (distinct) {
        for (std::size_t k = 0; k < node && ok; ++k)
          if (j.nodes[k].relation == j.nodes[node].relation && chosen[k]->id == t.id) ok = false;
      }
      chosen[node] = &t;
      for (const auto& e : j.edges) {
        if (!ok) break;
        std::size_t other = e.from == node ? e.to : e.to == node ? e.from : SIZE_MAX;
        if (other == SIZE_MAX || other > node) continue;
        ok = edge_ok(e);
      }
      if (ok) self(self, node + 1);
      chosen[node] = nullptr;
    }
  };
  rec(rec, 0);
  return out;
}

inline bool near(double a, double b, double rel = 1e-9) {
  return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace kwsql::test
