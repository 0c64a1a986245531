#include "kwsql/indexes.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace kwsql {

const ValueIndex::TermPostings* ValueIndex::find(std::string_view term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

const TupleIdSet& ValueIndex::postings(std::string_view term, std::string_view relation,
                                       std::string_view attribute) const {
  static const TupleIdSet kEmpty;
  const TermPostings* tp = find(term);
  if (!tp) return kEmpty;
  auto r = tp->find(relation);
  if (r == tp->end()) return kEmpty;
  auto a = r->second.find(attribute);
  return a == r->second.end() ? kEmpty : a->second;
}

std::size_t ValueIndex::term_attribute_count(std::string_view term) const {
  const TermPostings* tp = find(term);
  if (!tp) return 0;
  std::size_t n = 0;
  for (const auto& [rel, attrs] : *tp) n += attrs.size();
  return n;
}

double ValueIndex::iaf(std::string_view term) const {
  std::size_t n_t = term_attribute_count(term);
  if (n_t == 0) return 0.0;
  return std::log(static_cast<double>(attribute_count_) / static_cast<double>(n_t));
}

ValueIndex build_value_index(const DatabaseInstance& db) {
  ValueIndex vi;
  vi.attribute_count_ = db.attribute_count();
  for (const auto& rel : db.relations()) {
    const auto& attrs = rel.schema.attributes;
    for (const auto& t : rel.tuples) {
      for (std::size_t a = 0; a < attrs.size(); ++a) {
        // set semantics: a tuple is posted once per distinct term
        std::set<std::string> distinct;
        for (auto& term : tokenize(t.values[a])) distinct.insert(std::move(term));
        for (const auto& term : distinct) {
          vi.postings_[term][rel.schema.name][attrs[a]].push_back(t.id);
        }
      }
    }
  }
  for (auto& [term, rels] : vi.postings_) {
    for (auto& [rel, attrs] : rels) {
      for (auto& [attr, ids] : attrs) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      }
    }
  }
  return vi;
}

const AttributeStats& SchemaIndex::stats(std::string_view relation, std::string_view attribute) const {
  static const AttributeStats kZero;
  auto r = stats_.find(relation);
  if (r == stats_.end()) return kZero;
  auto a = r->second.find(attribute);
  return a == r->second.end() ? kZero : a->second;
}

SchemaIndex build_schema_index(const DatabaseInstance& db, const ValueIndex& vi) {
  SchemaIndex si;
  std::map<std::pair<std::string, std::string>, double> squares;
  for (const auto& rel : db.relations()) {
    for (const auto& a : rel.schema.attributes) {
      si.stats_[rel.schema.name][a] = AttributeStats{};
      squares[{rel.schema.name, a}] = 0.0;
    }
  }
  for (const auto& [term, rels] : vi.terms()) {
    double iaf = vi.iaf(term);
    for (const auto& [rel, attrs] : rels) {
      for (const auto& [attr, ids] : attrs) {
        double w = static_cast<double>(ids.size()) * iaf;
        squares[{rel, attr}] += w * w;
        auto& st = si.stats_[rel][attr];
        st.max_frequency = std::max(st.max_frequency, ids.size());
      }
    }
  }
  for (const auto& [key, sq] : squares) si.stats_[key.first][key.second].norm = std::sqrt(sq);
  return si;
}

}  // namespace kwsql
