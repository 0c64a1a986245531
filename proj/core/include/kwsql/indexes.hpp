#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kwsql/catalog.hpp"

namespace kwsql {

/// Sorted, duplicate-free tuple ids.
using TupleIdSet = std::vector<TupleId>;

/// Inverted index from terms to the tuples whose attribute values contain them.
class ValueIndex {
 public:
  /// attribute -> tuple ids
  using AttributePostings = std::map<std::string, TupleIdSet, std::less<>>;
  /// relation -> attribute -> tuple ids
  using TermPostings = std::map<std::string, AttributePostings, std::less<>>;

  const TermPostings* find(std::string_view term) const;
  /// Empty set when nothing is posted.
  const TupleIdSet& postings(std::string_view term, std::string_view relation, std::string_view attribute) const;

  /// Posting-set size |I_V[term][relation][attribute]|.
  std::size_t frequency(std::string_view term, std::string_view relation, std::string_view attribute) const {
    return postings(term, relation, attribute).size();
  }
  /// N_A: number of attributes over all relations.
  std::size_t attribute_count() const { return attribute_count_; }
  /// n_t: number of (relation, attribute) pairs where the term occurs.
  std::size_t term_attribute_count(std::string_view term) const;
  /// ln(N_A / n_t); 0 for unknown terms.
  double iaf(std::string_view term) const;

  const std::map<std::string, TermPostings, std::less<>>& terms() const { return postings_; }

  friend bool operator==(const ValueIndex&, const ValueIndex&) = default;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(attribute_count_, postings_);
  }

 private:
  friend ValueIndex build_value_index(const DatabaseInstance& db);

  std::size_t attribute_count_ = 0;
  std::map<std::string, TermPostings, std::less<>> postings_;
};

struct AttributeStats {
  double norm = 0.0;
  std::size_t max_frequency = 0;

  friend bool operator==(const AttributeStats&, const AttributeStats&) = default;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(norm, max_frequency);
  }
};

/// Per-attribute statistics used by ranking.
class SchemaIndex {
 public:
  /// Stats for (relation, attribute); zeroed stats for unknown pairs.
  const AttributeStats& stats(std::string_view relation, std::string_view attribute) const;

  const std::map<std::string, std::map<std::string, AttributeStats, std::less<>>, std::less<>>& relations() const {
    return stats_;
  }

  friend bool operator==(const SchemaIndex&, const SchemaIndex&) = default;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(stats_);
  }

 private:
  friend SchemaIndex build_schema_index(const DatabaseInstance& db, const ValueIndex& vi);

  std::map<std::string, std::map<std::string, AttributeStats, std::less<>>, std::less<>> stats_;
};

ValueIndex build_value_index(const DatabaseInstance& db);
SchemaIndex build_schema_index(const DatabaseInstance& db, const ValueIndex& vi);

/// FNV-1a 64 over `schema.json` and every CSV file (name and bytes) in `dir`.
std::uint64_t dataset_fingerprint(const std::filesystem::path& dir);

void save_index_cache(const std::filesystem::path& file, std::uint64_t fingerprint, const ValueIndex& vi,
                      const SchemaIndex& si);

/// Returns nothing when the file is missing, unreadable, from another format
/// version, or built for a different fingerprint.
std::optional<std::pair<ValueIndex, SchemaIndex>> load_index_cache(const std::filesystem::path& file,
                                                                   std::uint64_t fingerprint);

}  // namespace kwsql
