#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kwsql/catalog.hpp"
#include "kwsql/indexes.hpp"
#include "kwsql/similarity.hpp"

namespace kwsql {

/// Pseudo-attribute standing for the relation name in schema matches.
inline constexpr std::string_view kSelf = "self";

using KeywordSet = std::set<std::string>;
using AttributeKeywords = std::map<std::string, KeywordSet>;

/// R^S[...]^V[...]: a relation plus per-attribute schema and value keywords.
/// Empty keyword sets are never stored, so structural equality is canonical.
struct KeywordMatch {
  std::string relation;
  AttributeKeywords schema_map;
  AttributeKeywords value_map;

  KeywordMatch() = default;
  explicit KeywordMatch(std::string rel, AttributeKeywords schema = {}, AttributeKeywords value = {});

  bool is_free() const { return schema_map.empty() && value_map.empty(); }
  bool has_values() const { return !value_map.empty(); }
  bool has_schema() const { return !schema_map.empty(); }
  /// Every keyword mentioned in either map.
  KeywordSet keywords() const;

  /// e.g. `MOVIE^S[self{films}]^V[title{lord,rings}]`; a free match is just `MOVIE`.
  std::string to_string() const;

  friend auto operator<=>(const KeywordMatch&, const KeywordMatch&) = default;
  friend bool operator==(const KeywordMatch&, const KeywordMatch&) = default;
};

/// Parses the text produced by KeywordMatch::to_string.
KeywordMatch parse_keyword_match(std::string_view text);

/// Attribute-wise union of both matches; nothing when the relations differ.
std::optional<KeywordMatch> km_intersect(const KeywordMatch& a, const KeywordMatch& b);

struct KeywordQuery {
  std::string raw;
  std::vector<std::string> keywords;  // tokenized, first occurrence order, no repeats

  /// Throws UsageError when no keyword survives tokenization.
  static KeywordQuery parse(std::string_view raw);
};

/// Value-keyword matches with the tuples behind them.
using VkmPool = std::map<KeywordMatch, TupleIdSet>;

/// Splits overlapping partial matches into disjoint ones. Tuples shared by
/// same-relation matches move to the match labelled with the union of their
/// keywords.
VkmPool vkm_intersect(VkmPool pool);

VkmPool vkm_generate_with_tuples(const KeywordQuery& q, const ValueIndex& vi);
std::vector<KeywordMatch> vkm_generate(const KeywordQuery& q, const ValueIndex& vi);

/// One match per (keyword, relation) and (keyword, attribute) pair whose name
/// similarity reaches the threshold. Relation names map to `self`.
std::vector<KeywordMatch> skm_generate(const KeywordQuery& q, const DatabaseInstance& db,
                                       const SimilarityConfig& cfg, const Taxonomy& tax);

}  // namespace kwsql
