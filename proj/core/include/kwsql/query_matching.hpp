#pragma once

#include <map>
#include <string>
#include <vector>

#include "kwsql/indexes.hpp"
#include "kwsql/matching.hpp"
#include "kwsql/similarity.hpp"

namespace kwsql {

struct RankingWeights {
  double value_score = 1.0;
  double schema_score = 1.0;
  double final_score = 1.0;
};

/// A minimal cover of the query keywords by keyword matches.
struct QueryMatch {
  std::vector<KeywordMatch> matches;  // sorted, unique
  KeywordSet covered;
  RankingWeights weights;
  /// Value-score factor contributed by each member (1 for members without
  /// value keywords). Same order as `matches`.
  std::vector<double> value_contributions;

  double score() const { return weights.final_score; }
  /// `{KM1; KM2}` with members in canonical order.
  std::string to_string() const;
};

/// Builds a QueryMatch with sorted members and the covered set filled in.
QueryMatch make_query_match(std::vector<KeywordMatch> matches);

/// True iff the matches cover every keyword of `q` and no member can be
/// dropped without losing a keyword.
bool minimal_cover(const std::vector<KeywordMatch>& m, const KeywordQuery& q);

/// Per relation: folds the schema matches together, then into the least VKM of
/// that relation if there is one. Other VKMs stay as they are.
std::vector<KeywordMatch> merge_keyword_matches(const std::vector<KeywordMatch>& m);

/// Every minimal cover of size <= min(|Q|, max_size) drawn from vkms then skms,
/// before merging. Each cover lists its members in pool order.
std::vector<std::vector<KeywordMatch>> enumerate_minimal_covers(const KeywordQuery& q,
                                                                const std::vector<KeywordMatch>& vkms,
                                                                const std::vector<KeywordMatch>& skms,
                                                                std::size_t max_size);

/// Minimal covers after merging, without duplicates, in enumeration order.
std::vector<QueryMatch> qm_generate(const KeywordQuery& q, const std::vector<KeywordMatch>& vkms,
                                    const std::vector<KeywordMatch>& skms, std::size_t max_size);

/// Scores one query match in place. Throws std::logic_error when an attribute
/// with value keywords has a zero norm.
void score_query_match(QueryMatch& qm, const ValueIndex& vi, const SchemaIndex& si, const Taxonomy& tax,
                       const SimilarityConfig& cfg);

/// Scores every query match and stable-sorts by descending score.
std::vector<QueryMatch> qm_rank(std::vector<QueryMatch> qms, const ValueIndex& vi, const SchemaIndex& si,
                                const Taxonomy& tax, const SimilarityConfig& cfg);

}  // namespace kwsql
