#include <stdexcept>

#include <gtest/gtest.h>

#include "kwsql/metrics.hpp"
#include "kwsql/query_matching.hpp"
#include "support.hpp"

using namespace kwsql;

namespace {

KeywordMatch km(const char* text) { return parse_keyword_match(text); }

std::vector<QueryMatch> will_smith_qms(const SimilarityConfig& cfg = {}) {
  const auto& ds = test::imdb();
  auto q = KeywordQuery::parse("will smith films");
  return qm_generate(q, vkm_generate(q, ds.value_index), skm_generate(q, ds.db, cfg, test::wordnet()), 3);
}

bool contains(const std::vector<QueryMatch>& qms, const std::string& text) {
  for (const auto& qm : qms)
    if (qm.to_string() == text) return true;
  return false;
}

}  // namespace

TEST(MinimalCover, Cases) {
  auto q = KeywordQuery::parse("will smith films");
  auto ws = km("PERSON^V[name{smith,will}]");
  auto w = km("PERSON^V[name{will}]");
  auto s = km("PERSON^V[name{smith}]");
  auto f = km("MOVIE^S[self{films}]");
  EXPECT_TRUE(minimal_cover({ws, f}, q));
  EXPECT_TRUE(minimal_cover({w, s, f}, q));
  EXPECT_FALSE(minimal_cover({ws}, q));
  EXPECT_FALSE(minimal_cover({ws, s, f}, q));
  EXPECT_FALSE(minimal_cover({ws, f, km("CHARACTER")}, q));
}

TEST(QmGenerate, WillSmithFilms) {
  auto qms = will_smith_qms();
  EXPECT_TRUE(contains(qms, "{MOVIE^S[self{films}]; PERSON^V[name{smith,will}]}"));
  EXPECT_TRUE(contains(qms, "{MOVIE^S[self{films}]; PERSON^V[name{smith}]; PERSON^V[name{will}]}"));
  EXPECT_FALSE(contains(qms, "{PERSON^V[name{smith}]; PERSON^V[name{will}]}"));
  EXPECT_FALSE(contains(qms, "{CHARACTER; MOVIE^S[self{films}]; PERSON^V[name{smith,will}]}"));
  EXPECT_FALSE(contains(qms, "{MOVIE^S[self{films}]; PERSON^V[name{smith,will}]; PERSON^V[name{smith}]}"));
  EXPECT_EQ(qms.size(), 4u);
  for (const auto& qm : qms) {
    EXPECT_LE(qm.matches.size(), 3u);
    for (const auto& m : qm.matches) EXPECT_FALSE(m.is_free());
  }
}

TEST(QmGenerate, NoCover) {
  auto q = KeywordQuery::parse("will zebra");
  EXPECT_TRUE(qm_generate(q, vkm_generate(q, test::imdb().value_index), {}, 3).empty());
}

TEST(Merge, Cases) {
  EXPECT_EQ(merge_keyword_matches({km("MOVIE^S[self{films}]"), km("MOVIE^V[title{lord,rings}]")}),
            (std::vector<KeywordMatch>{km("MOVIE^S[self{films}]^V[title{lord,rings}]")}));
  std::vector<KeywordMatch> two_vkms{km("PERSON^V[name{smith}]"), km("PERSON^V[name{will}]")};
  auto merged = merge_keyword_matches(two_vkms);
  std::sort(merged.begin(), merged.end());
  EXPECT_EQ(merged, two_vkms);
  EXPECT_EQ(merge_keyword_matches({km("MOVIE^S[self{films}]")}), (std::vector<KeywordMatch>{km("MOVIE^S[self{films}]")}));
  // schema matches fold together before joining the least value match
  auto three = merge_keyword_matches(
      {km("MOVIE^V[title{smith}]"), km("MOVIE^S[self{films}]"), km("MOVIE^S[title{will}]"), km("MOVIE^V[year{2001}]")});
  ASSERT_EQ(three.size(), 2u);
  std::sort(three.begin(), three.end());
  EXPECT_EQ(three[0].to_string(), "MOVIE^V[year{2001}]");
  EXPECT_EQ(three[1].to_string(), "MOVIE^S[self{films},title{will}]^V[title{smith}]");
}

TEST(QmRank, WorkedExampleOrder) {
  const auto& ds = test::imdb();
  auto ranked = qm_rank(will_smith_qms(), ds.value_index, ds.schema_index, test::wordnet(), {});
  ASSERT_FALSE(ranked.empty());
  EXPECT_EQ(ranked[0].to_string(), "{MOVIE^S[self{films}]; PERSON^V[name{smith,will}]}");
  for (std::size_t i = 1; i < ranked.size(); ++i) EXPECT_GE(ranked[i - 1].score(), ranked[i].score());
  EXPECT_DOUBLE_EQ(ranked[0].weights.schema_score, 1.0);
}

TEST(QmRank, StableForTies) {
  const auto& ds = test::imdb();
  std::vector<QueryMatch> qms;
  for (const char* r : {"MOVIE", "PERSON", "CASTING", "ROLE"}) qms.push_back(make_query_match({KeywordMatch(r)}));
  auto ranked = qm_rank(qms, ds.value_index, ds.schema_index, test::wordnet(), {});
  for (std::size_t i = 0; i < qms.size(); ++i) EXPECT_EQ(ranked[i].to_string(), qms[i].to_string());
}

TEST(QmRank, ZeroNormIsInternalError) {
  Relation r{{"T", {"id", "v"}, "id"}, {{1, {"1", ""}}}};
  DatabaseInstance db({r}, {});
  auto vi = build_value_index(db);
  auto si = build_schema_index(db, vi);
  auto qm = make_query_match({KeywordMatch("T", {}, {{"v", {"ghost"}}})});
  EXPECT_THROW(score_query_match(qm, vi, si, test::wordnet(), {}), std::logic_error);
}

TEST(QueryMatchText, ParseRoundTrip) {
  auto qm = parse_query_match("{PERSON^V[name{will}];  MOVIE^S[self{films}]}");
  EXPECT_EQ(qm.to_string(), "{MOVIE^S[self{films}]; PERSON^V[name{will}]}");
  EXPECT_EQ(qm.covered, (KeywordSet{"films", "will"}));
}
