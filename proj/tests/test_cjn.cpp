#include <gtest/gtest.h>

#include "kwsql/cjn.hpp"
#include "kwsql/error.hpp"
#include "kwsql/executor.hpp"
#include "kwsql/metrics.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace kwsql;

namespace {

const char* kJ1 = "CASTING(>mid:MOVIE^S[self{films}],>pid:PERSON^V[name{smith,will}])";
const char* kCjn1 =
    "MOVIE^S[self{films}](<mid:CASTING(>pid:PERSON^V[name{will}]),<mid:CASTING(>pid:PERSON^V[name{smith}]))";

std::shared_ptr<const QueryMatch> qm(const char* text) {
  return std::make_shared<const QueryMatch>(parse_query_match(text));
}

std::string canon(const char* text, const SchemaGraph& g) { return parse_network(text, g).canonical(); }

std::vector<std::string> canonicals(const std::vector<JoiningNetwork>& js) {
  std::vector<std::string> out;
  for (const auto& j : js) out.push_back(j.canonical());
  return out;
}

std::multiset<KeywordMatch> non_free(const JoiningNetwork& j) {
  std::multiset<KeywordMatch> out;
  for (const auto& n : j.nodes)
    if (!n.is_free()) out.insert(n);
  return out;
}

}  // namespace

TEST(Network, CanonicalIgnoresRootAndOrder) {
  const auto& g = test::imdb().graph;
  auto a = parse_network(kJ1, g);
  auto b = parse_network("PERSON^V[name{smith,will}](<pid:CASTING(>mid:MOVIE^S[self{films}]))", g);
  auto c = parse_network("MOVIE^S[self{films}](<mid:CASTING(>pid:PERSON^V[name{smith,will}]))", g);
  EXPECT_EQ(a.canonical(), b.canonical());
  EXPECT_EQ(a.canonical(), c.canonical());
  EXPECT_EQ(parse_network(a.canonical(), g).canonical(), a.canonical());
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.edges.size(), 2u);
  EXPECT_TRUE(is_tree_over(a, g));
}

TEST(Network, ParseRejectsUnknownKeys) {
  const auto& g = test::imdb().graph;
  EXPECT_THROW(parse_network("CASTING(>xid:MOVIE)", g), DataError);
  EXPECT_THROW(parse_network("PERSON(>pid:CASTING)", g), DataError);
  EXPECT_THROW(parse_network("CASTING(>mid:MOVIE", g), DataError);
}

TEST(Network, DirectionMatters) {
  const auto& g = test::mondial().graph;
  EXPECT_NE(canon("BORDER(>ctry1_code:COUNTRY^V[name{colombia}],>ctry2_code:COUNTRY^V[name{brazil}])", g),
            canon("BORDER(>ctry2_code:COUNTRY^V[name{colombia}],>ctry1_code:COUNTRY^V[name{brazil}])", g));
}

TEST(Soundness, Examples) {
  const auto& gi = test::imdb().graph;
  auto j3 = parse_network("CASTING(>pid:PERSON^V[name{will}],>pid:PERSON^V[name{smith}],>mid:MOVIE^S[self{films}])", gi);
  EXPECT_FALSE(is_sound(j3, gi));
  const auto& gm = test::mondial().graph;
  auto j4 = parse_network("BORDER(>ctry1_code:COUNTRY^V[name{colombia}],>ctry2_code:COUNTRY^V[name{brazil}])", gm);
  EXPECT_TRUE(is_sound(j4, gm));
  auto reused = parse_network("BORDER(>ctry1_code:COUNTRY^V[name{colombia}],>ctry1_code:COUNTRY^V[name{brazil}])", gm);
  EXPECT_FALSE(is_sound(reused, gm));
  EXPECT_TRUE(is_sound(parse_network(kJ1, gi), gi));
}

TEST(Minimality, FreeLeaves) {
  const auto& g = test::imdb().graph;
  EXPECT_TRUE(is_minimal(parse_network(kJ1, g)));
  EXPECT_FALSE(is_minimal(parse_network("CASTING(>mid:MOVIE^S[self{films}],>pid:PERSON^V[name{smith,will}],>rid:ROLE)", g)));
  EXPECT_TRUE(is_minimal(parse_network("CASTING", g)));
}

TEST(Interleave, FirstNetworkOfM1IsJ1) {
  const auto& g = test::imdb().graph;
  auto js = cjn_interleave(qm("{PERSON^V[name{smith,will}]; MOVIE^S[self{films}]}"), g, {});
  ASSERT_FALSE(js.empty());
  EXPECT_EQ(js[0].canonical(), canon(kJ1, g));
}

TEST(Interleave, M2IncludesTwoArmNetwork) {
  const auto& g = test::imdb().graph;
  auto js = cjn_interleave(qm("{PERSON^V[name{will}]; PERSON^V[name{smith}]; MOVIE^S[self{films}]}"), g, {});
  auto c = canonicals(js);
  EXPECT_NE(std::find(c.begin(), c.end(), canon(kCjn1, g)), c.end());
}

TEST(Interleave, Singleton) {
  auto m = qm("{MOVIE^V[title{lord,rings},year{2001}]}");
  auto js = cjn_interleave(m, test::imdb().graph, {});
  ASSERT_EQ(js.size(), 1u);
  EXPECT_EQ(js[0].size(), 1u);
  EXPECT_TRUE(js[0].edges.empty());
  EXPECT_EQ(js[0].origin, m);
}

TEST(Interleave, TooManyMatches) {
  SetupConfig cfg;
  cfg.max_cjn_size = 2;
  auto js = cjn_interleave(qm("{PERSON^V[name{will}]; PERSON^V[name{smith}]; MOVIE^S[self{films}]}"),
                           test::imdb().graph, cfg);
  EXPECT_TRUE(js.empty());
}

TEST(Interleave, EveryNetworkIsACandidate) {
  struct Case {
    const Dataset* ds;
    const char* qm;
  };
  std::vector<Case> cases = {
      {&test::imdb(), "{PERSON^V[name{will}]; PERSON^V[name{smith}]; MOVIE^S[self{films}]}"},
      {&test::imdb(), "{CHARACTER^V[name{smith}]; PERSON^V[name{will}]; MOVIE^S[self{films}]}"},
      {&test::imdb(), "{PERSON^V[name{maggie}]; ROLE^V[name{actress}]}"},
      {&test::mondial(), "{COUNTRY^V[name{colombia}]; COUNTRY^V[name{brazil}]}"},
      {&test::mondial(), "{CITY^V[name{lima}]; COUNTRY^V[name{brazil}]}"},
      {&test::mondial_dense(), "{COUNTRY^V[name{colombia}]; COUNTRY^V[name{brazil}]; CITY^V[name{lima}]}"},
  };
  for (const auto& c : cases) {
    auto m = qm(c.qm);
    std::multiset<KeywordMatch> members(m->matches.begin(), m->matches.end());
    auto js = cjn_interleave(m, c.ds->graph, {});
    EXPECT_FALSE(js.empty()) << c.qm;
    std::set<std::string> distinct;
    for (const auto& j : js) {
      SCOPED_TRACE(j.canonical());
      EXPECT_TRUE(is_tree_over(j, c.ds->graph));
      EXPECT_TRUE(is_minimal(j));
      EXPECT_TRUE(is_sound(j, c.ds->graph));
      EXPECT_LE(j.size(), 5u);
      EXPECT_LE(j.free_count(), 5u - members.size());
      EXPECT_EQ(non_free(j), members);
      for (std::size_t n = 0; n < j.size(); ++n) EXPECT_LE(j.degree(n), members.size());
      EXPECT_TRUE(distinct.insert(j.canonical()).second);
    }
  }
}

TEST(Interleave, Limit) {
  auto m = qm("{COUNTRY^V[name{colombia}]; COUNTRY^V[name{brazil}]}");
  auto all = cjn_interleave(m, test::mondial_dense().graph, {});
  auto some = cjn_interleave(m, test::mondial_dense().graph, {}, 4);
  ASSERT_EQ(some.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(some[i].canonical(), all[i].canonical());
}

TEST(Generate, VoidNetworksPruned) {
  const auto& ds = test::imdb();
  auto r = run_query(ds, test::wordnet(), "will smith films", {});
  std::vector<std::string> voids;
  for (const auto& t : r.cjns.trace)
    for (const auto& c : t.candidates) {
      if (c.outcome == ProbeOutcome::kVoid) {
        EXPECT_FALSE(c.kept);
        voids.push_back(c.network.canonical());
      }
      if (c.kept) EXPECT_EQ(c.outcome, ProbeOutcome::kNonVoid);
    }
  std::string cjn2 = canon("MOVIE^S[self{films}]^V[title{smith}](<mid:CASTING(>pid:PERSON^V[name{will}]))", ds.graph);
  std::string cjn3 = canon(
      "MOVIE^S[self{films}](<mid:CASTING(>pid:PERSON^V[name{will}]),<mid:CASTING(>chid:CHARACTER^V[name{smith}]))", ds.graph);
  EXPECT_NE(std::find(voids.begin(), voids.end(), cjn2), voids.end());
  EXPECT_NE(std::find(voids.begin(), voids.end(), cjn3), voids.end());
  auto kept = canonicals(r.cjns.networks);
  EXPECT_EQ(std::find(kept.begin(), kept.end(), cjn2), kept.end());
  EXPECT_EQ(std::find(kept.begin(), kept.end(), cjn3), kept.end());
  for (const auto& j : r.cjns.networks) EXPECT_TRUE(probe_nonvoid(j, ds.db));
}

TEST(Generate, NoProbeKeepsFirst) {
  const auto& ds = test::imdb();
  EngineConfig cfg;
  cfg.setup.p_cjn = 0;
  auto r = run_query(ds, test::wordnet(), "will smith films", cfg);
  EXPECT_EQ(r.cjns.networks.size(), r.query_matches.size());
  for (const auto& t : r.cjns.trace) {
    ASSERT_EQ(t.candidates.size(), 1u);
    EXPECT_EQ(t.candidates[0].outcome, ProbeOutcome::kNotProbed);
    EXPECT_TRUE(t.candidates[0].kept);
  }
}

TEST(Generate, ProbeFailureIsKeptWithDiagnostic) {
  auto m = qm("{COUNTRY^V[name{colombia}]; COUNTRY^V[name{brazil}]}");
  Probe failing = [](const JoiningNetwork&) -> bool { throw std::runtime_error("connection lost"); };
  SetupConfig cfg{1, 1, 3, 5};
  auto gen = cjn_generate({m}, test::mondial().graph, cfg, failing);
  ASSERT_EQ(gen.networks.size(), 1u);
  ASSERT_FALSE(gen.diagnostics.empty());
  EXPECT_NE(gen.diagnostics[0].find("connection lost"), std::string::npos);
  EXPECT_EQ(gen.trace[0].candidates[0].outcome, ProbeOutcome::kFailed);
}

TEST(Generate, DenseFixtureKeepsFewOfNine) {
  const auto& ds = test::mondial_dense();
  auto r = run_query(ds, test::wordnet(), "colombia brazil", {});
  ASSERT_FALSE(r.cjns.trace.empty());
  const auto& top = r.cjns.trace[0];
  EXPECT_EQ(top.candidates.size(), 9u);
  std::size_t nonvoid = 0;
  for (const auto& c : top.candidates) nonvoid += c.outcome == ProbeOutcome::kNonVoid;
  EXPECT_GE(nonvoid, 1u);
  EXPECT_LE(nonvoid, 2u);
}

TEST(Generate, TopQmLimit) {
  auto r = run_query(test::imdb(), test::wordnet(), "will smith films", {SetupConfig{2, 1, 9, 5}, {}, 3});
  EXPECT_EQ(r.cjns.trace.size(), 2u);
}

TEST(Rank, ScoreOverSize) {
  auto m = std::make_shared<QueryMatch>(make_query_match({KeywordMatch("PERSON")}));
  m->weights.final_score = 0.5;
  JoiningNetwork a, b;
  a.nodes.assign(5, KeywordMatch("PERSON"));
  b.nodes.assign(3, KeywordMatch("MOVIE"));
  a.origin = b.origin = m;
  auto ranked = cjn_rank({a, b});
  EXPECT_EQ(ranked[0].size(), 3u);
  EXPECT_DOUBLE_EQ(ranked[0].score, 0.5 / 3);
  EXPECT_DOUBLE_EQ(ranked[1].score, 0.1);
}

TEST(Setup, Validate) {
  EXPECT_NO_THROW((SetupConfig{5, 1, 9, 5}.validate()));
  EXPECT_NO_THROW((SetupConfig{5, 3, 0, 5}.validate()));
  EXPECT_THROW((SetupConfig{5, 10, 9, 5}.validate()), UsageError);
  EXPECT_THROW((SetupConfig{0, 1, 9, 5}.validate()), UsageError);
  EXPECT_THROW((SetupConfig{5, 1, 9, 0}.validate()), UsageError);
}

TEST(Soundness, AgreesWithEvaluationOnSmallTrees) {
  for (const Dataset* ds : {&test::imdb(), &test::mondial()}) {
    for (const auto& j : test::enumerate_fk_trees(ds->graph, 4)) {
      EXPECT_EQ(is_sound(j, ds->graph), test::sound_by_evaluation(j, ds->db)) << j.canonical();
    }
  }
}
