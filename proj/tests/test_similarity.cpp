#include <gtest/gtest.h>

#include "kwsql/error.hpp"
#include "kwsql/similarity.hpp"
#include "support.hpp"

using namespace kwsql;

namespace {

DataErrorKind taxonomy_error(const char* text) {
  try {
    parse_taxonomy(text);
  } catch (const DataError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a data error";
  return DataErrorKind::kMalformed;
}

}  // namespace

TEST(Similarity, PathOnBundledTaxonomy) {
  const auto& tax = test::wordnet();
  EXPECT_DOUBLE_EQ(path_similarity("films", "movie", tax), 1.0);
  EXPECT_DOUBLE_EQ(path_similarity("person", "person", tax), 1.0);
  EXPECT_DOUBLE_EQ(path_similarity("actor", "person", tax), 0.5);
  EXPECT_DOUBLE_EQ(path_similarity("zebra", "movie", tax), 0.0);
  EXPECT_DOUBLE_EQ(path_similarity("will", "movie", tax), 1.0 / 9.0);
}

TEST(Similarity, WuPalmerOnBundledTaxonomy) {
  const auto& tax = test::wordnet();
  // movie sits at depth 5 under show at depth 4
  EXPECT_DOUBLE_EQ(wup_similarity("movie", "show", tax), 8.0 / 9.0);
  EXPECT_DOUBLE_EQ(wup_similarity("films", "films", tax), 1.0);
  EXPECT_DOUBLE_EQ(wup_similarity("smith", "person", tax), 2.0 * 4 / (8 + 4));
  EXPECT_DOUBLE_EQ(wup_similarity("zebra", "person", tax), 0.0);
}

TEST(Similarity, ParentChildDepths) {
  auto tax = parse_taxonomy(R"({"synsets": [
    {"id": "r", "parent": null, "words": ["root"]},
    {"id": "a", "parent": "r", "words": ["Alpha"]},
    {"id": "b", "parent": "a", "words": ["beta"]},
    {"id": "c", "parent": "r", "words": ["gamma"]}]})");
  EXPECT_DOUBLE_EQ(wup_similarity("beta", "alpha", tax), 0.8);
  EXPECT_DOUBLE_EQ(path_similarity("beta", "alpha", tax), 0.5);
  EXPECT_DOUBLE_EQ(path_similarity("beta", "gamma", tax), 0.25);
  EXPECT_DOUBLE_EQ(wup_similarity("beta", "gamma", tax), 2.0 / 5.0);
  EXPECT_EQ(tax.synsets()[tax.lcs(2, 3)].id, "r");
}

TEST(Similarity, SingleSynset) {
  auto tax = parse_taxonomy(R"({"synsets": [{"id": "r", "parent": null, "words": ["x", "y"]}]})");
  EXPECT_DOUBLE_EQ(path_similarity("x", "y", tax), 1.0);
  EXPECT_DOUBLE_EQ(wup_similarity("x", "y", tax), 1.0);
}

TEST(Similarity, MaxOverSenses) {
  const auto& tax = test::wordnet();
  // "title" is both a name and a deed
  EXPECT_EQ(tax.senses("title").size(), 2u);
  EXPECT_DOUBLE_EQ(path_similarity("title", "name", tax), 0.5);
}

TEST(Similarity, SchemaNames) {
  const auto& tax = test::wordnet();
  EXPECT_DOUBLE_EQ(schema_name_similarity("capital", "capital_id", tax, SimilarityMetric::kPath), 1.0);
  EXPECT_DOUBLE_EQ(schema_name_similarity("films", "MOVIE", tax, SimilarityMetric::kPath), 1.0);
  EXPECT_DOUBLE_EQ(schema_name_similarity("films", "ctry1_code", tax, SimilarityMetric::kPath),
                   path_similarity("films", "code", tax));
}

TEST(Similarity, BadTaxonomies) {
  EXPECT_EQ(taxonomy_error(R"({"synsets": [{"id": "a", "parent": "b", "words": []},
                                           {"id": "b", "parent": "a", "words": []},
                                           {"id": "r", "parent": null, "words": []}]})"),
            DataErrorKind::kTaxonomyCycle);
  EXPECT_EQ(taxonomy_error(R"({"synsets": [{"id": "r", "parent": null, "words": []},
                                           {"id": "a", "parent": "zzz", "words": []}]})"),
            DataErrorKind::kTaxonomyOrphan);
  EXPECT_EQ(taxonomy_error(R"({"synsets": [{"id": "r", "parent": null, "words": []},
                                           {"id": "s", "parent": null, "words": []}]})"),
            DataErrorKind::kTaxonomyRoot);
  EXPECT_EQ(taxonomy_error("[1, 2"), DataErrorKind::kMalformed);
}

TEST(Similarity, Config) {
  EXPECT_EQ(parse_metric("wup"), SimilarityMetric::kWuPalmer);
  EXPECT_EQ(to_string(SimilarityMetric::kPath), "path");
  EXPECT_THROW(parse_metric("lch"), UsageError);
  EXPECT_THROW((SimilarityConfig{SimilarityMetric::kPath, 0.0}.validate()), UsageError);
  EXPECT_THROW((SimilarityConfig{SimilarityMetric::kPath, 1.5}.validate()), UsageError);
  EXPECT_NO_THROW((SimilarityConfig{SimilarityMetric::kPath, 1.0}.validate()));
}
