#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kwsql {

enum class SimilarityMetric { kPath, kWuPalmer };

std::string_view to_string(SimilarityMetric metric);
/// Accepts "path" and "wup"; throws UsageError otherwise.
SimilarityMetric parse_metric(std::string_view name);

struct SimilarityConfig {
  SimilarityMetric metric = SimilarityMetric::kPath;
  double threshold = 0.6;

  /// Throws UsageError unless 0 < threshold <= 1.
  void validate() const;
};

/// A hypernym tree of word senses.
class Taxonomy {
 public:
  struct Synset {
    std::string id;
    std::optional<std::size_t> parent;
    std::vector<std::string> words;
    int depth = 1;  // root has depth 1
  };

  Taxonomy() = default;

  const std::vector<Synset>& synsets() const { return synsets_; }
  std::size_t root() const { return root_; }
  /// Synset indices for a word; empty for out-of-vocabulary words.
  const std::vector<std::size_t>& senses(std::string_view word) const;
  bool contains(std::string_view word) const { return !senses(word).empty(); }
  /// Lowest common subsumer of two synsets.
  std::size_t lcs(std::size_t a, std::size_t b) const;

 private:
  friend Taxonomy parse_taxonomy(std::string_view json_text);

  std::vector<Synset> synsets_;
  std::size_t root_ = 0;
  std::map<std::string, std::vector<std::size_t>, std::less<>> word_senses_;
};

/// Parses `{"synsets": [{"id", "parent", "words"}]}`. Exactly one synset has a
/// null parent and becomes the root. Words are lowercased.
Taxonomy parse_taxonomy(std::string_view json_text);
Taxonomy load_taxonomy(const std::filesystem::path& file);

/// Max over sense pairs of 1 / (number of nodes on the shortest path).
double path_similarity(std::string_view w1, std::string_view w2, const Taxonomy& tax);
/// Max over sense pairs of 2 * depth(lcs) / (depth(c1) + depth(c2)).
double wup_similarity(std::string_view w1, std::string_view w2, const Taxonomy& tax);
double similarity(std::string_view w1, std::string_view w2, const Taxonomy& tax, SimilarityMetric metric);

/// Similarity between a keyword and a relation or attribute name: the name is
/// tokenized and the best token wins.
double schema_name_similarity(std::string_view keyword, std::string_view schema_name, const Taxonomy& tax,
                              SimilarityMetric metric);

}  // namespace kwsql
