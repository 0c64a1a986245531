#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kwsql/catalog.hpp"
#include "kwsql/matching.hpp"
#include "kwsql/query_matching.hpp"

namespace kwsql {

/// `from` holds the foreign key, `to` is referenced by it.
struct NetworkEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  ForeignKey fk;

  friend bool operator==(const NetworkEdge&, const NetworkEdge&) = default;
};

/// A tree of keyword matches joined along foreign keys.
struct JoiningNetwork {
  std::vector<KeywordMatch> nodes;
  std::vector<NetworkEdge> edges;
  std::shared_ptr<const QueryMatch> origin;
  double score = 0.0;

  std::size_t size() const { return nodes.size(); }
  std::size_t degree(std::size_t node) const;
  std::size_t free_count() const;
  /// Neighbors per node, in edge order.
  std::vector<std::vector<std::size_t>> adjacency() const;
  /// Nodes in breadth-first order from `root`, following adjacency order.
  std::vector<std::size_t> bfs_order(std::size_t root = 0) const;

  /// Rooted form `NODE(>attr:CHILD,<attr:CHILD)` with sorted children, where
  /// `>` means the parent holds the key and `<` means the child does.
  std::string rooted_form(std::size_t root) const;
  /// Least rooted form over all roots; equal for isomorphic networks.
  std::string canonical() const;
};

/// Parses a rooted or canonical form. Edge keys are checked against `g`.
JoiningNetwork parse_network(std::string_view text, const SchemaGraph& g);

/// True iff connected, |edges| = |nodes| - 1, and every edge uses a foreign
/// key of `g` between its endpoint relations.
bool is_tree_over(const JoiningNetwork& j, const SchemaGraph& g);

/// No keyword-free match is a leaf.
bool is_minimal(const JoiningNetwork& j);

/// For every node and target relation, the node holds at most RIC keys toward
/// that relation, all of them distinct.
bool is_sound(const JoiningNetwork& j, const SchemaGraph& g);

struct SetupConfig {
  std::size_t n_qm = 5;
  std::size_t n_cjn = 1;
  std::size_t p_cjn = 9;  // 0 turns eager evaluation off
  std::size_t max_cjn_size = 5;

  /// Throws UsageError when p_cjn > 0 and n_cjn > p_cjn, or sizes are zero.
  void validate() const;
};

/// Breadth-first generation of candidate joining networks for one query match,
/// in discovery order, stopping after `limit` results.
std::vector<JoiningNetwork> cjn_interleave(const std::shared_ptr<const QueryMatch>& m, const SchemaGraph& g,
                                           const SetupConfig& cfg,
                                           std::size_t limit = std::numeric_limits<std::size_t>::max());

enum class ProbeOutcome { kNotProbed, kNonVoid, kVoid, kFailed };

std::string_view to_string(ProbeOutcome outcome);

struct ProbedNetwork {
  JoiningNetwork network;
  ProbeOutcome outcome = ProbeOutcome::kNotProbed;
  bool kept = false;
};

struct QueryMatchTrace {
  std::shared_ptr<const QueryMatch> query_match;
  std::vector<ProbedNetwork> candidates;
};

struct CjnGeneration {
  std::vector<JoiningNetwork> networks;  // ranked
  std::vector<QueryMatchTrace> trace;
  std::vector<std::string> diagnostics;
};

/// Returns true when the network produces at least one answer.
using Probe = std::function<bool(const JoiningNetwork&)>;

/// For each of the first n_qm query matches: generates p_cjn networks (n_cjn
/// without a probe or with p_cjn = 0), keeps the first n_cjn that the probe
/// does not prove void, then ranks everything kept.
CjnGeneration cjn_generate(const std::vector<std::shared_ptr<const QueryMatch>>& ranked_qms, const SchemaGraph& g,
                           const SetupConfig& cfg, const Probe& probe = {});

/// score(M) / node count, stable descending.
std::vector<JoiningNetwork> cjn_rank(std::vector<JoiningNetwork> cjns);

}  // namespace kwsql
