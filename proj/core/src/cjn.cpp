#include "kwsql/cjn.hpp"

#include <algorithm>
#include <deque>
#include <exception>
#include <tuple>
#include <unordered_set>

#include "kwsql/error.hpp"

namespace kwsql {

std::string_view to_string(ProbeOutcome outcome) {
  switch (outcome) {
    case ProbeOutcome::kNotProbed: return "not-probed";
    case ProbeOutcome::kNonVoid: return "non-void";
    case ProbeOutcome::kVoid: return "void";
    case ProbeOutcome::kFailed: return "probe-failed";
  }
  return "unknown";
}

void SetupConfig::validate() const {
  if (n_qm == 0) throw UsageError("number of query matches must be positive");
  if (n_cjn == 0) throw UsageError("number of CJNs per query match must be positive");
  if (max_cjn_size == 0) throw UsageError("maximum CJN size must be positive");
  if (p_cjn > 0 && n_cjn > p_cjn) {
    throw UsageError("CJNs kept per query match (" + std::to_string(n_cjn) + ") exceeds CJNs probed (" +
                     std::to_string(p_cjn) + ")");
  }
}

namespace {

struct Partial {
  JoiningNetwork net;
  std::vector<bool> used;  // members of the query match already placed
};

// Member with the largest value contribution; schema-only members come last
// and ties go to the least canonical text.
std::size_t start_member(const QueryMatch& m) {
  auto key = [&](std::size_t i) {
    bool has_value = m.matches[i].has_values();
    double c = has_value && i < m.value_contributions.size() ? m.value_contributions[i] : 0.0;
    return std::make_tuple(!has_value, -c, m.matches[i].to_string());
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < m.matches.size(); ++i) {
    if (key(i) < key(best)) best = i;
  }
  return best;
}

// Foreign-key options for joining a new node of relation `rel` to node `u`.
std::vector<NetworkEdge> join_options(const JoiningNetwork& j, std::size_t u, const std::string& rel,
                                      const SchemaGraph& g) {
  std::vector<NetworkEdge> out;
  std::size_t v = j.nodes.size();
  const std::string& ru = j.nodes[u].relation;
  for (const auto& fk : g.foreign_keys(ru, rel)) {
    bool taken = std::any_of(j.edges.begin(), j.edges.end(), [&](const NetworkEdge& e) {
      return e.from == u && e.fk == fk;
    });
    if (!taken) out.push_back({u, v, fk});
  }
  for (const auto& fk : g.foreign_keys(rel, ru)) out.push_back({v, u, fk});
  return out;
}

}  // namespace

std::vector<JoiningNetwork> cjn_interleave(const std::shared_ptr<const QueryMatch>& m, const SchemaGraph& g,
                                           const SetupConfig& cfg, std::size_t limit) {
  std::vector<JoiningNetwork> result;
  if (!m || m->matches.empty() || limit == 0) return result;
  const auto& members = m->matches;
  const std::size_t qm_size = members.size();

  Partial first;
  first.net.origin = m;
  std::size_t s = start_member(*m);
  first.net.nodes.push_back(members[s]);
  first.used.assign(qm_size, false);
  first.used[s] = true;
  if (qm_size == 1) {
    result.push_back(std::move(first.net));
    return result;
  }
  if (qm_size > cfg.max_cjn_size) return result;
  const std::size_t max_free = cfg.max_cjn_size - qm_size;

  std::unordered_set<std::string> seen{first.net.canonical()};
  std::deque<Partial> queue;
  queue.push_back(std::move(first));

  // Applies the pruning rules; returns false when `p` must be dropped.
  auto admissible = [&](const Partial& p) {
    const auto& net = p.net;
    if (net.size() > cfg.max_cjn_size || net.free_count() > max_free) return false;
    for (std::size_t i = 0; i < net.size(); ++i) {
      if (net.degree(i) > qm_size) return false;
    }
    if (!is_sound(net, g)) return false;
    return seen.insert(net.canonical()).second;
  };

  while (!queue.empty()) {
    Partial cur = std::move(queue.front());
    queue.pop_front();
    for (std::size_t u = 0; u < cur.net.size(); ++u) {
      const std::string ru = cur.net.nodes[u].relation;
      for (const auto& ra : g.undirected_neighbors(ru)) {
        for (std::size_t v = 0; v < qm_size; ++v) {
          if (cur.used[v] || members[v].relation != ra) continue;
          for (const auto& edge : join_options(cur.net, u, ra, g)) {
            Partial next = cur;
            next.net.nodes.push_back(members[v]);
            next.net.edges.push_back(edge);
            next.used[v] = true;
            if (!admissible(next)) continue;
            bool complete = std::all_of(next.used.begin(), next.used.end(), [](bool b) { return b; });
            if (!complete) {
              queue.push_back(std::move(next));
            } else if (is_minimal(next.net)) {
              result.push_back(std::move(next.net));
              if (result.size() >= limit) return result;
            }
          }
        }
        if (cur.net.free_count() >= max_free) continue;
        for (const auto& edge : join_options(cur.net, u, ra, g)) {
          Partial next = cur;
          next.net.nodes.push_back(KeywordMatch(ra));
          next.net.edges.push_back(edge);
          if (admissible(next)) queue.push_back(std::move(next));
        }
      }
    }
  }
  return result;
}

CjnGeneration cjn_generate(const std::vector<std::shared_ptr<const QueryMatch>>& ranked_qms, const SchemaGraph& g,
                           const SetupConfig& cfg, const Probe& probe) {
  cfg.validate();
  CjnGeneration out;
  const bool eager = cfg.p_cjn > 0 && static_cast<bool>(probe);
  const std::size_t to_generate = eager ? cfg.p_cjn : cfg.n_cjn;
  std::vector<JoiningNetwork> kept;

  std::size_t count = std::min(cfg.n_qm, ranked_qms.size());
  for (std::size_t i = 0; i < count; ++i) {
    QueryMatchTrace trace;
    trace.query_match = ranked_qms[i];
    std::size_t kept_here = 0;
    for (auto& net : cjn_interleave(ranked_qms[i], g, cfg, to_generate)) {
      ProbedNetwork probed{std::move(net), ProbeOutcome::kNotProbed, false};
      if (kept_here < cfg.n_cjn) {
        if (eager) {
          try {
            probed.outcome = probe(probed.network) ? ProbeOutcome::kNonVoid : ProbeOutcome::kVoid;
          } catch (const std::exception& e) {
            probed.outcome = ProbeOutcome::kFailed;
            out.diagnostics.push_back("probe failed for " + probed.network.canonical() + ": " + e.what());
          }
        }
        probed.kept = probed.outcome != ProbeOutcome::kVoid;
        if (probed.kept) {
          ++kept_here;
          kept.push_back(probed.network);
        }
      }
      trace.candidates.push_back(std::move(probed));
    }
    out.trace.push_back(std::move(trace));
  }
  out.networks = cjn_rank(std::move(kept));
  return out;
}

std::vector<JoiningNetwork> cjn_rank(std::vector<JoiningNetwork> cjns) {
  for (auto& c : cjns) {
    double qm_score = c.origin ? c.origin->score() : 0.0;
    c.score = c.nodes.empty() ? 0.0 : qm_score / static_cast<double>(c.nodes.size());
  }
  std::stable_sort(cjns.begin(), cjns.end(),
                   [](const JoiningNetwork& a, const JoiningNetwork& b) { return a.score > b.score; });
  return cjns;
}

}  // namespace kwsql
