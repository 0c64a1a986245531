#include "kwsql/executor.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace kwsql {
namespace {

bool admits(const KeywordMatch& km, const Relation& rel, const Tuple& t) {
  for (const auto& [attr, kws] : km.value_map) {
    auto idx = rel.schema.attribute_index(attr);
    if (!idx) return false;
    auto terms = tokenize(t.values[*idx]);
    std::set<std::string> have(terms.begin(), terms.end());
    if (!std::includes(have.begin(), have.end(), kws.begin(), kws.end())) return false;
  }
  return true;
}

// Join step for a non-root node: how to find its tuples given its parent's.
struct Step {
  std::size_t node = 0;
  std::size_t parent = 0;
  bool node_holds_key = false;
  std::size_t node_attr = 0;    // key column on the node side
  std::size_t parent_attr = 0;  // key column on the parent side
  std::unordered_map<std::string, std::vector<std::size_t>> by_value;  // node candidates by node_attr
};

class Evaluator {
 public:
  Evaluator(const JoiningNetwork& cjn, const DatabaseInstance& db, std::optional<std::size_t> limit)
      : cjn_(cjn), db_(db), limit_(limit) {}

  std::vector<JoiningNetworkOfTuples> run() {
    const std::size_t n = cjn_.nodes.size();
    if (n == 0 || (limit_ && *limit_ == 0)) return {};
    rels_.resize(n);
    candidates_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      rels_[i] = db_.find_relation(cjn_.nodes[i].relation);
      if (!rels_[i]) return {};
      for (std::size_t t = 0; t < rels_[i]->tuples.size(); ++t) {
        if (admits(cjn_.nodes[i], *rels_[i], rels_[i]->tuples[t])) candidates_[i].push_back(t);
      }
      if (candidates_[i].empty()) return {};
    }

    std::size_t root = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (candidates_[i].size() < candidates_[root].size()) root = i;
    }
    root_ = root;
    build_steps(root);
    assignment_.assign(n, 0);
    for (std::size_t t : candidates_[root]) {
      assignment_[root] = t;
      if (!extend(0)) break;
    }
    return std::move(results_);
  }

 private:
  void build_steps(std::size_t root) {
    std::vector<std::size_t> parent(cjn_.nodes.size(), cjn_.nodes.size());
    std::vector<const NetworkEdge*> via(cjn_.nodes.size(), nullptr);
    auto order = cjn_.bfs_order(root);
    for (std::size_t u : order) {
      for (const auto& e : cjn_.edges) {
        std::size_t other;
        if (e.from == u) other = e.to;
        else if (e.to == u) other = e.from;
        else continue;
        if (other == root || parent[other] != cjn_.nodes.size()) continue;
        parent[other] = u;
        via[other] = &e;
      }
    }
    for (std::size_t k = 1; k < order.size(); ++k) {
      std::size_t v = order[k];
      const NetworkEdge& e = *via[v];
      Step s;
      s.node = v;
      s.parent = parent[v];
      s.node_holds_key = e.from == v;
      const Relation& holder = *rels_[e.from];
      const Relation& target = *rels_[e.to];
      std::size_t fk_col = *holder.schema.attribute_index(e.fk.from_attribute);
      std::size_t pk_col = target.schema.primary_key_index();
      s.node_attr = s.node_holds_key ? fk_col : pk_col;
      s.parent_attr = s.node_holds_key ? pk_col : fk_col;
      for (std::size_t t : candidates_[v]) {
        const std::string& key = rels_[v]->tuples[t].values[s.node_attr];
        if (!key.empty()) s.by_value[key].push_back(t);
      }
      steps_.push_back(std::move(s));
    }
  }

  // Returns false once the limit is reached.
  bool extend(std::size_t k) {
    if (k == steps_.size()) {
      emit();
      return !limit_ || results_.size() < *limit_;
    }
    const Step& s = steps_[k];
    const std::string& key = rels_[s.parent]->tuples[assignment_[s.parent]].values[s.parent_attr];
    if (key.empty()) return true;
    auto it = s.by_value.find(key);
    if (it == s.by_value.end()) return true;
    for (std::size_t t : it->second) {
      if (clashes(s.node, t, k)) continue;
      assignment_[s.node] = t;
      if (!extend(k + 1)) return false;
    }
    return true;
  }

  // Same-relation nodes must take distinct tuples.
  bool clashes(std::size_t node, std::size_t tuple, std::size_t assigned_steps) const {
    auto same = [&](std::size_t other) {
      return rels_[other] == rels_[node] && assignment_[other] == tuple;
    };
    if (same(root_)) return true;
    for (std::size_t k = 0; k < assigned_steps; ++k) {
      if (same(steps_[k].node)) return true;
    }
    return false;
  }

  void emit() {
    JoiningNetworkOfTuples jnt;
    for (std::size_t i = 0; i < assignment_.size(); ++i) {
      jnt.assignment.push_back(rels_[i]->tuples[assignment_[i]].id);
    }
    if (projection_.empty()) projection_ = projection(cjn_, db_);
    for (const auto& [node, attr] : projection_) {
      const Relation& rel = *rels_[node];
      jnt.projected.push_back({node, attr, rel.tuples[assignment_[node]].values[*rel.schema.attribute_index(attr)]});
    }
    results_.push_back(std::move(jnt));
  }

  const JoiningNetwork& cjn_;
  const DatabaseInstance& db_;
  std::optional<std::size_t> limit_;
  std::vector<const Relation*> rels_;
  std::vector<std::vector<std::size_t>> candidates_;
  std::vector<Step> steps_;
  std::size_t root_ = 0;
  std::vector<std::size_t> assignment_;
  std::vector<std::pair<std::size_t, std::string>> projection_;
  std::vector<JoiningNetworkOfTuples> results_;
};

}  // namespace

std::vector<JoiningNetworkOfTuples> evaluate(const JoiningNetwork& cjn, const DatabaseInstance& db,
                                             std::optional<std::size_t> limit) {
  return Evaluator(cjn, db, limit).run();
}

bool probe_nonvoid(const JoiningNetwork& cjn, const DatabaseInstance& db) {
  return !evaluate(cjn, db, 1).empty();
}

std::vector<std::pair<std::size_t, std::string>> projection(const JoiningNetwork& cjn, const DatabaseInstance& db) {
  std::vector<std::pair<std::size_t, std::string>> out;
  auto add = [&](std::size_t node, const std::string& attr) {
    std::pair<std::size_t, std::string> item{node, attr};
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(std::move(item));
  };
  for (std::size_t node : cjn.bfs_order(0)) {
    const auto& km = cjn.nodes[node];
    const Relation& rel = db.relation(km.relation);
    // schema order keeps the list stable regardless of map order
    bool all = km.schema_map.count(std::string(kSelf)) > 0;
    for (const auto& attr : rel.schema.attributes) {
      if (all || km.schema_map.count(attr) || km.value_map.count(attr)) add(node, attr);
    }
  }
  return out;
}

}  // namespace kwsql
