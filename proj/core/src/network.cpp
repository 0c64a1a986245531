#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "kwsql/cjn.hpp"
#include "kwsql/error.hpp"

namespace kwsql {

std::size_t JoiningNetwork::degree(std::size_t node) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [&](const NetworkEdge& e) { return e.from == node || e.to == node; }));
}

std::size_t JoiningNetwork::free_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const KeywordMatch& km) { return km.is_free(); }));
}

std::vector<std::vector<std::size_t>> JoiningNetwork::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  for (const auto& e : edges) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  return adj;
}

std::vector<std::size_t> JoiningNetwork::bfs_order(std::size_t root) const {
  std::vector<std::size_t> order;
  if (nodes.empty()) return order;
  auto adj = adjacency();
  std::vector<bool> seen(nodes.size(), false);
  std::deque<std::size_t> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    order.push_back(u);
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return order;
}

namespace {

std::string rooted(const JoiningNetwork& j, std::size_t u, std::size_t parent_edge) {
  std::string out = j.nodes[u].to_string();
  std::vector<std::string> children;
  for (std::size_t e = 0; e < j.edges.size(); ++e) {
    if (e == parent_edge) continue;
    const auto& edge = j.edges[e];
    if (edge.from != u && edge.to != u) continue;
    bool parent_holds = edge.from == u;
    std::size_t child = parent_holds ? edge.to : edge.from;
    children.push_back((parent_holds ? ">" : "<") + edge.fk.from_attribute + ":" + rooted(j, child, e));
  }
  if (children.empty()) return out;
  std::sort(children.begin(), children.end());
  out += '(';
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i > 0) out += ',';
    out += children[i];
  }
  out += ')';
  return out;
}

class NetworkParser {
 public:
  NetworkParser(std::string_view text, const SchemaGraph& g) : text_(text), g_(g) {}

  JoiningNetwork parse() {
    parse_node();
    if (pos_ != text_.size()) fail("trailing characters");
    return std::move(net_);
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw DataError(DataErrorKind::kMalformed,
                    "network '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + why);
  }

  std::size_t parse_node() {
    std::size_t start = pos_;
    int depth = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '[' || c == '{') ++depth;
      if (c == ']' || c == '}') --depth;
      if (depth == 0 && (c == '(' || c == ',' || c == ')')) break;
      ++pos_;
    }
    if (pos_ == start) fail("expected a keyword match");
    std::size_t id = net_.nodes.size();
    net_.nodes.push_back(parse_keyword_match(text_.substr(start, pos_ - start)));
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      while (true) {
        parse_child(id);
        if (pos_ >= text_.size()) fail("unterminated child list");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] != ')') fail("expected ')'");
        ++pos_;
        break;
      }
    }
    return id;
  }

  void parse_child(std::size_t parent) {
    if (pos_ >= text_.size() || (text_[pos_] != '>' && text_[pos_] != '<')) fail("expected '>' or '<'");
    bool parent_holds = text_[pos_] == '>';
    ++pos_;
    std::size_t colon = text_.find(':', pos_);
    if (colon == std::string_view::npos) fail("expected ':'");
    std::string attr(text_.substr(pos_, colon - pos_));
    pos_ = colon + 1;
    std::size_t child = parse_node();
    std::size_t holder = parent_holds ? parent : child;
    std::size_t target = parent_holds ? child : parent;
    const auto& fks = g_.foreign_keys(net_.nodes[holder].relation, net_.nodes[target].relation);
    auto it = std::find_if(fks.begin(), fks.end(), [&](const ForeignKey& fk) { return fk.from_attribute == attr; });
    if (it == fks.end()) {
      fail("no foreign key " + net_.nodes[holder].relation + "." + attr + "->" + net_.nodes[target].relation);
    }
    net_.edges.push_back({holder, target, *it});
  }

  std::string_view text_;
  const SchemaGraph& g_;
  std::size_t pos_ = 0;
  JoiningNetwork net_;
};

}  // namespace

std::string JoiningNetwork::rooted_form(std::size_t root) const {
  return rooted(*this, root, edges.size());
}

std::string JoiningNetwork::canonical() const {
  std::string best;
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    std::string form = rooted_form(r);
    if (r == 0 || form < best) best = std::move(form);
  }
  return best;
}

JoiningNetwork parse_network(std::string_view text, const SchemaGraph& g) {
  return NetworkParser(text, g).parse();
}

bool is_tree_over(const JoiningNetwork& j, const SchemaGraph& g) {
  if (j.nodes.empty() || j.edges.size() + 1 != j.nodes.size()) return false;
  for (const auto& e : j.edges) {
    if (e.from >= j.nodes.size() || e.to >= j.nodes.size() || e.from == e.to) return false;
    const auto& fks = g.foreign_keys(j.nodes[e.from].relation, j.nodes[e.to].relation);
    if (std::find(fks.begin(), fks.end(), e.fk) == fks.end()) return false;
  }
  return j.bfs_order(0).size() == j.nodes.size();
}

bool is_minimal(const JoiningNetwork& j) {
  for (std::size_t i = 0; i < j.nodes.size(); ++i) {
    if (j.nodes[i].is_free() && j.degree(i) == 1) return false;
  }
  return true;
}

bool is_sound(const JoiningNetwork& j, const SchemaGraph& g) {
  // keys held by each node, grouped by target relation
  std::map<std::pair<std::size_t, std::string>, std::vector<ForeignKey>> held;
  for (const auto& e : j.edges) held[{e.from, j.nodes[e.to].relation}].push_back(e.fk);
  for (auto& [key, fks] : held) {
    if (fks.size() > g.ric(j.nodes[key.first].relation, key.second)) return false;
    std::sort(fks.begin(), fks.end());
    if (std::adjacent_find(fks.begin(), fks.end()) != fks.end()) return false;
  }
  return true;
}

}  // namespace kwsql
