#include <algorithm>
#include <map>
#include <set>

#include "kwsql/executor.hpp"

namespace kwsql {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string quote_literal(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::vector<std::string> make_aliases(const JoiningNetwork& cjn, const std::vector<std::size_t>& order) {
  std::map<std::string, std::size_t> occurrences;
  std::vector<std::string> relations;  // distinct, in order
  for (std::size_t u : order) {
    if (occurrences[cjn.nodes[u].relation]++ == 0) relations.push_back(cjn.nodes[u].relation);
  }
  std::map<std::string, std::string> base;
  for (const auto& r : relations) {
    std::string l = lower(r);
    bool shared = std::any_of(relations.begin(), relations.end(),
                              [&](const std::string& o) { return o != r && lower(o).front() == l.front(); });
    base[r] = shared ? l : l.substr(0, 1);
  }
  std::vector<std::string> aliases(cjn.nodes.size());
  std::map<std::string, std::size_t> seen;
  std::set<std::string> taken;
  for (std::size_t u : order) {
    const auto& r = cjn.nodes[u].relation;
    std::string alias = base[r];
    if (occurrences[r] > 1) alias += std::to_string(++seen[r]);
    while (!taken.insert(alias).second) alias += "_";
    aliases[u] = alias;
  }
  return aliases;
}

}  // namespace

SqlQuery emit_sql(const JoiningNetwork& cjn, const DatabaseInstance& db, SqlDialect dialect) {
  SqlQuery q;
  if (cjn.nodes.empty()) return q;
  auto order = cjn.bfs_order(0);
  q.aliases = make_aliases(cjn, order);

  std::string select;
  for (const auto& [node, attr] : projection(cjn, db)) {
    if (!select.empty()) select += ", ";
    select += q.aliases[node] + "." + lower(attr);
  }
  std::string text = "SELECT " + (select.empty() ? std::string("*") : select) + "\n";

  std::vector<bool> placed(cjn.nodes.size(), false);
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::size_t u = order[k];
    std::string table = lower(cjn.nodes[u].relation) + " " + q.aliases[u];
    if (k == 0) {
      text += "FROM " + table + "\n";
    } else {
      auto e = std::find_if(cjn.edges.begin(), cjn.edges.end(), [&](const NetworkEdge& e) {
        return (e.from == u && placed[e.to]) || (e.to == u && placed[e.from]);
      });
      const Relation& target = db.relation(cjn.nodes[e->to].relation);
      text += "JOIN " + table + " ON " + q.aliases[e->from] + "." + lower(e->fk.from_attribute) + " = " +
              q.aliases[e->to] + "." + lower(target.schema.primary_key) + "\n";
    }
    placed[u] = true;
  }

  std::vector<std::string> where;
  for (std::size_t u : order) {
    for (const auto& [attr, kws] : cjn.nodes[u].value_map) {
      std::string column = q.aliases[u] + "." + lower(attr);
      for (const auto& kw : kws) {
        std::string pattern = quote_literal("%" + kw + "%");
        where.push_back(dialect == SqlDialect::kPostgres ? column + " ILIKE " + pattern
                                                         : "LOWER(" + column + ") LIKE " + pattern);
      }
    }
  }
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      std::size_t u = order[a];
      std::size_t v = order[b];
      if (cjn.nodes[u].relation != cjn.nodes[v].relation) continue;
      std::string pk = lower(db.relation(cjn.nodes[u].relation).schema.primary_key);
      where.push_back(q.aliases[u] + "." + pk + " <> " + q.aliases[v] + "." + pk);
    }
  }
  for (std::size_t i = 0; i < where.size(); ++i) text += (i == 0 ? "WHERE " : "  AND ") + where[i] + "\n";
  if (!text.empty()) text.pop_back();
  q.text = std::move(text);
  return q;
}

}  // namespace kwsql
