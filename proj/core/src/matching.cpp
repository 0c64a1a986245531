#include "kwsql/matching.hpp"

#include <algorithm>
#include <iterator>

#include "kwsql/error.hpp"

namespace kwsql {
namespace {

void drop_empty(AttributeKeywords& m) {
  for (auto it = m.begin(); it != m.end();) {
    it = it->second.empty() ? m.erase(it) : std::next(it);
  }
}

void merge_into(AttributeKeywords& dst, const AttributeKeywords& src) {
  for (const auto& [attr, kws] : src) dst[attr].insert(kws.begin(), kws.end());
}

void append_section(std::string& out, char tag, const AttributeKeywords& m) {
  if (m.empty()) return;
  out += '^';
  out += tag;
  out += '[';
  bool first_attr = true;
  for (const auto& [attr, kws] : m) {
    if (!first_attr) out += ',';
    first_attr = false;
    out += attr;
    out += '{';
    bool first_kw = true;
    for (const auto& k : kws) {
      if (!first_kw) out += ',';
      first_kw = false;
      out += k;
    }
    out += '}';
  }
  out += ']';
}

TupleIdSet set_union(const TupleIdSet& a, const TupleIdSet& b) {
  TupleIdSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

TupleIdSet set_intersection(const TupleIdSet& a, const TupleIdSet& b) {
  TupleIdSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

TupleIdSet set_difference(const TupleIdSet& a, const TupleIdSet& b) {
  TupleIdSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

KeywordMatch::KeywordMatch(std::string rel, AttributeKeywords schema, AttributeKeywords value)
    : relation(std::move(rel)), schema_map(std::move(schema)), value_map(std::move(value)) {
  drop_empty(schema_map);
  drop_empty(value_map);
}

KeywordSet KeywordMatch::keywords() const {
  KeywordSet out;
  for (const auto& [attr, kws] : schema_map) out.insert(kws.begin(), kws.end());
  for (const auto& [attr, kws] : value_map) out.insert(kws.begin(), kws.end());
  return out;
}

std::string KeywordMatch::to_string() const {
  std::string out = relation;
  append_section(out, 'S', schema_map);
  append_section(out, 'V', value_map);
  return out;
}

KeywordMatch parse_keyword_match(std::string_view text) {
  auto fail = [&](const std::string& why) -> DataError {
    return DataError(DataErrorKind::kMalformed, "keyword match '" + std::string(text) + "': " + why);
  };
  std::size_t pos = text.find('^');
  KeywordMatch km;
  km.relation = std::string(text.substr(0, pos));
  if (km.relation.empty()) throw fail("missing relation");
  while (pos != std::string_view::npos && pos < text.size()) {
    if (pos + 2 >= text.size() || text[pos] != '^' || text[pos + 2] != '[') throw fail("bad section header");
    char tag = text[pos + 1];
    AttributeKeywords* target = tag == 'S' ? &km.schema_map : tag == 'V' ? &km.value_map : nullptr;
    if (!target) throw fail("unknown section tag");
    if (!target->empty()) throw fail("repeated section");
    pos += 3;
    while (true) {
      std::size_t brace = text.find('{', pos);
      if (brace == std::string_view::npos) throw fail("missing '{'");
      std::string attr(text.substr(pos, brace - pos));
      std::size_t close = text.find('}', brace);
      if (close == std::string_view::npos) throw fail("missing '}'");
      KeywordSet kws;
      std::string_view body = text.substr(brace + 1, close - brace - 1);
      std::size_t start = 0;
      while (start <= body.size()) {
        std::size_t comma = body.find(',', start);
        std::string_view kw = body.substr(start, comma == std::string_view::npos ? body.size() - start : comma - start);
        if (kw.empty()) throw fail("empty keyword");
        kws.insert(std::string(kw));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      if (attr.empty()) throw fail("empty attribute");
      (*target)[attr].insert(kws.begin(), kws.end());
      pos = close + 1;
      if (pos >= text.size()) throw fail("unterminated section");
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (text[pos] != ']') throw fail("expected ']'");
      ++pos;
      break;
    }
    if (pos < text.size() && text[pos] != '^') throw fail("trailing characters");
  }
  if (km.value_map.count(std::string(kSelf))) throw fail("self cannot carry value keywords");
  return km;
}

std::optional<KeywordMatch> km_intersect(const KeywordMatch& a, const KeywordMatch& b) {
  if (a.relation != b.relation) return std::nullopt;
  KeywordMatch out = a;
  merge_into(out.schema_map, b.schema_map);
  merge_into(out.value_map, b.value_map);
  return out;
}

KeywordQuery KeywordQuery::parse(std::string_view raw) {
  KeywordQuery q;
  q.raw = std::string(raw);
  for (auto& term : tokenize(raw)) {
    if (std::find(q.keywords.begin(), q.keywords.end(), term) == q.keywords.end()) {
      q.keywords.push_back(std::move(term));
    }
  }
  if (q.keywords.empty()) throw UsageError("empty keyword query");
  return q;
}

VkmPool vkm_intersect(VkmPool pool) {
  // Level by level: each round intersects pairs of the current level, strips
  // the shared tuples from both parents and hands the intersections to the
  // next round. Keyword sets grow every round, so this terminates.
  VkmPool result;
  VkmPool current = std::move(pool);
  while (!current.empty()) {
    VkmPool next;
    std::map<KeywordMatch, TupleIdSet> removal;
    for (auto a = current.begin(); a != current.end(); ++a) {
      for (auto b = std::next(a); b != current.end(); ++b) {
        auto km = km_intersect(a->first, b->first);
        if (!km) continue;
        TupleIdSet shared = set_intersection(a->second, b->second);
        if (shared.empty()) continue;
        auto& slot = next[*km];
        slot = set_union(slot, shared);
        removal[a->first] = set_union(removal[a->first], shared);
        removal[b->first] = set_union(removal[b->first], shared);
      }
    }
    for (auto& [km, ids] : current) {
      auto r = removal.find(km);
      TupleIdSet kept = r == removal.end() ? ids : set_difference(ids, r->second);
      if (kept.empty()) continue;
      auto& slot = result[km];
      slot = set_union(slot, kept);
    }
    current = std::move(next);
  }
  return result;
}

VkmPool vkm_generate_with_tuples(const KeywordQuery& q, const ValueIndex& vi) {
  VkmPool pool;
  for (const auto& k : q.keywords) {
    const auto* postings = vi.find(k);
    if (!postings) continue;
    for (const auto& [rel, attrs] : *postings) {
      for (const auto& [attr, ids] : attrs) {
        KeywordMatch km(rel, {}, {{attr, {k}}});
        auto& slot = pool[km];
        slot = set_union(slot, ids);
      }
    }
  }
  return vkm_intersect(std::move(pool));
}

std::vector<KeywordMatch> vkm_generate(const KeywordQuery& q, const ValueIndex& vi) {
  std::vector<KeywordMatch> out;
  for (auto& [km, ids] : vkm_generate_with_tuples(q, vi)) out.push_back(km);
  return out;
}

std::vector<KeywordMatch> skm_generate(const KeywordQuery& q, const DatabaseInstance& db,
                                       const SimilarityConfig& cfg, const Taxonomy& tax) {
  std::vector<KeywordMatch> out;
  auto add = [&](KeywordMatch km) {
    if (std::find(out.begin(), out.end(), km) == out.end()) out.push_back(std::move(km));
  };
  for (const auto& k : q.keywords) {
    for (const auto& rel : db.relations()) {
      const auto& name = rel.schema.name;
      if (schema_name_similarity(k, name, tax, cfg.metric) >= cfg.threshold) {
        add(KeywordMatch(name, {{std::string(kSelf), {k}}}));
      }
      for (const auto& attr : rel.schema.attributes) {
        if (schema_name_similarity(k, attr, tax, cfg.metric) >= cfg.threshold) {
          add(KeywordMatch(name, {{attr, {k}}}));
        }
      }
    }
  }
  return out;
}

}  // namespace kwsql
