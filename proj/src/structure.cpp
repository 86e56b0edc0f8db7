#include "inqkit/structure.hpp"

#include "inqkit/error.hpp"

#include <algorithm>
#include <functional>

namespace inqkit {

std::size_t Structure::add_sort(const std::string& name) {
  auto idx = sort_index(name);
  if (idx != SIZE_MAX) return idx;
  sort_names_.push_back(name);
  by_sort_.emplace_back();
  return sort_names_.size() - 1;
}

std::size_t Structure::sort_index(const std::string& name) const {
  for (std::size_t i = 0; i < sort_names_.size(); ++i)
    if (sort_names_[i] == name) return i;
  return SIZE_MAX;
}

std::size_t Structure::add_element(std::size_t sort, const std::string& name) {
  if (sort >= sort_names_.size()) throw InputError("unknown sort");
  if (by_name_.count(name)) throw InputError("duplicate element name '" + name + "'");
  std::size_t id = elements_.size();
  elements_.push_back({name, sort, by_sort_[sort].size()});
  by_sort_[sort].push_back(id);
  by_name_[name] = id;
  return id;
}

std::size_t Structure::element_index(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw UnknownIdentifier(name);
  return it->second;
}

std::size_t Structure::add_relation(const std::string& name, std::vector<std::size_t> sorts) {
  auto idx = relation_index(name);
  if (idx != SIZE_MAX) {
    if (relations_[idx].sorts != sorts) throw InputError("relation '" + name + "' redeclared");
    return idx;
  }
  for (auto s : sorts)
    if (s >= sort_names_.size()) throw InputError("unknown sort in relation '" + name + "'");
  relations_.push_back({name, std::move(sorts), {}});
  pairs_.emplace_back();
  return relations_.size() - 1;
}

std::size_t Structure::relation_index(const std::string& name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i)
    if (relations_[i].name == name) return i;
  return SIZE_MAX;
}

void Structure::add_tuple(std::size_t rel, std::vector<std::size_t> tuple) {
  auto& r = relations_.at(rel);
  if (tuple.size() != r.sorts.size()) throw InputError("arity mismatch in relation '" + r.name + "'");
  for (std::size_t i = 0; i < tuple.size(); ++i)
    if (tuple[i] >= elements_.size() || elements_[tuple[i]].sort != r.sorts[i])
      throw InputError("ill-sorted tuple in relation '" + r.name + "'");
  if (tuple.size() == 1) pairs_[rel].insert(tuple[0]);
  if (tuple.size() == 2) pairs_[rel].insert((std::uint64_t{tuple[0]} << 32) | tuple[1]);
  r.tuples.insert(std::move(tuple));
}

void Structure::add_tuple(const std::string& rel, std::vector<std::size_t> tuple) {
  auto idx = relation_index(rel);
  if (idx == SIZE_MAX) throw UnknownIdentifier(rel);
  add_tuple(idx, std::move(tuple));
}

bool Structure::holds(std::size_t rel, const std::vector<std::size_t>& tuple) const {
  if (tuple.size() == 1) return holds1(rel, tuple[0]);
  if (tuple.size() == 2) return holds2(rel, tuple[0], tuple[1]);
  return relations_.at(rel).tuples.count(tuple) > 0;
}

Structure Structure::induced(const std::vector<std::size_t>& keep) const {
  Structure out;
  for (const auto& s : sort_names_) out.add_sort(s);
  std::vector<std::size_t> remap(elements_.size(), SIZE_MAX);
  for (auto id : keep) remap[id] = out.add_element(elements_[id].sort, elements_[id].name);
  for (const auto& r : relations_) {
    auto ri = out.add_relation(r.name, r.sorts);
    for (const auto& t : r.tuples) {
      std::vector<std::size_t> u;
      for (auto x : t) {
        if (remap[x] == SIZE_MAX) break;
        u.push_back(remap[x]);
      }
      if (u.size() == t.size()) out.add_tuple(ri, std::move(u));
    }
  }
  for (const auto& [name, id] : points_)
    if (remap[id] != SIZE_MAX) out.set_point(name, remap[id]);
  return out;
}

std::string state_name(const std::vector<std::string>& worlds, InfoState s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](std::size_t w) {
    if (!first) out += ",";
    first = false;
    out += worlds.at(w);
  });
  return out + "}";
}

Structure to_structure(const RelationalModel& r) {
  Structure a;
  auto W = a.add_sort("world");
  auto S = a.add_sort("state");
  for (const auto& w : r.worlds) a.add_element(W, w);
  std::vector<std::size_t> sid;
  for (auto s : r.states) sid.push_back(a.add_element(S, state_name(r.worlds, s)));
  auto in = a.add_relation("in", {W, S});
  for (std::size_t i = 0; i < r.states.size(); ++i)
    r.states[i].for_each([&](std::size_t w) { a.add_tuple(in, {w, sid[i]}); });
  for (std::size_t ag = 0; ag < r.E.size(); ++ag) {
    auto e = a.add_relation("E_" + r.sig.agents()[ag], {W, S});
    for (std::size_t w = 0; w < r.worlds.size(); ++w)
      for (auto i : r.E[ag][w]) a.add_tuple(e, {w, sid[i]});
  }
  for (std::size_t p = 0; p < r.props.size(); ++p) {
    auto pr = a.add_relation("P_" + r.sig.props()[p], {W});
    r.props[p].for_each([&](std::size_t w) { a.add_tuple(pr, {w}); });
  }
  return a;
}

Structure disjoint_union(const Structure& a, const Structure& b, const std::string& lt, const std::string& rt) {
  Structure out;
  for (const auto& s : a.sort_names()) out.add_sort(s);
  for (const auto& s : b.sort_names()) out.add_sort(s);
  std::vector<std::size_t> ma, mb;
  for (std::size_t i = 0; i < a.size(); ++i)
    ma.push_back(out.add_element(out.sort_index(a.sort_names()[a.element(i).sort]), lt + a.element(i).name));
  for (std::size_t i = 0; i < b.size(); ++i)
    mb.push_back(out.add_element(out.sort_index(b.sort_names()[b.element(i).sort]), rt + b.element(i).name));
  auto copy = [&](const Structure& s, const std::vector<std::size_t>& m) {
    for (const auto& r : s.relations()) {
      std::vector<std::size_t> sorts;
      for (auto so : r.sorts) sorts.push_back(out.sort_index(s.sort_names()[so]));
      auto ri = out.add_relation(r.name, sorts);
      for (const auto& t : r.tuples) {
        std::vector<std::size_t> u;
        for (auto x : t) u.push_back(m[x]);
        out.add_tuple(ri, std::move(u));
      }
    }
  };
  copy(a, ma);
  copy(b, mb);
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism

namespace {

struct Incidence {
  // per element: (relation name id, position, tuple index)
  std::vector<std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>> of;
  std::vector<std::vector<std::vector<std::size_t>>> tuples;  // by relation name id
};

} // namespace

bool isomorphic(const Structure& a, const Structure& b) {
  if (a.size() != b.size()) return false;
  // Align sorts and relations by name.
  auto sorted_names = [](const Structure& s) {
    auto v = s.sort_names();
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted_names(a) != sorted_names(b)) return false;
  std::vector<std::string> rel_names;
  for (const auto& r : a.relations()) rel_names.push_back(r.name);
  std::sort(rel_names.begin(), rel_names.end());
  {
    std::vector<std::string> rb;
    for (const auto& r : b.relations()) rb.push_back(r.name);
    std::sort(rb.begin(), rb.end());
    if (rb != rel_names) return false;
  }
  for (const auto& name : rel_names) {
    const auto& ra = a.relations()[a.relation_index(name)];
    const auto& rb = b.relations()[b.relation_index(name)];
    if (ra.tuples.size() != rb.tuples.size() || ra.sorts.size() != rb.sorts.size()) return false;
    for (std::size_t i = 0; i < ra.sorts.size(); ++i)
      if (a.sort_names()[ra.sorts[i]] != b.sort_names()[rb.sorts[i]]) return false;
  }
  if (a.points().size() != b.points().size()) return false;
  for (const auto& [n, _] : a.points())
    if (!b.points().count(n)) return false;

  const Structure* st[2] = {&a, &b};
  Incidence inc[2];
  for (int k = 0; k < 2; ++k) {
    inc[k].of.resize(st[k]->size());
    inc[k].tuples.resize(rel_names.size());
    for (std::size_t r = 0; r < rel_names.size(); ++r) {
      const auto& rel = st[k]->relations()[st[k]->relation_index(rel_names[r])];
      for (const auto& t : rel.tuples) {
        std::size_t ti = inc[k].tuples[r].size();
        inc[k].tuples[r].push_back(t);
        for (std::size_t p = 0; p < t.size(); ++p) inc[k].of[t[p]].emplace_back(r, p, ti);
      }
    }
  }

  // Joint colour refinement.
  std::vector<std::size_t> col[2];
  {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::map<std::string, std::size_t> sort_ids;
    for (const auto& s : sorted_names(a)) sort_ids.emplace(s, sort_ids.size());
    std::map<std::string, std::size_t> point_ids;
    for (const auto& [n, _] : a.points()) point_ids.emplace(n, point_ids.size() + 1);
    for (int k = 0; k < 2; ++k) {
      std::vector<std::size_t> pt(st[k]->size(), 0);
      for (const auto& [n, id] : st[k]->points()) pt[id] = pt[id] * 131 + point_ids[n];
      for (std::size_t i = 0; i < st[k]->size(); ++i) {
        std::vector<std::size_t> key{sort_ids[st[k]->sort_names()[st[k]->element(i).sort]], pt[i]};
        col[k].push_back(ids.emplace(key, ids.size()).first->second);
      }
    }
    std::size_t classes = ids.size();
    while (true) {
      std::map<std::vector<std::size_t>, std::size_t> next_ids;
      std::vector<std::size_t> next[2];
      for (int k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < st[k]->size(); ++i) {
          std::vector<std::vector<std::size_t>> sig;
          for (auto [r, p, ti] : inc[k].of[i]) {
            std::vector<std::size_t> e{r, p};
            for (auto x : inc[k].tuples[r][ti]) e.push_back(col[k][x]);
            sig.push_back(std::move(e));
          }
          std::sort(sig.begin(), sig.end());
          std::vector<std::size_t> key{col[k][i]};
          for (auto& e : sig) {
            key.push_back(SIZE_MAX);
            key.insert(key.end(), e.begin(), e.end());
          }
          next[k].push_back(next_ids.emplace(key, next_ids.size()).first->second);
        }
      col[0] = std::move(next[0]);
      col[1] = std::move(next[1]);
      if (next_ids.size() == classes) break;
      classes = next_ids.size();
    }
    std::vector<std::size_t> ca = col[0], cb = col[1];
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return false;
  }
  for (const auto& [n, id] : a.points())
    if (col[0][id] != col[1][b.points().at(n)]) return false;

  // Backtracking: smallest colour classes first.
  std::map<std::size_t, std::size_t> class_size;
  for (auto c : col[0]) ++class_size[c];
  std::vector<std::size_t> order(a.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return class_size[col[0][x]] < class_size[col[0][y]];
  });
  std::vector<std::size_t> fwd(a.size(), SIZE_MAX), used(b.size(), 0);
  std::vector<std::set<std::vector<std::size_t>>> btuples(rel_names.size());
  for (std::size_t r = 0; r < rel_names.size(); ++r)
    btuples[r] = std::set<std::vector<std::size_t>>(inc[1].tuples[r].begin(), inc[1].tuples[r].end());
  for (const auto& [n, id] : a.points()) {
    fwd[id] = b.points().at(n);
    used[fwd[id]] = 1;
  }
  // Points are pre-assigned, so check their mutual tuples once here.
  auto consistent = [&](std::size_t x) {
    for (auto [r, p, ti] : inc[0].of[x]) {
      (void)p;
      const auto& t = inc[0].tuples[r][ti];
      std::vector<std::size_t> img;
      for (auto z : t) {
        if (fwd[z] == SIZE_MAX) break;
        img.push_back(fwd[z]);
      }
      if (img.size() == t.size() && !btuples[r].count(img)) return false;
    }
    return true;
  };
  for (const auto& [n, id] : a.points())
    if (!consistent(id)) return false;

  std::function<bool(std::size_t)> search = [&](std::size_t k) -> bool {
    if (k == order.size()) return true;
    std::size_t x = order[k];
    if (fwd[x] != SIZE_MAX) return search(k + 1);
    for (std::size_t y = 0; y < b.size(); ++y) {
      if (used[y] || col[1][y] != col[0][x]) continue;
      fwd[x] = y;
      used[y] = 1;
      if (consistent(x) && search(k + 1)) return true;
      fwd[x] = SIZE_MAX;
      used[y] = 0;
    }
    return false;
  };
  return search(0);
}

} // namespace inqkit
