#include "inqkit/error.hpp"
#include "inqkit/fo.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace inqkit {

namespace {

// Game types: type_0 is the atomic type of the pebbled position, type_j
// pairs it with the set of type_{j-1} of all one-move extensions. Both
// structures share the intern tables, so equal ids mean equal types and II
// wins j rounds exactly when the types agree.
class Typer {
public:
  Typer(const Structure& a, const Structure& b, bool mso) : mso_(mso) {
    st_[0] = &a;
    st_[1] = &b;
    std::set<std::string> names;
    for (auto* s : st_)
      for (const auto& r : s->relations()) names.insert(r.name);
    rels_.assign(names.begin(), names.end());
    for (int k = 0; k < 2; ++k) {
      for (const auto& n : rels_) {
        auto ri = st_[k]->relation_index(n);
        rel_idx_[k].push_back(ri);
        arity_.resize(rels_.size(), 0);
        if (ri != SIZE_MAX) arity_[rel_idx_[k].size() - 1] = st_[k]->relations()[ri].sorts.size();
      }
      for (const auto& s : st_[k]->sort_names()) sort_ids_.emplace(s, sort_ids_.size());
    }
  }

  struct Pos {
    std::vector<std::size_t> elems;
    std::vector<std::uint64_t> sets;
    bool operator<(const Pos& o) const { return std::tie(elems, sets) < std::tie(o.elems, o.sets); }
  };

  std::size_t atomic(int k, const Pos& p) {
    const Structure& s = *st_[k];
    std::vector<std::size_t> key;
    const std::size_t n = p.elems.size();
    key.push_back(n);
    key.push_back(p.sets.size());
    for (auto e : p.elems) key.push_back(sort_ids_.at(s.sort_names()[s.element(e).sort]));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) key.push_back(p.elems[i] == p.elems[j]);
    for (std::size_t r = 0; r < rels_.size(); ++r) {
      const std::size_t ar = arity_[r];
      const std::size_t ri = rel_idx_[k][r];
      // All position tuples of the relation's arity.
      std::vector<std::size_t> pos(ar, 0), tuple(ar);
      if (n == 0 && ar > 0) continue;
      while (true) {
        bool holds = false;
        if (ri != SIZE_MAX) {
          bool sorted_ok = true;
          const auto& sorts = s.relations()[ri].sorts;
          for (std::size_t i = 0; i < ar; ++i) {
            tuple[i] = p.elems[pos[i]];
            if (s.element(tuple[i]).sort != sorts[i]) sorted_ok = false;
          }
          holds = sorted_ok && s.holds(ri, tuple);
        }
        key.push_back(holds);
        std::size_t i = 0;
        while (i < ar && ++pos[i] == n) pos[i++] = 0;
        if (i == ar) break;
      }
    }
    for (std::size_t x = 0; x < p.sets.size(); ++x)
      for (auto e : p.elems) key.push_back((p.sets[x] >> s.element(e).local) & 1u);
    return intern(0, key);
  }

  std::size_t type(int k, const Pos& p, std::size_t j) {
    auto mk = std::make_tuple(k, j, p);
    if (auto it = memo_.find(mk); it != memo_.end()) return it->second;
    std::size_t id;
    if (j == 0) {
      id = atomic(k, p);
    } else {
      std::vector<std::size_t> key{atomic(k, p)};
      auto ext = extension_types(k, p, j - 1);
      key.push_back(ext.first.size());
      key.insert(key.end(), ext.first.begin(), ext.first.end());
      key.insert(key.end(), ext.second.begin(), ext.second.end());
      id = intern(j, key);
    }
    memo_.emplace(mk, id);
    return id;
  }

  // Sorted type sets of element extensions and of set extensions.
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> extension_types(int k, const Pos& p, std::size_t j) {
    std::set<std::size_t> el, se;
    for (std::size_t e = 0; e < st_[k]->size(); ++e) el.insert(type(k, extend(p, e), j));
    if (mso_) {
      const std::uint64_t end = std::uint64_t{1} << st_[k]->size();
      for (std::uint64_t m = 0; m < end; ++m) se.insert(type(k, extend_set(p, m), j));
    }
    return {{el.begin(), el.end()}, {se.begin(), se.end()}};
  }

  static Pos extend(const Pos& p, std::size_t e) {
    Pos q = p;
    q.elems.push_back(e);
    return q;
  }
  static Pos extend_set(const Pos& p, std::uint64_t m) {
    Pos q = p;
    q.sets.push_back(m);
    return q;
  }

  const Structure& structure(int k) const { return *st_[k]; }

  std::string label(int k, std::size_t e) const { return (k == 0 ? "A:" : "B:") + st_[k]->element(e).name; }
  std::string set_label(int k, std::uint64_t m) const {
    std::string out = k == 0 ? "A:{" : "B:{";
    bool first = true;
    for (std::size_t e = 0; e < st_[k]->size(); ++e)
      if ((m >> e) & 1u) {
        out += (first ? "" : ",") + st_[k]->element(e).name;
        first = false;
      }
    return out + "}";
  }

  // A winning play for I from a position where the j-types differ.
  void witness(const Pos& pa, const Pos& pb, std::size_t j, std::vector<Move>& out) {
    if (atomic(0, pa) != atomic(1, pb) || j == 0) {
      out.push_back({"end", "pebbled match is not a partial isomorphism"});
      return;
    }
    for (int side = 0; side < 2; ++side) {
      const Pos& px = side == 0 ? pa : pb;
      const Pos& py = side == 0 ? pb : pa;
      const int kx = side, ky = 1 - side;
      auto other = extension_types(ky, py, j - 1);
      for (std::size_t e = 0; e < st_[kx]->size(); ++e) {
        auto t = type(kx, extend(px, e), j - 1);
        if (std::binary_search(other.first.begin(), other.first.end(), t)) continue;
        out.push_back({"I", "element " + label(kx, e)});
        // II answers with an element of the same sort, if any.
        const auto& sname = st_[kx]->sort_names()[st_[kx]->element(e).sort];
        auto so = st_[ky]->sort_index(sname);
        if (so == SIZE_MAX || st_[ky]->sort_elements(so).empty()) {
          out.push_back({"end", "II has no element of sort " + sname});
          return;
        }
        std::size_t reply = st_[ky]->sort_elements(so).front();
        out.push_back({"II", "element " + label(ky, reply)});
        if (side == 0) witness(extend(pa, e), extend(pb, reply), j - 1, out);
        else witness(extend(pa, reply), extend(pb, e), j - 1, out);
        return;
      }
      if (!mso_) continue;
      const std::uint64_t end = std::uint64_t{1} << st_[kx]->size();
      for (std::uint64_t m = 0; m < end; ++m) {
        auto t = type(kx, extend_set(px, m), j - 1);
        if (std::binary_search(other.second.begin(), other.second.end(), t)) continue;
        out.push_back({"I", "set " + set_label(kx, m)});
        out.push_back({"II", "set " + set_label(ky, 0)});
        if (side == 0) witness(extend_set(pa, m), extend_set(pb, 0), j - 1, out);
        else witness(extend_set(pa, 0), extend_set(pb, m), j - 1, out);
        return;
      }
    }
    out.push_back({"end", "no separating move found"});
  }

private:
  std::size_t intern(std::size_t level, const std::vector<std::size_t>& key) {
    if (ids_.size() <= level) ids_.resize(level + 1);
    return ids_[level].emplace(key, ids_[level].size()).first->second;
  }

  bool mso_;
  const Structure* st_[2];
  std::vector<std::string> rels_;
  std::vector<std::size_t> arity_;
  std::vector<std::size_t> rel_idx_[2];
  std::map<std::string, std::size_t> sort_ids_;
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> ids_;
  std::map<std::tuple<int, std::size_t, Pos>, std::size_t> memo_;
};

void check_params(const Structure& a, const std::vector<std::size_t>& abar, const Structure& b,
                  const std::vector<std::size_t>& bbar) {
  if (abar.size() != bbar.size()) throw InputError("parameter tuples differ in length");
  for (std::size_t i = 0; i < abar.size(); ++i) {
    if (abar[i] >= a.size() || bbar[i] >= b.size()) throw InputError("parameter out of range");
    if (a.sort_names()[a.element(abar[i]).sort] != b.sort_names()[b.element(bbar[i]).sort])
      throw InputError("parameters are not sortwise matched");
  }
}

} // namespace

EfResult ef_fo(const Structure& a, const std::vector<std::size_t>& abar, const Structure& b,
               const std::vector<std::size_t>& bbar, std::size_t n) {
  check_params(a, abar, b, bbar);
  Typer t(a, b, false);
  Typer::Pos pa{abar, {}}, pb{bbar, {}};
  EfResult r;
  r.holds = t.type(0, pa, n) == t.type(1, pb, n);
  if (!r.holds) {
    // Find the fewest rounds I needs, then replay.
    std::size_t j = 0;
    while (t.type(0, pa, j) == t.type(1, pb, j)) ++j;
    t.witness(pa, pb, j, r.witness);
  }
  return r;
}

EfResult ef_mso(const Structure& a, const std::vector<std::uint64_t>& P, const std::vector<std::size_t>& abar,
                const Structure& b, const std::vector<std::uint64_t>& Q, const std::vector<std::size_t>& bbar,
                std::size_t n, std::size_t cap) {
  if (a.sort_names().size() > 1 || b.sort_names().size() > 1)
    throw InputError("MSO game expects single-sorted structures");
  if (a.size() > cap) throw CapExceeded("MSO game universe", a.size(), cap);
  if (b.size() > cap) throw CapExceeded("MSO game universe", b.size(), cap);
  if (P.size() != Q.size()) throw InputError("set parameter tuples differ in length");
  check_params(a, abar, b, bbar);
  Typer t(a, b, true);
  Typer::Pos pa{abar, P}, pb{bbar, Q};
  EfResult r;
  r.holds = t.type(0, pa, n) == t.type(1, pb, n);
  if (!r.holds) {
    std::size_t j = 0;
    while (t.type(0, pa, j) == t.type(1, pb, j)) ++j;
    t.witness(pa, pb, j, r.witness);
  }
  return r;
}

// ---------------------------------------------------------------------------

bool eq_cutoff(std::size_t x, std::size_t y, std::size_t d) { return x == y || (x >= d && y >= d); }

bool threshold_equiv(const ColouredSet& a, const std::vector<std::uint64_t>& P, const ColouredSet& b,
                     const std::vector<std::uint64_t>& Q, std::size_t d) {
  if (P.size() != Q.size()) throw InputError("set tuples differ in length");
  if (P.size() >= 32) throw CapExceeded("set tuple length", P.size(), 31);
  // Cell counts per (colour, membership pattern).
  auto counts = [&](const ColouredSet& c, const std::vector<std::uint64_t>& sets) {
    std::map<std::pair<std::size_t, std::uint64_t>, std::size_t> out;
    for (std::size_t e = 0; e < c.colour.size(); ++e) {
      std::uint64_t pattern = 0;
      for (std::size_t i = 0; i < sets.size(); ++i)
        if ((sets[i] >> e) & 1u) pattern |= std::uint64_t{1} << i;
      ++out[{c.colour[e], pattern}];
    }
    return out;
  };
  auto ca = counts(a, P), cb = counts(b, Q);
  for (const auto& [k, v] : ca) {
    auto it = cb.find(k);
    if (!eq_cutoff(v, it == cb.end() ? 0 : it->second, d)) return false;
  }
  for (const auto& [k, v] : cb)
    if (!ca.count(k) && !eq_cutoff(0, v, d)) return false;
  return true;
}

Structure coloured_structure(const ColouredSet& c, std::size_t colours) {
  Structure s;
  auto U = s.add_sort("element");
  std::vector<std::size_t> rel;
  for (std::size_t k = 0; k < colours; ++k) rel.push_back(s.add_relation("C_" + std::to_string(k), {U}));
  for (std::size_t e = 0; e < c.colour.size(); ++e) {
    auto id = s.add_element(U, std::to_string(e));
    if (c.colour[e] >= colours) throw InputError("colour out of range");
    s.add_tuple(rel[c.colour[e]], {id});
  }
  return s;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> gaifman_distances(const Structure& a, std::size_t b) {
  std::vector<std::vector<std::size_t>> adj(a.size());
  for (const auto& r : a.relations())
    for (const auto& t : r.tuples)
      for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
          if (t[i] != t[j]) adj[t[i]].push_back(t[j]);
  std::vector<std::size_t> dist(a.size(), SIZE_MAX);
  std::deque<std::size_t> q{b};
  dist.at(b) = 0;
  while (!q.empty()) {
    auto x = q.front();
    q.pop_front();
    for (auto y : adj[x])
      if (dist[y] == SIZE_MAX) {
        dist[y] = dist[x] + 1;
        q.push_back(y);
      }
  }
  return dist;
}

Structure gaifman_neighborhood(const Structure& a, std::size_t b, std::size_t ell) {
  auto dist = gaifman_distances(a, b);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (dist[i] <= ell) keep.push_back(i);
  Structure out = a.induced(keep);
  out.set_point("center", out.element_index(a.element(b).name));
  return out;
}

EfResult local_equiv(const Structure& a, std::size_t b, const Structure& a2, std::size_t b2, std::size_t ell,
                     std::size_t r) {
  if (a.sort_names()[a.element(b).sort] != a2.sort_names()[a2.element(b2).sort])
    throw InputError("centres of different sorts");
  auto na = gaifman_neighborhood(a, b, ell);
  auto nb = gaifman_neighborhood(a2, b2, ell);
  return ef_fo(na, {na.points().at("center")}, nb, {nb.points().at("center")}, r);
}

} // namespace inqkit
