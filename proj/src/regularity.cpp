#include "inqkit/transform.hpp"

#include "inqkit/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace inqkit {

namespace {

std::uint64_t colour_mask(InfoState s, const std::vector<std::size_t>& colour) {
  std::uint64_t m = 0;
  s.for_each([&](std::size_t w) { m |= std::uint64_t{1} << colour[w]; });
  return m;
}

// Nonempty sub-masks of each mask, i.e. the colour combinations of the
// nonempty members of the family the masks generate.
std::set<std::uint64_t> down_closure(const std::vector<std::uint64_t>& masks) {
  std::set<std::uint64_t> out;
  for (auto m : masks) {
    if (std::popcount(m) > 20) throw CapExceeded("colours in one generator", std::popcount(m), 20);
    for (std::uint64_t sub = m; sub != 0; sub = (sub - 1) & m) out.insert(sub);
  }
  return out;
}

std::string mask_name(std::uint64_t m) {
  std::string s = "{";
  bool first = true;
  for (std::uint64_t b = m; b != 0; b &= b - 1) {
    if (!first) s += ",";
    s += std::to_string(std::countr_zero(b));
    first = false;
  }
  return s + "}";
}

// Ambient colours of the local worlds, as ambient-indexed vector.
std::vector<std::size_t> ambient_colours(const LocalStructure& l, std::size_t n) {
  std::vector<std::size_t> c(n, 0);
  for (std::size_t i = 0; i < l.worlds.size(); ++i) c[l.worlds[i]] = l.colour[i];
  return c;
}

std::size_t ambient_size(const LocalStructure& l) { return l.worlds.empty() ? 0 : l.worlds.back() + 1; }

} // namespace

LocalStructure local_structure(const EpistemicModel& m, std::size_t w, std::size_t a, std::size_t level) {
  m.require_valid();
  if (w >= m.size()) throw InputError("world out of range");
  if (a >= m.sig().agents().size()) throw InputError("agent out of range");
  LocalStructure l;
  l.agent = a;
  l.cls = m.sigma(a, w);
  l.worlds = l.cls.members();
  l.level = level;

  std::map<std::size_t, std::size_t> local;
  std::vector<std::string> names;
  for (auto v : l.worlds) {
    local[v] = names.size();
    names.push_back(m.world_name(v));
  }
  auto to_local = [&](InfoState s) {
    InfoState out;
    s.for_each([&](std::size_t v) { out = out.with(local.at(v)); });
    return out;
  };
  std::vector<InfoState> val;
  for (auto p : m.valuations()) val.push_back(to_local(p & l.cls));
  std::vector<InfoState> gens;
  for (auto g : m.Sigma(a, w).maximal()) gens.push_back(to_local(g));
  auto fam = DownwardFamily::from_generators(gens);
  Signature sig({m.sig().agents()[a]}, m.sig().props());
  l.model = validate_epistemic(EpistemicModel(sig, names, val, {std::vector<DownwardFamily>(names.size(), fam)}));

  BisimSolver solver(m);
  const auto& col = solver.level(level);
  for (auto v : l.worlds) l.colour.push_back(col[v]);
  return l;
}

InfoState BlockDecomposition::block(std::size_t i) const {
  InfoState b;
  for (auto c : blocks.at(i)) b |= c;
  return b;
}

RegularityReport check_kappa_regular(const LocalStructure& l, std::size_t kappa, const BlockDecomposition& d) {
  auto fail = [](std::string why) { return RegularityReport{false, std::move(why)}; };
  if (d.blocks.size() != kappa)
    return fail(std::to_string(d.blocks.size()) + " blocks, expected " + std::to_string(kappa));

  InfoState seen;
  for (std::size_t i = 0; i < d.blocks.size(); ++i)
    for (auto c : d.blocks[i]) {
      if (c.empty()) return fail("empty cell in block " + std::to_string(i));
      if (!c.subset_of(l.cls)) return fail("cell outside the class");
      if (!(c & seen).empty()) return fail("cells overlap");
      seen |= c;
    }
  if (seen != l.cls) return fail("blocks do not cover the class");

  auto colour = ambient_colours(l, ambient_size(l));
  // Generators of Π in ambient indices.
  std::vector<InfoState> gens;
  for (auto g : l.model.Sigma(0, 0).maximal()) {
    InfoState s;
    g.for_each([&](std::size_t i) { s = s.with(l.worlds[i]); });
    if (!s.empty()) gens.push_back(s);
  }
  std::vector<std::uint64_t> masks;
  for (auto g : gens) masks.push_back(colour_mask(g, colour));
  auto A = down_closure(masks);

  for (auto g : gens) {
    bool inside = false;
    for (std::size_t i = 0; i < d.blocks.size(); ++i) inside = inside || g.subset_of(d.block(i));
    if (!inside) return fail("a generator straddles blocks");
  }
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    auto B = d.block(i);
    std::vector<InfoState> restricted;
    for (auto g : gens)
      if (!(g & B).empty()) restricted.push_back(g & B);
    auto maxima = DownwardFamily::from_generators(restricted).maximal();
    std::set<InfoState> cells(d.blocks[i].begin(), d.blocks[i].end());
    if (std::set<InfoState>(maxima.begin(), maxima.end()) != cells)
      return fail("cells of block " + std::to_string(i) + " are not the maximal states of Π in it");
    std::set<std::uint64_t> realized;
    for (auto c : maxima)
      if (!realized.insert(colour_mask(c, colour)).second)
        return fail("block " + std::to_string(i) + " realizes " + mask_name(colour_mask(c, colour)) + " twice");
    if (realized != A) {
      for (auto alpha : A)
        if (!realized.count(alpha))
          return fail("block " + std::to_string(i) + " misses colour combination " + mask_name(alpha));
      return fail("block " + std::to_string(i) + " realizes a colour combination outside Π");
    }
  }
  return {};
}

bool is_kappa_regular(const LocalStructure& l, std::size_t kappa, const BlockDecomposition& d) {
  return check_kappa_regular(l, kappa, d).ok;
}

// ---------------------------------------------------------------------------

namespace {

struct ClassPlan {
  std::size_t agent;
  InfoState cls;
  std::size_t level;
  std::vector<std::vector<InfoState>> blocks;
};

ClassPlan plan_class(const EpistemicModel& m, BisimSolver& solver, std::size_t a, InfoState cls, std::size_t level,
                     std::size_t kappa, std::size_t K) {
  const auto& rho = solver.level(kInfinity);
  const auto& rho_m = solver.level(level);
  const auto& agent = m.sig().agents()[a];
  auto where = agent + " class " + state_name(m.worlds(), cls);

  // π_m: full colour -> level-m colour
  std::map<std::size_t, std::size_t> proj;
  std::map<std::size_t, std::vector<std::size_t>> supply;  // full colour -> worlds
  cls.for_each([&](std::size_t v) {
    proj[rho[v]] = rho_m[v];
    supply[rho[v]].push_back(v);
  });
  auto project = [&](std::uint64_t full) {
    std::uint64_t out = 0;
    for (std::uint64_t b = full; b != 0; b &= b - 1) out |= std::uint64_t{1} << proj.at(std::countr_zero(b));
    return out;
  };

  auto w = cls.members().front();
  std::vector<std::uint64_t> full;
  for (auto g : m.Sigma(a, w).maximal())
    if (!g.empty()) full.push_back(colour_mask(g, rho));
  // Maximal full colour sets.
  std::vector<std::uint64_t> maxc;
  for (auto c : full) {
    bool dominated = false;
    for (auto o : full) dominated = dominated || (o != c && (c & ~o) == 0);
    if (!dominated && std::find(maxc.begin(), maxc.end(), c) == maxc.end()) maxc.push_back(c);
  }
  std::sort(maxc.begin(), maxc.end());
  std::vector<std::uint64_t> projected;
  for (auto c : maxc) projected.push_back(project(c));
  auto A = down_closure(projected);

  // cell[i][alpha] = full colour set assigned to that cell
  std::vector<std::map<std::uint64_t, std::uint64_t>> cell(kappa);
  std::map<std::uint64_t, std::size_t> group;
  for (auto c : maxc) {
    auto alpha = project(c);
    auto i = group[alpha]++;
    if (i >= kappa)
      throw InsufficientRichness(where + ": " + std::to_string(i + 1) + " maximal colour sets project to " +
                                 mask_name(alpha) + " but only " + std::to_string(kappa) + " blocks");
    cell[i][alpha] = c;
  }
  // Remaining cells: a minimal full colour set below some maximal one,
  // preferring colours with the most worlds.
  std::map<std::size_t, std::size_t> demand;
  for (std::size_t i = 0; i < kappa; ++i)
    for (auto& [alpha, c] : cell[i])
      for (std::uint64_t b = c; b != 0; b &= b - 1) demand[std::countr_zero(b)] += K;
  for (std::size_t i = 0; i < kappa; ++i)
    for (auto alpha : A) {
      if (cell[i].count(alpha)) continue;
      std::uint64_t best = 0;
      std::size_t best_slack = 0;
      bool found = false;
      for (auto D : maxc) {
        if ((alpha & ~project(D)) != 0) continue;
        std::uint64_t F = 0;
        std::size_t slack = SIZE_MAX;
        for (std::uint64_t b = alpha; b != 0; b &= b - 1) {
          std::size_t target = std::countr_zero(b), pick = SIZE_MAX;
          long best_left = -1;
          for (std::uint64_t e = D; e != 0; e &= e - 1) {
            std::size_t c = std::countr_zero(e);
            if (proj.at(c) != target) continue;
            long left = static_cast<long>(supply[c].size()) - static_cast<long>(demand[c]);
            if (left > best_left) best_left = left, pick = c;
          }
          F |= std::uint64_t{1} << pick;
          slack = std::min(slack, static_cast<std::size_t>(std::max(0L, best_left)));
        }
        if (!found || slack > best_slack) best = F, best_slack = slack, found = true;
      }
      cell[i][alpha] = best;
      for (std::uint64_t b = best; b != 0; b &= b - 1) demand[std::countr_zero(b)] += K;
    }
  for (auto [c, need] : demand)
    if (need > supply[c].size())
      throw InsufficientRichness(where + ": colour " + std::to_string(c) + " needs " + std::to_string(need) +
                                 " worlds, class has " + std::to_string(supply[c].size()));

  // Fill cells: K worlds per colour, then leftovers into maximal cells.
  std::vector<std::map<std::uint64_t, InfoState>> filled(kappa);
  std::map<std::size_t, std::size_t> used;
  for (std::size_t i = 0; i < kappa; ++i)
    for (auto& [alpha, c] : cell[i])
      for (std::uint64_t b = c; b != 0; b &= b - 1) {
        std::size_t col = std::countr_zero(b);
        for (std::size_t k = 0; k < K; ++k) filled[i][alpha] = filled[i][alpha].with(supply[col][used[col]++]);
      }
  for (auto& [col, ws] : supply)
    for (; used[col] < ws.size(); ++used[col]) {
      bool placed = false;
      for (std::size_t i = 0; i < kappa && !placed; ++i)
        for (auto& [alpha, c] : cell[i])
          if (std::find(maxc.begin(), maxc.end(), c) != maxc.end() && ((c >> col) & 1u)) {
            filled[i][alpha] = filled[i][alpha].with(ws[used[col]]);
            placed = true;
            break;
          }
      if (!placed) throw PostVerificationFailure(where + ": no cell takes colour " + std::to_string(col));
    }

  ClassPlan plan{a, cls, level, std::vector<std::vector<InfoState>>(kappa)};
  for (std::size_t i = 0; i < kappa; ++i) {
    for (auto& [alpha, s] : filled[i]) plan.blocks[i].push_back(s);
    std::sort(plan.blocks[i].begin(), plan.blocks[i].end());
  }
  return plan;
}

} // namespace

RegularizeResult regularize(const EpistemicModel& m, std::size_t kappa, const std::vector<std::size_t>& granularity,
                            std::size_t K) {
  m.require_valid();
  if (kappa == 0 || K == 0) throw InputError("regularize needs kappa >= 1 and K >= 1");
  if (granularity.size() != m.size()) throw InputError("granularity must give one level per world");
  BisimSolver solver(m);
  auto frame = kripke_companion(m);

  std::vector<ClassPlan> plans;
  std::vector<std::vector<DownwardFamily>> sigma(frame.agents.size(), std::vector<DownwardFamily>(m.size()));
  for (std::size_t a = 0; a < frame.agents.size(); ++a)
    for (auto cls : frame.classes[a]) {
      std::size_t level = kInfinity;
      cls.for_each([&](std::size_t v) { level = std::min(level, granularity[v]); });
      plans.push_back(plan_class(m, solver, a, cls, level, kappa, K));
      std::vector<InfoState> cells;
      for (auto& b : plans.back().blocks) cells.insert(cells.end(), b.begin(), b.end());
      auto fam = DownwardFamily::from_generators(cells);
      cls.for_each([&](std::size_t v) { sigma[a][v] = fam; });
    }

  EpistemicModel out;
  try {
    out = validate_epistemic(EpistemicModel(m.sig(), m.worlds(), m.valuations(), sigma));
  } catch (const InvalidModel& e) {
    throw PostVerificationFailure(std::string("rebuilt model is not epistemic: ") + e.what());
  }

  RegularizeResult res{out, {}};
  for (auto& p : plans) {
    auto w = p.cls.members().front();
    BlockDecomposition d{p.blocks};
    auto rep = check_kappa_regular(local_structure(out, w, p.agent, p.level), kappa, d);
    if (!rep.ok)
      throw PostVerificationFailure(m.sig().agents()[p.agent] + " class " + state_name(m.worlds(), p.cls) +
                                    " not regular: " + rep.failure);
    res.classes.push_back({p.agent, p.cls, p.level, std::move(d)});
  }
  if (!is_k_rich(out, K)) throw PostVerificationFailure("result is not K-rich");
  if (2 * m.size() <= kMaxWorlds) {
    BisimSolver both(out, m);
    for (std::size_t w = 0; w < m.size(); ++w)
      if (!both.worlds(w, both.offset() + w, kInfinity))
        throw PostVerificationFailure("world " + m.world_name(w) + " lost its bisimulation type");
  } else {
    // Too large for the joint game: check instead that "same ∼-colour in M"
    // is a bisimulation between the result and M. With equal valuations this
    // reduces to equal colour-set families per agent and world.
    const auto& rho = solver.level(kInfinity);
    auto family = [&](const EpistemicModel& x, std::size_t a, std::size_t w) {
      std::set<std::uint64_t> masks;
      for (auto g : x.Sigma(a, w).maximal()) masks.insert(colour_mask(g, rho));
      std::set<std::uint64_t> top;
      for (auto c : masks) {
        bool dominated = false;
        for (auto o : masks) dominated = dominated || (o != c && (c & ~o) == 0);
        if (!dominated) top.insert(c);
      }
      return top;
    };
    for (std::size_t a = 0; a < frame.agents.size(); ++a)
      for (std::size_t w = 0; w < m.size(); ++w)
        if (family(out, a, w) != family(m, a, w))
          throw PostVerificationFailure("world " + m.world_name(w) + " lost its bisimulation type");
  }
  return res;
}

// ---------------------------------------------------------------------------

Structure b_structure(const LocalStructure& l, std::size_t kappa, const BlockDecomposition& d) {
  auto rep = check_kappa_regular(l, kappa, d);
  if (!rep.ok) throw InputError("decomposition is not regular: " + rep.failure);
  auto colour = ambient_colours(l, ambient_size(l));
  Structure b;
  auto E = b.add_sort("element");
  std::map<std::size_t, std::size_t> id;
  for (std::size_t i = 0; i < l.worlds.size(); ++i) id[l.worlds[i]] = b.add_element(E, l.model.world_name(i));

  std::set<std::size_t> colours(l.colour.begin(), l.colour.end());
  for (auto c : colours) {
    auto r = b.add_relation("C_" + std::to_string(c), {E});
    for (auto v : l.worlds)
      if (colour[v] == c) b.add_tuple(r, {id[v]});
  }
  auto B = b.add_relation("B", {E, E});
  for (std::size_t i = 0; i < d.blocks.size(); ++i)
    d.block(i).for_each([&](std::size_t u) {
      d.block(i).for_each([&](std::size_t v) { b.add_tuple(B, {id[u], id[v]}); });
    });
  std::map<std::uint64_t, std::size_t> P;
  for (const auto& block : d.blocks)
    for (auto c : block) {
      auto alpha = colour_mask(c, colour);
      auto name = mask_name(alpha);
      name = "P_" + name;
      if (!P.count(alpha)) P[alpha] = b.add_relation(name, {E});
      c.for_each([&](std::size_t v) { b.add_tuple(P[alpha], {id[v]}); });
    }
  return b;
}

FoFormula b_membership_formula(const Structure& b) {
  using F = FoFormula;
  const std::string sort = "element";
  auto within = F::forall("x", sort, F::implies(F::mem("x", "S"), F::mem("x", "X")));
  auto one_block = F::forall(
      "x", sort,
      F::forall("y", sort, F::implies(F::conj(F::mem("x", "X"), F::mem("y", "X")), F::rel("B", {"x", "y"}))));
  std::vector<F> cells;
  for (const auto& r : b.relations())
    if (r.name.rfind("P_", 0) == 0)
      cells.push_back(F::forall("x", sort, F::implies(F::mem("x", "X"), F::rel(r.name, {"x"}))));
  return F::exists_set("X", sort, F::conj(within, F::conj(one_block, F::disj_all(cells))));
}

} // namespace inqkit
