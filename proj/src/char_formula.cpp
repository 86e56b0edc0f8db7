#include "inqkit/bisim.hpp"
#include "inqkit/error.hpp"

namespace inqkit {

namespace {
Formula neg(Formula f) { return Formula::implies(std::move(f), Formula::bottom()); }
} // namespace

CharFormulaBuilder::CharFormulaBuilder(const EpistemicModel& m) : m_(m), solver_(m) {}

// χ^0_c is the literal conjunction of the propositional type. For n > 0,
// χ^n_c adds, per agent a and with F the maximal (n-1)-colour sets of the
// generators of Σ_a at a world of colour c:
//   back:  ⊞_a ⩾_{G∈F} δ_G       every member of Σ_a only shows a G-pattern
//   forth: ¬⊞_a ⩾_{c∈G} ¬χ_c     for each nonempty G ∈ F, some member shows all of G
// where δ_G is the classical disjunction of χ^{n-1}_c over c ∈ G.
Formula CharFormulaBuilder::of_colour(std::size_t c, std::size_t n) {
  if (cache_.size() <= n) cache_.resize(n + 1);
  auto& row = cache_[n];
  if (row.size() < solver_.colour_count(n)) row.resize(solver_.colour_count(n));
  if (row[c].valid()) return row[c];

  const auto& lvl = solver_.level(n);
  std::size_t rep = 0;
  while (lvl[rep] != c) ++rep;

  std::vector<Formula> parts;
  for (std::size_t p = 0; p < m_.sig().props().size(); ++p) {
    Formula atom = Formula::atom(p);
    parts.push_back(m_.valuation(p).contains(rep) ? atom : neg(atom));
  }
  if (n > 0) {
    for (std::size_t a = 0; a < m_.sig().agents().size(); ++a) {
      auto prof = solver_.profile(a, rep, n - 1);
      std::vector<Formula> alts;
      for (auto g : prof) alts.push_back(of_colours(g, n - 1));
      parts.push_back(Formula::wbox(a, Formula::idisj_all(alts)));
      for (auto g : prof) {
        if (g == 0) continue;
        std::vector<Formula> negs;
        for (std::uint64_t b = g; b != 0; b &= b - 1)
          negs.push_back(neg(of_colour(static_cast<std::size_t>(std::countr_zero(b)), n - 1)));
        parts.push_back(neg(Formula::wbox(a, Formula::idisj_all(negs))));
      }
    }
  }
  row[c] = Formula::conj_all(parts);
  return row[c];
}

Formula CharFormulaBuilder::of_colours(std::uint64_t colours, std::size_t n) {
  std::vector<Formula> ds;
  for (std::uint64_t b = colours; b != 0; b &= b - 1)
    ds.push_back(of_colour(static_cast<std::size_t>(std::countr_zero(b)), n));
  return Formula::classical_disj_all(ds);
}

Formula CharFormulaBuilder::world(std::size_t w, std::size_t n) {
  if (w >= m_.size()) throw InputError("world out of range");
  return of_colour(solver_.level(n)[w], n);
}

Formula CharFormulaBuilder::state(InfoState s, std::size_t n) {
  if (!s.subset_of(m_.all())) throw InputError("state out of range");
  return of_colours(solver_.colour_set(s, n), n);
}

Formula char_formula(const EpistemicModel& m, std::size_t w, std::size_t n, std::size_t cap) {
  auto f = CharFormulaBuilder(m).world(w, n);
  if (f.node_count() > cap) throw CapExceeded("characteristic formula size", f.node_count(), cap);
  return f;
}

Formula char_formula(const EpistemicModel& m, InfoState s, std::size_t n, std::size_t cap) {
  auto f = CharFormulaBuilder(m).state(s, n);
  if (f.node_count() > cap) throw CapExceeded("characteristic formula size", f.node_count(), cap);
  return f;
}

} // namespace inqkit
