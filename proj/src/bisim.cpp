#include "inqkit/bisim.hpp"

#include "inqkit/error.hpp"

#include <algorithm>
#include <map>

namespace inqkit {

namespace {

// Keeps only the ⊆-maximal masks, sorted.
std::vector<std::uint64_t> maxima(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    bool sub = false;
    for (std::size_t j = 0; j < v.size() && !sub; ++j)
      sub = j != i && (v[i] & ~v[j]) == 0;
    if (!sub) out.push_back(v[i]);
  }
  return out;
}

bool covered(std::uint64_t set, const std::vector<std::uint64_t>& family) {
  for (auto g : family)
    if ((set & ~g) == 0) return true;
  return false;
}

} // namespace

BisimSolver::BisimSolver(const EpistemicModel& m) {
  m.require_valid();
  sig_ = &m.sig();
  gens_.resize(m.sig().agents().size());
  add_model(m, 0, "");
  n1_ = m.size();
}

BisimSolver::BisimSolver(const EpistemicModel& m1, const EpistemicModel& m2) {
  m1.require_valid();
  m2.require_valid();
  if (!(m1.sig() == m2.sig())) throw InputError("models have different signatures");
  if (m1.size() + m2.size() > kMaxWorlds)
    throw CapExceeded("disjoint union size", m1.size() + m2.size(), kMaxWorlds);
  sig_ = &m1.sig();
  gens_.resize(m1.sig().agents().size());
  add_model(m1, 0, "M:");
  n1_ = m1.size();
  add_model(m2, m1.size(), "M':");
}

void BisimSolver::add_model(const EpistemicModel& m, std::size_t offset, const std::string& tag) {
  for (std::size_t w = 0; w < m.size(); ++w) {
    std::uint64_t bits = 0;
    for (std::size_t p = 0; p < m.sig().props().size(); ++p)
      if (m.valuation(p).contains(w)) bits |= std::uint64_t{1} << p;
    atoms_.push_back(bits);
    labels_.push_back(tag + m.world_name(w));
    for (std::size_t a = 0; a < gens_.size(); ++a) {
      std::vector<InfoState> g;
      for (auto s : m.Sigma(a, w).maximal()) g.push_back(InfoState(s.bits() << offset));
      gens_[a].push_back(std::move(g));
    }
  }
}

namespace {
std::vector<std::size_t> canonical_ids(const std::vector<std::vector<std::uint64_t>>& keys) {
  std::map<std::vector<std::uint64_t>, std::size_t> ids;
  std::vector<std::size_t> out;
  out.reserve(keys.size());
  for (const auto& k : keys) {
    auto [it, fresh] = ids.emplace(k, ids.size());
    out.push_back(it->second);
  }
  return out;
}
} // namespace

void BisimSolver::refine_once() {
  if (levels_.empty()) {
    std::vector<std::vector<std::uint64_t>> keys;
    for (auto b : atoms_) keys.push_back({b});
    levels_.push_back(canonical_ids(keys));
    return;
  }
  const std::size_t n = levels_.size() - 1;
  std::vector<std::vector<std::uint64_t>> keys(size());
  for (std::size_t w = 0; w < size(); ++w) {
    auto& k = keys[w];
    k.push_back(levels_[n][w]);
    for (std::size_t a = 0; a < gens_.size(); ++a) {
      auto prof = profile(a, w, n);
      k.push_back(prof.size());
      k.insert(k.end(), prof.begin(), prof.end());
    }
  }
  auto next = canonical_ids(keys);
  std::size_t before = *std::max_element(levels_[n].begin(), levels_[n].end());
  std::size_t after = *std::max_element(next.begin(), next.end());
  if (before == after) stable_ = true;
  levels_.push_back(std::move(next));
}

const std::vector<std::size_t>& BisimSolver::level(std::size_t n) {
  if (size() == 0) {
    static const std::vector<std::size_t> none;
    return none;
  }
  if (levels_.empty()) refine_once();
  while (levels_.size() <= n && !stable_) refine_once();
  return levels_[std::min(n, levels_.size() - 1)];
}

std::size_t BisimSolver::colour_count(std::size_t n) {
  const auto& l = level(n);
  return l.empty() ? 0 : *std::max_element(l.begin(), l.end()) + 1;
}

std::size_t BisimSolver::stable_level() {
  level(kInfinity);
  // The last level equals the one before it once stable.
  return levels_.size() >= 2 ? levels_.size() - 2 : 0;
}

std::uint64_t BisimSolver::colour_set(InfoState s, std::size_t n) {
  const auto& l = level(n);
  std::uint64_t out = 0;
  s.for_each([&](std::size_t w) { out |= std::uint64_t{1} << l[w]; });
  return out;
}

std::vector<std::uint64_t> BisimSolver::profile(std::size_t a, std::size_t w, std::size_t n) {
  std::vector<std::uint64_t> sets;
  for (auto g : gens_[a][w]) sets.push_back(colour_set(g, n));
  return maxima(std::move(sets));
}

bool BisimSolver::states(InfoState s, InfoState t, std::size_t n) {
  return colour_set(s, n) == colour_set(t, n);
}

std::string BisimSolver::world_label(std::size_t u) const { return labels_.at(u); }

std::string BisimSolver::state_label(InfoState s) const {
  std::string out = "{";
  bool first = true;
  s.for_each([&](std::size_t w) {
    if (!first) out += ",";
    first = false;
    out += labels_[w];
  });
  return out + "}";
}

// Produces a winning play for I from (u, v), assuming u and v are separated
// at level n. II answers as well as possible at every step.
void BisimSolver::play(std::size_t u, std::size_t v, std::size_t n, std::vector<Move>& out) {
  out.push_back({"position", "(" + world_label(u) + ", " + world_label(v) + ")"});
  if (atoms_[u] != atoms_[v]) {
    std::size_t p = static_cast<std::size_t>(std::countr_zero(atoms_[u] ^ atoms_[v]));
    out.push_back({"end", "atomic disagreement on " + sig_->props().at(p)});
    return;
  }
  // Find the lowest level at which u and v separate.
  std::size_t k = 0;
  while (level(k)[u] == level(k)[v]) ++k;
  (void)n;
  const std::size_t m = k - 1;
  for (std::size_t a = 0; a < gens_.size(); ++a) {
    for (int side = 0; side < 2; ++side) {
      std::size_t x = side == 0 ? u : v, y = side == 0 ? v : u;
      auto other = profile(a, y, m);
      for (auto g : gens_[a][x]) {
        std::uint64_t cs = colour_set(g, m);
        if (covered(cs, other)) continue;
        out.push_back({"I", "agent " + sig_->agents()[a] + ", state " + state_label(g)});
        // II picks the member of Σ_a(y) whose colours best fit g.
        InfoState best;
        std::size_t best_hits = 0;
        for (auto h : gens_[a][y]) {
          InfoState restricted;
          h.for_each([&](std::size_t z) {
            if ((cs >> level(m)[z]) & 1u) restricted = restricted.with(z);
          });
          std::size_t hits = static_cast<std::size_t>(std::popcount(colour_set(restricted, m)));
          if (best.empty() || hits > best_hits) {
            best = restricted;
            best_hits = hits;
          }
        }
        out.push_back({"II", "state " + state_label(best)});
        std::uint64_t missing = cs & ~colour_set(best, m);
        std::size_t pick = 0;
        g.for_each([&](std::size_t z) {
          if (((missing >> level(m)[z]) & 1u) && pick == 0) pick = z + 1;
        });
        out.push_back({"I", "world " + world_label(pick - 1)});
        if (best.empty()) {
          out.push_back({"end", "II has no world to answer with"});
          return;
        }
        std::size_t reply = static_cast<std::size_t>(std::countr_zero(best.bits()));
        out.push_back({"II", "world " + world_label(reply)});
        if (side == 0) play(pick - 1, reply, m, out);
        else play(reply, pick - 1, m, out);
        return;
      }
    }
  }
  out.push_back({"end", "no separating move found"});
}

GameResult BisimSolver::world_game(std::size_t u, std::size_t v, std::size_t n) {
  GameResult r;
  r.holds = worlds(u, v, n);
  if (!r.holds) play(u, v, n, r.witness);
  return r;
}

GameResult BisimSolver::state_game(InfoState s, InfoState t, std::size_t n) {
  GameResult r;
  r.holds = states(s, t, n);
  if (r.holds) return r;
  r.witness.push_back({"position", "(" + state_label(s) + ", " + state_label(t) + ")"});
  for (int side = 0; side < 2; ++side) {
    InfoState x = side == 0 ? s : t, y = side == 0 ? t : s;
    std::uint64_t other = colour_set(y, n);
    std::size_t pick = SIZE_MAX;
    x.for_each([&](std::size_t z) {
      if (pick == SIZE_MAX && !((other >> level(n)[z]) & 1u)) pick = z;
    });
    if (pick == SIZE_MAX) continue;
    r.witness.push_back({"I", "world " + world_label(pick)});
    if (y.empty()) {
      r.witness.push_back({"end", "II has no world to answer with"});
      return r;
    }
    std::size_t reply = static_cast<std::size_t>(std::countr_zero(y.bits()));
    r.witness.push_back({"II", "world " + world_label(reply)});
    if (side == 0) play(pick, reply, n, r.witness);
    else play(reply, pick, n, r.witness);
    return r;
  }
  return r;
}

// ---------------------------------------------------------------------------

GameResult bisim_game(const EpistemicModel& m, std::size_t w, const EpistemicModel& m2, std::size_t w2,
                      std::size_t depth) {
  BisimSolver s(m, m2);
  return s.world_game(w, s.offset() + w2, depth);
}

GameResult bisim_game(const EpistemicModel& m, InfoState st, const EpistemicModel& m2, InfoState st2,
                      std::size_t depth) {
  BisimSolver s(m, m2);
  return s.state_game(st, InfoState(st2.bits() << s.offset()), depth);
}

bool bisim_check(const EpistemicModel& m, std::size_t w, const EpistemicModel& m2, std::size_t w2,
                 std::size_t depth) {
  return bisim_game(m, w, m2, w2, depth).holds;
}

bool bisim_check(const EpistemicModel& m, InfoState s, const EpistemicModel& m2, InfoState s2,
                 std::size_t depth) {
  BisimSolver solver(m, m2);
  return solver.states(s, InfoState(s2.bits() << solver.offset()), depth);
}

Colouring bisim_partition(const EpistemicModel& m, std::size_t n) {
  BisimSolver s(m);
  return {n, s.level(n), s.colour_count(n)};
}

Colouring bisim_partition(const EpistemicModel& m1, const EpistemicModel& m2, std::size_t n) {
  BisimSolver s(m1, m2);
  return {n, s.level(n), s.colour_count(n)};
}

} // namespace inqkit
