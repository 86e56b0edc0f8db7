#include "inqkit/transform.hpp"

#include "inqkit/error.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace inqkit {

namespace {

InfoState shift(InfoState s, std::size_t by) { return InfoState(by >= 64 ? 0 : s.bits() << by); }

InfoState image(InfoState s, const std::vector<std::size_t>& pi) {
  InfoState out;
  s.for_each([&](std::size_t w) { out = out.with(pi[w]); });
  return out;
}

std::string names_of(const EpistemicModel& m, InfoState s) { return state_name(m.worlds(), s); }

} // namespace

EpistemicModel disjoint_union(const EpistemicModel& m1, const EpistemicModel& m2, const std::string& suffix) {
  m1.require_valid();
  m2.require_valid();
  if (!(m1.sig() == m2.sig())) throw InputError("disjoint union needs equal signatures");
  std::size_t n1 = m1.size(), n = n1 + m2.size();
  if (n > kMaxWorlds) throw CapExceeded("worlds in disjoint union", n, kMaxWorlds);

  std::vector<std::string> worlds = m1.worlds();
  std::set<std::string> seen(worlds.begin(), worlds.end());
  for (const auto& w : m2.worlds()) {
    auto name = w + suffix;
    if (!seen.insert(name).second) throw InputError("world name clash in disjoint union: " + name);
    worlds.push_back(name);
  }
  std::vector<InfoState> val;
  for (std::size_t p = 0; p < m1.sig().props().size(); ++p)
    val.push_back(m1.valuation(p) | shift(m2.valuation(p), n1));
  std::vector<std::vector<DownwardFamily>> sigma(m1.sig().agents().size());
  for (std::size_t a = 0; a < sigma.size(); ++a) {
    for (std::size_t w = 0; w < n1; ++w) sigma[a].push_back(m1.Sigma(a, w));
    for (std::size_t w = 0; w < m2.size(); ++w) {
      std::vector<InfoState> gens;
      for (auto g : m2.Sigma(a, w).maximal()) gens.push_back(shift(g, n1));
      sigma[a].push_back(DownwardFamily::from_generators(gens));
    }
  }
  return validate_epistemic(EpistemicModel(m1.sig(), worlds, val, sigma));
}

// ---------------------------------------------------------------------------

Covering rich_cover(const EpistemicModel& m, std::size_t K) {
  m.require_valid();
  if (K == 0) throw InputError("rich_cover needs K >= 1");
  std::size_t n = m.size() * K;
  if (n > kMaxWorlds) throw CapExceeded("worlds in rich cover", n, kMaxWorlds);

  std::vector<std::string> worlds;
  std::vector<std::size_t> pi;
  for (std::size_t w = 0; w < m.size(); ++w)
    for (std::size_t i = 1; i <= K; ++i) {
      worlds.push_back(m.world_name(w) + ":" + std::to_string(i));
      pi.push_back(w);
    }
  auto preimage = [&](InfoState s) {
    InfoState out;
    for (std::size_t v = 0; v < n; ++v)
      if (s.contains(pi[v])) out = out.with(v);
    return out;
  };
  std::vector<InfoState> val;
  for (auto v : m.valuations()) val.push_back(preimage(v));
  std::vector<std::vector<DownwardFamily>> sigma(m.sig().agents().size());
  for (std::size_t a = 0; a < sigma.size(); ++a)
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<InfoState> gens;
      for (auto g : m.Sigma(a, pi[v]).maximal()) gens.push_back(preimage(g));
      sigma[a].push_back(DownwardFamily::from_generators(gens));
    }
  return Covering{validate_epistemic(EpistemicModel(m.sig(), worlds, val, sigma)), m, pi};
}

CoveringReport verify_covering(const Covering& c) {
  const auto& src = c.source;
  const auto& tgt = c.target;
  auto fail = [](std::string what, std::string witness) {
    return CoveringReport{false, std::move(what), std::move(witness)};
  };
  if (!(src.sig() == tgt.sig())) return fail("signature", "signatures differ");
  if (c.pi.size() != src.size()) return fail("totality", "map has " + std::to_string(c.pi.size()) + " entries");
  for (std::size_t v = 0; v < src.size(); ++v)
    if (c.pi[v] >= tgt.size()) return fail("totality", src.world_name(v) + " maps outside the target");

  InfoState hit;
  for (auto w : c.pi) hit = hit.with(w);
  if (hit != tgt.all()) {
    auto missing = tgt.all().minus(hit).members().front();
    return fail("surjectivity", tgt.world_name(missing) + " has no preimage");
  }
  for (std::size_t p = 0; p < tgt.sig().props().size(); ++p)
    for (std::size_t v = 0; v < src.size(); ++v)
      if (src.valuation(p).contains(v) != tgt.valuation(p).contains(c.pi[v]))
        return fail("valuation", tgt.sig().props()[p] + " at " + src.world_name(v));

  for (std::size_t a = 0; a < tgt.sig().agents().size(); ++a)
    for (std::size_t v = 0; v < src.size(); ++v) {
      std::vector<InfoState> imgs;
      for (auto g : src.Sigma(a, v).maximal()) imgs.push_back(image(g, c.pi));
      auto lifted = DownwardFamily::from_generators(imgs);
      if (!(lifted == tgt.Sigma(a, c.pi[v]))) {
        std::string got;
        for (auto g : lifted.maximal()) got += names_of(tgt, g);
        return fail("inquisitive assignment",
                    tgt.sig().agents()[a] + " at " + src.world_name(v) + ": image generated by " + got);
      }
    }

  BisimSolver solver(src, tgt);
  for (std::size_t v = 0; v < src.size(); ++v)
    if (!solver.worlds(v, solver.offset() + c.pi[v], kInfinity))
      return fail("bisimilarity", src.world_name(v) + " is not bisimilar to " + tgt.world_name(c.pi[v]));
  return {};
}

bool is_k_rich(const EpistemicModel& m, std::size_t K) {
  m.require_valid();
  BisimSolver solver(m);
  const auto& col = solver.level(kInfinity);
  for (std::size_t a = 0; a < m.sig().agents().size(); ++a)
    for (std::size_t w = 0; w < m.size(); ++w)
      for (auto g : m.Sigma(a, w).maximal()) {
        std::map<std::size_t, std::size_t> count;
        g.for_each([&](std::size_t v) { ++count[col[v]]; });
        for (auto [c, k] : count)
          if (k < K) return false;
      }
  return true;
}

// ---------------------------------------------------------------------------

EpistemicModel dummy_agent_expand(const EpistemicModel& m, InfoState s, const std::string& agent) {
  m.require_valid();
  if (s.empty()) throw InputError("dummy agent expansion needs a non-empty state");
  if (!s.subset_of(m.all())) throw InputError("state is not a set of worlds of the model");
  if (m.sig().has_agent(agent)) throw InputError("agent name already in use: " + agent);

  auto agents = m.sig().agents();
  agents.push_back(agent);
  Signature sig(agents, m.sig().props());
  std::vector<std::vector<DownwardFamily>> sigma(sig.agents().size());
  for (std::size_t a = 0; a < sig.agents().size(); ++a) {
    const auto& name = sig.agents()[a];
    for (std::size_t w = 0; w < m.size(); ++w) {
      if (name == agent)
        sigma[a].push_back(DownwardFamily::from_generators({s.contains(w) ? s : InfoState::singleton(w)}));
      else
        sigma[a].push_back(m.Sigma(m.sig().agent_index(name), w));
    }
  }
  return validate_epistemic(EpistemicModel(sig, m.worlds(), m.valuations(), sigma));
}

// ---------------------------------------------------------------------------

bool is_n_acyclic(const KripkeFrame& frame, std::size_t N) {
  if (N < 2) throw InputError("N-acyclicity needs N >= 2");
  std::size_t A = frame.agents.size();
  if (A < 2) return true;
  // Layered reachability over (world, last agent) from each (w0, a0).
  for (std::size_t w0 = 0; w0 < frame.worlds; ++w0)
    for (std::size_t a0 = 0; a0 < A; ++a0) {
      std::set<std::pair<std::size_t, std::size_t>> layer;
      frame.cls(a0, w0).for_each([&](std::size_t v) {
        if (v != w0) layer.insert({v, a0});
      });
      for (std::size_t n = 2; n <= N && !layer.empty(); ++n) {
        std::set<std::pair<std::size_t, std::size_t>> next;
        for (auto [u, b] : layer)
          for (std::size_t c = 0; c < A; ++c) {
            if (c == b) continue;
            frame.cls(c, u).for_each([&](std::size_t v) {
              if (v != u) next.insert({v, c});
            });
          }
        for (std::size_t c = 0; c < A; ++c)
          if (c != a0 && next.count({w0, c})) return false;
        layer = std::move(next);
      }
    }
  return true;
}

std::vector<std::size_t> granularity_schedule(const KripkeFrame& frame, std::size_t w, std::size_t ell) {
  if (w >= frame.worlds) throw InputError("world out of range");
  std::vector<std::size_t> dist(frame.worlds, SIZE_MAX);
  std::deque<std::size_t> queue{w};
  dist[w] = 0;
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (std::size_t a = 0; a < frame.agents.size(); ++a)
      frame.cls(a, u).for_each([&](std::size_t v) {
        if (dist[v] == SIZE_MAX) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      });
  }
  std::vector<std::size_t> m(frame.worlds, 0);
  for (std::size_t u = 0; u < frame.worlds; ++u)
    if (dist[u] != SIZE_MAX && dist[u] <= ell + 1) m[u] = ell + 1 - dist[u];
  return m;
}

} // namespace inqkit
