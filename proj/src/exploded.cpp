#include "inqkit/transform.hpp"

#include "inqkit/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace inqkit {

namespace {

std::string copy_name(const std::string& world, const std::string& agent) { return world + "@" + agent; }

std::string halo_state_name(const EpistemicModel& m, const std::string& agent, std::size_t k, InfoState s) {
  return agent + "#" + std::to_string(k) + ":" + state_name(m.worlds(), s);
}

struct Built {
  Structure x;
  KripkeFrame frame;
};

Built build(const EpistemicModel& m, std::size_t class_cap) {
  m.require_valid();
  Built out;
  auto& x = out.x;
  out.frame = kripke_companion(m);
  const auto& frame = out.frame;
  const auto& agents = m.sig().agents();
  const auto& props = m.sig().props();

  for (std::size_t a = 0; a < agents.size(); ++a)
    for (auto c : frame.classes[a])
      if (c.size() > class_cap) throw CapExceeded("class size in exploded view", c.size(), class_cap);

  auto W = x.add_sort("world");
  auto S = x.add_sort("state");
  std::vector<std::size_t> R(agents.size()), A(agents.size()), E(agents.size()), P(props.size());
  for (std::size_t a = 0; a < agents.size(); ++a) R[a] = x.add_relation("R_" + agents[a], {W, W});
  auto RI = x.add_relation("RI", {W, W});
  for (std::size_t a = 0; a < agents.size(); ++a) A[a] = x.add_relation("A_" + agents[a], {W});
  auto in = x.add_relation("in", {W, S});
  for (std::size_t a = 0; a < agents.size(); ++a) E[a] = x.add_relation("E_" + agents[a], {W, S});
  for (std::size_t p = 0; p < props.size(); ++p) P[p] = x.add_relation("P_" + props[p], {W});

  std::vector<std::size_t> core(m.size());
  for (std::size_t w = 0; w < m.size(); ++w) core[w] = x.add_element(W, m.world_name(w));
  for (std::size_t a = 0; a < agents.size(); ++a)
    for (std::size_t u = 0; u < m.size(); ++u)
      m.sigma(a, u).for_each([&](std::size_t v) { x.add_tuple(R[a], {core[u], core[v]}); });

  for (std::size_t a = 0; a < agents.size(); ++a)
    for (std::size_t k = 0; k < frame.classes[a].size(); ++k) {
      InfoState cls = frame.classes[a][k];
      std::map<std::size_t, std::size_t> copy;
      cls.for_each([&](std::size_t u) {
        auto c = x.add_element(W, copy_name(m.world_name(u), agents[a]));
        copy[u] = c;
        x.add_tuple(RI, {core[u], c});
        x.add_tuple(A[a], {c});
        for (std::size_t p = 0; p < props.size(); ++p)
          if (m.valuation(p).contains(u)) x.add_tuple(P[p], {c});
      });
      std::vector<InfoState> subsets;
      cls.for_each_subset([&](InfoState s) { subsets.push_back(s); });
      std::sort(subsets.begin(), subsets.end());
      auto rep = *cls.members().begin();
      for (auto s : subsets) {
        auto e = x.add_element(S, halo_state_name(m, agents[a], k, s));
        s.for_each([&](std::size_t u) { x.add_tuple(in, {copy[u], e}); });
        // Σ is constant on the class
        if (m.Sigma(a, rep).contains(s))
          cls.for_each([&](std::size_t u) { x.add_tuple(E[a], {copy[u], e}); });
      }
    }
  return out;
}

} // namespace

ExplodedView exploded_view(const EpistemicModel& m, std::optional<std::size_t> world, std::size_t class_cap) {
  auto b = build(m, class_cap);
  ExplodedView v{std::move(b.x), std::nullopt};
  if (world) {
    if (*world >= m.size()) throw InputError("point world out of range");
    v.point = v.structure.element_index(m.world_name(*world));
    v.structure.set_point("point", *v.point);
  }
  return v;
}

ExplodedView exploded_view(const EpistemicModel& m, InfoState state, std::size_t class_cap) {
  auto ms = dummy_agent_expand(m, state);
  auto b = build(ms, class_cap);
  auto a = ms.sig().agent_index(kDummyAgent);
  auto w = state.members().front();
  auto name = halo_state_name(ms, kDummyAgent, b.frame.class_of[a][w], state);
  ExplodedView v{std::move(b.x), std::nullopt};
  v.point = v.structure.element_index(name);
  v.structure.set_point("point", *v.point);
  return v;
}

RelationalModel recover_from_exploded(const Structure& x) {
  auto W = x.sort_index("world"), S = x.sort_index("state");
  if (W == SIZE_MAX || S == SIZE_MAX) throw InputError("exploded view needs sorts world and state");
  auto need = [&](const std::string& name) {
    auto r = x.relation_index(name);
    if (r == SIZE_MAX) throw InputError("exploded view lacks relation " + name);
    return r;
  };
  auto RI = need("RI");
  auto in = need("in");

  std::vector<std::string> agents, props;
  for (const auto& r : x.relations()) {
    if (r.name.rfind("E_", 0) == 0) agents.push_back(r.name.substr(2));
    if (r.name.rfind("P_", 0) == 0) props.push_back(r.name.substr(2));
  }
  Signature sig(agents, props);

  // Core worlds are the RI-domain, in element order.
  std::vector<std::size_t> core;
  std::map<std::size_t, std::vector<std::size_t>> copies;
  std::map<std::size_t, std::size_t> owner;
  for (const auto& t : x.relations()[RI].tuples) {
    copies[t[0]].push_back(t[1]);
    if (owner.count(t[1]) && owner[t[1]] != t[0]) throw InputError("copy with two RI-sources");
    owner[t[1]] = t[0];
  }
  for (auto& [w, cs] : copies) core.push_back(w);
  if (core.size() > kMaxWorlds) throw CapExceeded("worlds in exploded view", core.size(), kMaxWorlds);
  std::map<std::size_t, std::size_t> index;
  RelationalModel r;
  r.sig = sig;
  for (std::size_t i = 0; i < core.size(); ++i) {
    index[core[i]] = i;
    r.worlds.push_back(x.element(core[i]).name);
  }

  // (RI ∘ in)^{-1}: state element -> world set.
  std::map<std::size_t, InfoState> pullback;
  for (auto e : x.sort_elements(S)) pullback[e] = InfoState{};
  for (const auto& t : x.relations()[in].tuples) {
    auto it = owner.find(t[0]);
    if (it == owner.end()) throw InputError("membership from a world that is not a copy");
    pullback[t[1]] = pullback[t[1]].with(index[it->second]);
  }
  std::set<InfoState> states{InfoState{}};
  for (auto& [e, s] : pullback) states.insert(s);
  r.states.assign(states.begin(), states.end());

  r.props.assign(props.size(), InfoState{});
  for (std::size_t p = 0; p < props.size(); ++p) {
    auto rel = need("P_" + props[p]);
    for (const auto& t : x.relations()[rel].tuples) {
      auto it = owner.find(t[0]);
      if (it == owner.end()) throw InputError("valuation on a world that is not a copy");
      r.props[p] = r.props[p].with(index[it->second]);
    }
  }

  r.E.assign(sig.agents().size(), std::vector<std::vector<std::size_t>>(core.size()));
  for (std::size_t a = 0; a < sig.agents().size(); ++a) {
    auto E = need("E_" + sig.agents()[a]);
    auto A = need("A_" + sig.agents()[a]);
    for (std::size_t i = 0; i < core.size(); ++i) {
      std::size_t wa = SIZE_MAX;
      for (auto c : copies[core[i]])
        if (x.holds1(A, c)) {
          if (wa != SIZE_MAX) throw InputError("world with two copies for one agent");
          wa = c;
        }
      if (wa == SIZE_MAX) throw InputError("world " + r.worlds[i] + " has no copy for " + sig.agents()[a]);
      std::set<std::size_t> idx;
      for (auto e : x.sort_elements(S))
        if (x.holds2(E, wa, e)) idx.insert(r.state_index(pullback[e]));
      r.E[a][i].assign(idx.begin(), idx.end());
    }
  }
  return r;
}

} // namespace inqkit
