#include "inqkit/relational.hpp"

#include "inqkit/error.hpp"

#include <algorithm>
#include <set>

namespace inqkit {

std::size_t RelationalModel::state_index(InfoState s) const {
  auto it = std::lower_bound(states.begin(), states.end(), s);
  if (it == states.end() || *it != s) return SIZE_MAX;
  return static_cast<std::size_t>(it - states.begin());
}

InfoState RelationalModel::R(std::size_t a, std::size_t w) const {
  InfoState u;
  for (auto i : E.at(a).at(w)) u |= states[i];
  return u;
}

EncodingFlavor parse_flavor(const std::string& s) {
  if (s == "minimal") return EncodingFlavor::minimal;
  if (s == "locally_full" || s == "lf") return EncodingFlavor::locally_full;
  if (s == "full") return EncodingFlavor::full;
  throw InputError("unknown encoding flavor '" + s + "'");
}

std::string to_string(EncodingFlavor f) {
  switch (f) {
  case EncodingFlavor::minimal: return "minimal";
  case EncodingFlavor::locally_full: return "locally_full";
  case EncodingFlavor::full: return "full";
  }
  return "";
}

RelationalModel encode(const EpistemicModel& m, EncodingFlavor flavor, std::optional<InfoState> pointed,
                       bool allow_invalid, std::size_t full_cap) {
  if (!allow_invalid) m.require_valid();
  if (flavor == EncodingFlavor::full && m.size() > full_cap)
    throw CapExceeded("full encoding: number of worlds", m.size(), full_cap);
  if (pointed && !pointed->subset_of(m.all())) throw InputError("pointed state mentions unknown worlds");

  std::set<InfoState> S;
  auto add_powerset = [&](InfoState s) { s.for_each_subset([&](InfoState t) { S.insert(t); }); };
  const std::size_t agents = m.sig().agents().size();
  for (std::size_t a = 0; a < agents; ++a)
    for (std::size_t w = 0; w < m.size(); ++w) {
      for (auto g : m.Sigma(a, w).maximal()) add_powerset(g);
      if (flavor == EncodingFlavor::locally_full) add_powerset(m.sigma(a, w));
    }
  if (flavor == EncodingFlavor::full) add_powerset(m.all());
  if (pointed) add_powerset(*pointed);
  // With no agents the second sort would be empty; keep ∅ so it is not.
  S.insert(InfoState{});

  RelationalModel r;
  r.sig = m.sig();
  r.worlds = m.worlds();
  r.states.assign(S.begin(), S.end());
  r.props = m.valuations();
  r.E.assign(agents, std::vector<std::vector<std::size_t>>(m.size()));
  for (std::size_t a = 0; a < agents; ++a)
    for (std::size_t w = 0; w < m.size(); ++w)
      for (std::size_t i = 0; i < r.states.size(); ++i)
        if (m.Sigma(a, w).contains(r.states[i])) r.E[a][w].push_back(i);

  if (!allow_invalid) {
    auto rep = validate_relational(r);
    if (!rep.ok()) throw PostVerificationFailure("encoding failed relational validation");
  }
  return r;
}

bool RelationalReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.ok; });
}

RelationalReport validate_relational(const RelationalModel& r) {
  auto name = [&](InfoState s) {
    std::string out = "{";
    bool first = true;
    s.for_each([&](std::size_t w) {
      out += (first ? "" : ",") + (w < r.worlds.size() ? r.worlds[w] : std::to_string(w));
      first = false;
    });
    return out + "}";
  };
  RelationalReport rep;
  ConditionCheck ext{"extensionality"}, lps{"local powerset"}, nonempty{"non-emptiness"},
      down{"downward closure"}, fact{"factivity"}, intro{"full introspection"};
  auto fail = [](ConditionCheck& c, std::string w) {
    if (c.ok) c.witness = std::move(w);
    c.ok = false;
  };

  std::set<InfoState> seen;
  for (auto s : r.states)
    if (!seen.insert(s).second) fail(ext, name(s));
  for (auto s : r.states)
    s.for_each_subset([&](InfoState t) {
      if (!seen.count(t)) fail(lps, "state " + name(s) + " lacks subset " + name(t));
    });
  for (std::size_t a = 0; a < r.E.size(); ++a) {
    const auto& agent = r.sig.agents()[a];
    for (std::size_t w = 0; w < r.worlds.size(); ++w) {
      const auto& Ew = r.E[a][w];
      if (Ew.empty()) fail(nonempty, agent + "," + r.worlds[w]);
      for (auto i : Ew)
        for (std::size_t j = 0; j < r.states.size(); ++j)
          if (r.states[j].subset_of(r.states[i]) && !std::binary_search(Ew.begin(), Ew.end(), j))
            fail(down, agent + "," + r.worlds[w] + ": " + name(r.states[i]) + " but not " + name(r.states[j]));
      InfoState Rw = r.R(a, w);
      if (!Rw.contains(w)) fail(fact, agent + "," + r.worlds[w]);
      Rw.for_each([&](std::size_t v) {
        if (v < r.worlds.size() && r.E[a][v] != Ew)
          fail(intro, agent + "," + r.worlds[w] + "," + r.worlds[v]);
      });
    }
  }
  rep.checks = {ext, lps, nonempty, down, fact, intro};

  rep.full = r.worlds.size() < 64 && seen.size() == (std::size_t{1} << r.worlds.size());
  rep.locally_full = true;
  for (std::size_t a = 0; a < r.E.size() && rep.locally_full; ++a)
    for (std::size_t w = 0; w < r.worlds.size() && rep.locally_full; ++w)
      r.R(a, w).for_each_subset([&](InfoState t) {
        if (!seen.count(t)) rep.locally_full = false;
      });
  return rep;
}

EpistemicModel decode(const RelationalModel& r) {
  auto rep = validate_relational(r);
  if (!rep.ok()) {
    std::string msg = "invalid relational model:";
    for (const auto& c : rep.checks)
      if (!c.ok) msg += " " + c.condition + " (" + c.witness + ")";
    throw InvalidModel(msg);
  }
  std::vector<std::vector<DownwardFamily>> sigma(r.E.size());
  for (std::size_t a = 0; a < r.E.size(); ++a)
    for (std::size_t w = 0; w < r.worlds.size(); ++w) {
      std::vector<InfoState> gens;
      for (auto i : r.E[a][w]) gens.push_back(r.states[i]);
      sigma[a].push_back(DownwardFamily::from_generators(std::move(gens)));
    }
  return validate_epistemic(EpistemicModel(r.sig, r.worlds, r.props, std::move(sigma)));
}

bool same_relational_model(const RelationalModel& a, const RelationalModel& b) {
  if (!(a.sig == b.sig) || a.worlds != b.worlds || a.props != b.props) return false;
  std::set<InfoState> sa(a.states.begin(), a.states.end()), sb(b.states.begin(), b.states.end());
  if (sa != sb) return false;
  for (std::size_t ag = 0; ag < a.E.size(); ++ag)
    for (std::size_t w = 0; w < a.worlds.size(); ++w) {
      std::set<InfoState> ea, eb;
      for (auto i : a.E[ag][w]) ea.insert(a.states[i]);
      for (auto i : b.E[ag][w]) eb.insert(b.states[i]);
      if (ea != eb) return false;
    }
  return true;
}

} // namespace inqkit
