#include "inqkit/model.hpp"

#include "inqkit/error.hpp"

#include <algorithm>

namespace inqkit {

DownwardFamily DownwardFamily::from_generators(std::vector<InfoState> gens) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<InfoState> kept;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = i + 1; j < gens.size() && !subsumed; ++j)
      subsumed = gens[i].subset_of(gens[j]);
    if (!subsumed) kept.push_back(gens[i]);
  }
  DownwardFamily d;
  if (!kept.empty()) d.maximal_ = std::move(kept);
  return d;
}

bool DownwardFamily::contains(InfoState s) const {
  for (auto g : maximal_)
    if (s.subset_of(g)) return true;
  return false;
}

InfoState DownwardFamily::union_all() const {
  InfoState u;
  for (auto g : maximal_) u |= g;
  return u;
}

std::vector<InfoState> DownwardFamily::members() const {
  std::vector<InfoState> out;
  for (auto g : maximal_) g.for_each_subset([&](InfoState t) { out.push_back(t); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------

EpistemicModel::EpistemicModel(Signature sig, std::vector<std::string> worlds,
                               std::vector<InfoState> valuation,
                               std::vector<std::vector<DownwardFamily>> sigma)
    : sig_(std::move(sig)), worlds_(std::move(worlds)), valuation_(std::move(valuation)),
      sigma_(std::move(sigma)) {
  if (worlds_.size() > kMaxWorlds)
    throw CapExceeded("number of worlds", worlds_.size(), kMaxWorlds);
  if (valuation_.size() != sig_.props().size())
    throw InputError("valuation does not match the propositions");
  if (sigma_.size() != sig_.agents().size())
    throw InputError("inquisitive assignment does not match the agents");
  auto sorted = worlds_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InputError("duplicate world name");
  const InfoState universe = all();
  for (auto v : valuation_)
    if (!v.subset_of(universe)) throw InputError("valuation mentions unknown worlds");
  sigma_union_.resize(sigma_.size());
  for (std::size_t a = 0; a < sigma_.size(); ++a) {
    if (sigma_[a].size() != worlds_.size())
      throw InputError("inquisitive assignment missing worlds for agent " + sig_.agents()[a]);
    for (const auto& fam : sigma_[a]) {
      if (!fam.union_all().subset_of(universe))
        throw InputError("inquisitive state mentions unknown worlds");
      sigma_union_[a].push_back(fam.union_all());
    }
  }
}

std::size_t EpistemicModel::world_index(std::string_view name) const {
  for (std::size_t i = 0; i < worlds_.size(); ++i)
    if (worlds_[i] == name) return i;
  throw UnknownIdentifier(std::string(name));
}

InfoState EpistemicModel::state_of(const std::vector<std::string>& names) const {
  InfoState s;
  for (const auto& n : names) s = s.with(world_index(n));
  return s;
}

void EpistemicModel::require_valid() const {
  if (!validated_) throw InvalidModel("model has not passed validation");
}

std::string Violation::message() const {
  std::string msg = kind + "(" + agent + "," + world;
  if (!other.empty()) msg += "," + other;
  msg += ")";
  return msg;
}

std::vector<Violation> check_frame_conditions(const EpistemicModel& m) {
  std::vector<Violation> out;
  auto names = [&](InfoState s) {
    std::vector<std::string> v;
    s.for_each([&](std::size_t w) { v.push_back(m.world_name(w)); });
    return v;
  };
  for (std::size_t a = 0; a < m.sig().agents().size(); ++a) {
    const auto& agent = m.sig().agents()[a];
    for (std::size_t w = 0; w < m.size(); ++w) {
      // Non-emptiness holds by representation (∅ is always a member); the
      // check is kept for reports built from raw input that bypassed it.
      if (m.Sigma(a, w).maximal().empty())
        out.push_back({"NonEmptinessViolation", agent, m.world_name(w), "", {}});
      InfoState sig = m.sigma(a, w);
      if (!sig.contains(w))
        out.push_back({"FactivityViolation", agent, m.world_name(w), "", names(sig)});
      sig.for_each([&](std::size_t v) {
        if (!(m.Sigma(a, v) == m.Sigma(a, w)))
          out.push_back({"IntrospectionViolation", agent, m.world_name(w), m.world_name(v), names(sig)});
      });
    }
  }
  return out;
}

EpistemicModel validate_epistemic(EpistemicModel m) {
  auto report = check_frame_conditions(m);
  if (!report.empty()) {
    std::string msg = "invalid epistemic model:";
    for (const auto& v : report) msg += " " + v.message();
    throw InvalidModel(msg);
  }
  m.validated_ = true;
  return m;
}

KripkeFrame kripke_companion(const EpistemicModel& m) {
  m.require_valid();
  std::vector<std::vector<InfoState>> parts(m.sig().agents().size());
  for (std::size_t a = 0; a < parts.size(); ++a) {
    for (std::size_t w = 0; w < m.size(); ++w) parts[a].push_back(m.sigma(a, w));
  }
  return make_frame(m.size(), m.sig().agents(), std::move(parts));
}

KripkeFrame make_frame(std::size_t worlds, std::vector<std::string> agents,
                       std::vector<std::vector<InfoState>> partitions) {
  if (partitions.size() != agents.size()) throw InputError("one partition per agent expected");
  KripkeFrame k;
  k.worlds = worlds;
  k.agents = std::move(agents);
  for (auto& p : partitions) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    std::vector<std::size_t> owner(worlds, SIZE_MAX);
    for (std::size_t c = 0; c < p.size(); ++c) {
      if (p[c].empty()) throw InputError("empty class in partition");
      bool ok = true;
      p[c].for_each([&](std::size_t w) {
        if (w >= worlds || owner[w] != SIZE_MAX) ok = false;
        else owner[w] = c;
      });
      if (!ok) throw InputError("classes overlap or mention unknown worlds");
    }
    if (std::find(owner.begin(), owner.end(), SIZE_MAX) != owner.end())
      throw InputError("partition does not cover every world");
    k.classes.push_back(std::move(p));
    k.class_of.push_back(std::move(owner));
  }
  return k;
}

} // namespace inqkit
