#include "inqkit/error.hpp"
#include "inqkit/model.hpp"

namespace inqkit {

SupportEvaluator::SupportEvaluator(const EpistemicModel& m, std::size_t cap) : m_(m) {
  if (m.size() > cap) throw CapExceeded("support evaluation: number of worlds", m.size(), cap);
}

bool SupportEvaluator::supports(InfoState s, const Formula& f) {
  Formula core = contains_sugar(f) ? desugar(f) : f;
  keep_.push_back(core);
  return eval(s, core);
}

bool SupportEvaluator::eval(InfoState s, const Formula& f) {
  switch (f.kind()) {
  case Kind::Atom: return s.subset_of(m_.valuation(f.index()));
  case Kind::Bottom: return s.empty();
  default: break;
  }
  if (s.empty()) return true;
  const Key key{f.id(), s.bits()};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  bool r = true;
  switch (f.kind()) {
  case Kind::And: r = eval(s, f.lhs()) && eval(s, f.rhs()); break;
  case Kind::IDisj: r = eval(s, f.lhs()) || eval(s, f.rhs()); break;
  case Kind::Implies: {
    std::uint64_t sub = s.bits();
    while (true) {
      InfoState t(sub);
      if (eval(t, f.lhs()) && !eval(t, f.rhs())) {
        r = false;
        break;
      }
      if (sub == 0) break;
      sub = (sub - 1) & s.bits();
    }
    break;
  }
  case Kind::Box:
    for (std::uint64_t b = s.bits(); b != 0 && r; b &= b - 1) {
      auto w = static_cast<std::size_t>(std::countr_zero(b));
      r = eval(m_.sigma(f.index(), w), f.lhs());
    }
    break;
  case Kind::WBox:
    for (std::uint64_t b = s.bits(); b != 0 && r; b &= b - 1) {
      auto w = static_cast<std::size_t>(std::countr_zero(b));
      for (auto t : m_.Sigma(f.index(), w).members())
        if (!eval(t, f.lhs())) {
          r = false;
          break;
        }
    }
    break;
  default: throw InputError("support evaluation expects a desugared formula");
  }
  memo_.emplace(key, r);
  return r;
}

bool supports(const EpistemicModel& m, InfoState s, const Formula& f) {
  return SupportEvaluator(m).supports(s, f);
}

bool truth(const EpistemicModel& m, std::size_t w, const Formula& f) {
  return SupportEvaluator(m).truth(w, f);
}

DownwardFamily support_set(const EpistemicModel& m, const Formula& f, std::size_t cap) {
  if (m.size() > cap) throw CapExceeded("support set: number of worlds", m.size(), cap);
  SupportEvaluator ev(m, cap);
  std::vector<InfoState> yes;
  m.all().for_each_subset([&](InfoState s) {
    if (ev.supports(s, f)) yes.push_back(s);
  });
  auto fam = DownwardFamily::from_generators(yes);
  // Persistency makes the family downward closed; assert it.
  if (fam.members().size() != yes.size())
    throw PostVerificationFailure("support set is not downward closed");
  return fam;
}

bool semantically_truth_conditional(const EpistemicModel& m, const Formula& f, std::size_t cap) {
  if (m.size() > cap) throw CapExceeded("truth-conditionality: number of worlds", m.size(), cap);
  SupportEvaluator ev(m, cap);
  std::uint64_t true_at = 0;
  for (std::size_t w = 0; w < m.size(); ++w)
    if (ev.truth(w, f)) true_at |= std::uint64_t{1} << w;
  bool ok = true;
  m.all().for_each_subset([&](InfoState s) {
    if (ok && ev.supports(s, f) != s.subset_of(InfoState(true_at))) ok = false;
  });
  return ok;
}

} // namespace inqkit
