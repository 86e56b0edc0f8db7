#pragma once
// Support semantics straight from the clauses: no memo, no desugaring.

#include "inqkit/model.hpp"

namespace oracle {

using namespace inqkit;

inline bool naive_supports(const EpistemicModel& m, InfoState s, const Formula& f);

inline bool no_nonempty_support(const EpistemicModel& m, InfoState s, const Formula& f) {
  bool none = true;
  s.for_each_subset([&](InfoState t) {
    if (none && !t.empty() && naive_supports(m, t, f)) none = false;
  });
  return none;
}

inline bool naive_supports(const EpistemicModel& m, InfoState s, const Formula& f) {
  switch (f.kind()) {
  case Kind::Atom: return s.subset_of(m.valuation(f.index()));
  case Kind::Bottom: return s.empty();
  case Kind::And: return naive_supports(m, s, f.lhs()) && naive_supports(m, s, f.rhs());
  case Kind::IDisj: return naive_supports(m, s, f.lhs()) || naive_supports(m, s, f.rhs());
  case Kind::Implies: {
    bool ok = true;
    s.for_each_subset([&](InfoState t) {
      if (ok && naive_supports(m, t, f.lhs()) && !naive_supports(m, t, f.rhs())) ok = false;
    });
    return ok;
  }
  case Kind::Box: {
    bool ok = true;
    s.for_each([&](std::size_t w) { ok = ok && naive_supports(m, m.sigma(f.index(), w), f.lhs()); });
    return ok;
  }
  case Kind::WBox: {
    bool ok = true;
    s.for_each([&](std::size_t w) {
      for (auto t : m.Sigma(f.index(), w).members()) ok = ok && naive_supports(m, t, f.lhs());
    });
    return ok;
  }
  case Kind::Not: return no_nonempty_support(m, s, f.lhs());
  case Kind::Or: {
    // no nonempty t ⊆ s supports both negations
    bool ok = true;
    s.for_each_subset([&](InfoState t) {
      if (ok && !t.empty() && no_nonempty_support(m, t, f.lhs()) && no_nonempty_support(m, t, f.rhs())) ok = false;
    });
    return ok;
  }
  case Kind::Question: return naive_supports(m, s, f.lhs()) || no_nonempty_support(m, s, f.lhs());
  }
  return false;
}

inline bool naive_truth(const EpistemicModel& m, std::size_t w, const Formula& f) {
  return naive_supports(m, InfoState::singleton(w), f);
}

} // namespace oracle
