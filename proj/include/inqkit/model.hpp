#pragma once

#include "inqkit/formula.hpp"
#include "inqkit/info_state.hpp"

#include <map>
#include <optional>
#include <unordered_map>
#include <string>
#include <vector>

namespace inqkit {

// A downward-closed family of states, stored by its maximal elements.
// The empty state is always a member and is never stored unless it is the
// only member (then the antichain is {∅}).
class DownwardFamily {
public:
  DownwardFamily() : maximal_{InfoState{}} {}
  // Drops subsumed generators and sorts canonically.
  static DownwardFamily from_generators(std::vector<InfoState> gens);

  const std::vector<InfoState>& maximal() const { return maximal_; }
  bool contains(InfoState s) const;
  InfoState union_all() const;
  // Every member, each exactly once, canonically ordered.
  std::vector<InfoState> members() const;

  bool operator==(const DownwardFamily&) const = default;

private:
  std::vector<InfoState> maximal_;
};

class EpistemicModel {
public:
  EpistemicModel() = default;
  // Unchecked; call validate_epistemic before use elsewhere.
  EpistemicModel(Signature sig, std::vector<std::string> worlds, std::vector<InfoState> valuation,
                 std::vector<std::vector<DownwardFamily>> sigma);

  const Signature& sig() const { return sig_; }
  std::size_t size() const { return worlds_.size(); }
  InfoState all() const { return InfoState::full(worlds_.size()); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::string& world_name(std::size_t w) const { return worlds_.at(w); }
  std::size_t world_index(std::string_view name) const;  // throws UnknownIdentifier
  InfoState state_of(const std::vector<std::string>& names) const;

  InfoState valuation(std::size_t p) const { return valuation_.at(p); }
  const std::vector<InfoState>& valuations() const { return valuation_; }
  const DownwardFamily& Sigma(std::size_t a, std::size_t w) const { return sigma_.at(a).at(w); }
  InfoState sigma(std::size_t a, std::size_t w) const { return sigma_union_.at(a).at(w); }

  bool validated() const { return validated_; }
  // Throws InvalidModel unless validated.
  void require_valid() const;

private:
  friend EpistemicModel validate_epistemic(EpistemicModel m);
  Signature sig_;
  std::vector<std::string> worlds_;
  std::vector<InfoState> valuation_;
  std::vector<std::vector<DownwardFamily>> sigma_;
  std::vector<std::vector<InfoState>> sigma_union_;
  bool validated_ = false;
};

struct Violation {
  std::string kind;  // NonEmptinessViolation, FactivityViolation, IntrospectionViolation
  std::string agent;
  std::string world;
  std::string other;  // the v of an introspection violation
  std::vector<std::string> state;
  std::string message() const;
};

std::vector<Violation> check_frame_conditions(const EpistemicModel& m);
// Returns the model flagged as validated, or throws InvalidModel listing
// every violation.
EpistemicModel validate_epistemic(EpistemicModel m);

struct KripkeFrame {
  std::size_t worlds = 0;
  std::vector<std::string> agents;
  std::vector<std::vector<InfoState>> classes;  // per agent, canonical order
  std::vector<std::vector<std::size_t>> class_of;  // [agent][world] -> index into classes
  InfoState cls(std::size_t a, std::size_t w) const { return classes[a][class_of[a][w]]; }
};

KripkeFrame kripke_companion(const EpistemicModel& m);
// Builds a frame straight from partitions; throws InputError unless every
// agent's classes partition the worlds.
KripkeFrame make_frame(std::size_t worlds, std::vector<std::string> agents,
                       std::vector<std::vector<InfoState>> partitions);

// Support semantics.
inline constexpr std::size_t kDefaultSupportCap = 24;

bool supports(const EpistemicModel& m, InfoState s, const Formula& f);
bool truth(const EpistemicModel& m, std::size_t w, const Formula& f);
DownwardFamily support_set(const EpistemicModel& m, const Formula& f, std::size_t cap = 16);
bool semantically_truth_conditional(const EpistemicModel& m, const Formula& f, std::size_t cap = 16);

// Memoizing evaluator, reusable across formulas that share subterms.
class SupportEvaluator {
public:
  explicit SupportEvaluator(const EpistemicModel& m, std::size_t cap = kDefaultSupportCap);
  bool supports(InfoState s, const Formula& f);
  bool truth(std::size_t w, const Formula& f) { return supports(InfoState::singleton(w), f); }

private:
  struct Key {
    const void* node;
    std::uint64_t bits;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<const void*>{}(k.node) * 31 + std::hash<std::uint64_t>{}(k.bits);
    }
  };
  bool eval(InfoState s, const Formula& f);
  const EpistemicModel& m_;
  std::unordered_map<Key, bool, KeyHash> memo_;
  std::vector<Formula> keep_;  // pins desugared formulas so node ids stay unique
};

} // namespace inqkit
