#pragma once

#include "inqkit/bisim.hpp"
#include "inqkit/formula.hpp"
#include "inqkit/structure.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace inqkit {

enum class FoKind { True, False, Rel, Eq, Mem, Not, And, Or, Implies, Iff, Forall, Exists, ForallSet, ExistsSet };

namespace detail {
struct FoNode;
}

// First-order (and monadic second-order) formula over named relations.
// Variables are interned names; a quantifier binds one variable of a named
// sort. Set variables range over subsets of their sort.
class FoFormula {
public:
  FoFormula() = default;

  static FoFormula truth();
  static FoFormula falsity();
  static FoFormula rel(const std::string& name, std::vector<std::string> vars);
  static FoFormula eq(const std::string& x, const std::string& y);
  static FoFormula mem(const std::string& x, const std::string& set);  // x ∈ X for a set variable X
  static FoFormula neg(FoFormula f);
  static FoFormula conj(FoFormula l, FoFormula r);
  static FoFormula disj(FoFormula l, FoFormula r);
  static FoFormula implies(FoFormula l, FoFormula r);
  static FoFormula iff(FoFormula l, FoFormula r);
  static FoFormula forall(const std::string& var, const std::string& sort, FoFormula f);
  static FoFormula exists(const std::string& var, const std::string& sort, FoFormula f);
  static FoFormula forall_set(const std::string& var, const std::string& sort, FoFormula f);
  static FoFormula exists_set(const std::string& var, const std::string& sort, FoFormula f);
  static FoFormula conj_all(const std::vector<FoFormula>& fs);
  static FoFormula disj_all(const std::vector<FoFormula>& fs);

  bool valid() const { return node_ != nullptr; }
  FoKind kind() const;
  const std::string& name() const;  // relation name or quantifier sort
  const std::vector<int>& vars() const;  // atom arguments, or {bound var} for quantifiers
  const FoFormula& lhs() const;
  const FoFormula& rhs() const;
  const std::vector<int>& free_vars() const;  // sorted
  std::size_t rank() const;  // mixed quantifier rank
  const void* id() const { return node_.get(); }

private:
  explicit FoFormula(std::shared_ptr<const detail::FoNode> n) : node_(std::move(n)) {}
  static FoFormula make(FoKind k, std::string name, std::vector<int> vars, FoFormula l, FoFormula r);
  std::shared_ptr<const detail::FoNode> node_;
};

namespace detail {
struct FoNode {
  FoKind kind;
  std::string name;
  std::vector<int> vars;
  FoFormula lhs, rhs;
  std::vector<int> free;
  std::size_t rank = 0;
};
} // namespace detail

int fo_var(const std::string& name);
const std::string& fo_var_name(int id);

std::size_t quantifier_rank(const FoFormula& f);
std::string render_fo(const FoFormula& f);
// S-expression syntax:
//   (forall (x sort) φ) (exists (x sort) φ) (forall (X set sort) φ) (exists (X set sort) φ)
//   (and φ ...) (or φ ...) (not φ) (implies φ ψ) (iff φ ψ) (= x y) (R x ...) true false
// (in x X) is set membership when X is a bound set variable, else the relation "in".
FoFormula parse_fo(const std::string& text);

// Element ids for first-order variables, bitmasks over the sort's local
// indices for set variables.
using FoEnv = std::map<int, std::uint64_t>;

inline constexpr std::size_t kDefaultSetSortCap = 16;

// Memoizing evaluator for one structure.
class FoEvaluator {
public:
  explicit FoEvaluator(const Structure& a, std::size_t set_cap = kDefaultSetSortCap);
  bool eval(const FoFormula& f, const FoEnv& env);

private:
  struct Slot {
    int var;
    std::uint64_t value;
  };
  bool run(const FoFormula& f, std::vector<Slot>& env);
  std::uint64_t lookup(const std::vector<Slot>& env, int var) const;
  std::size_t sort_of(const std::string& name) const;
  std::size_t rel_of(const FoFormula& f);
  const Structure& a_;
  std::size_t set_cap_;
  struct Key {
    const void* node;
    std::uint64_t v[4];
    bool operator==(const Key& o) const {
      return node == o.node && v[0] == o.v[0] && v[1] == o.v[1] && v[2] == o.v[2] && v[3] == o.v[3];
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = std::hash<const void*>{}(k.node);
      for (auto x : k.v) h = h * 1000003u ^ std::hash<std::uint64_t>{}(x);
      return h;
    }
  };
  std::unordered_map<Key, bool, KeyHash> memo_;
  std::unordered_map<const void*, std::size_t> rel_cache_;
  std::vector<FoFormula> keep_;
};

bool eval_fo(const Structure& a, const FoFormula& f, const FoEnv& env = {},
             std::size_t set_cap = kDefaultSetSortCap);

// Standard translation. The free variable is "w_0" (sort world) for the
// world target and "s_0" (sort state) for the state target. Valid over
// locally full encodings.
enum class Target { world, state };

class Translator {
public:
  explicit Translator(Signature sig) : sig_(std::move(sig)) {}
  FoFormula translate(const Formula& f, Target t, std::size_t depth = 0);
  static std::string free_var(Target t, std::size_t depth = 0);

private:
  FoFormula world_clause(const Formula& f, std::size_t k);
  FoFormula state_clause(const Formula& f, std::size_t k);
  Signature sig_;
  std::map<std::tuple<const void*, int, std::size_t>, FoFormula> cache_;
  std::vector<Formula> keep_;
};

FoFormula standard_translation(const Formula& f, const Signature& sig, Target t);

// ---------------------------------------------------------------------------
// Games

struct EfResult {
  bool holds = false;
  std::vector<Move> witness;
};

// n-round pebble game on (A, ā) and (B, b̄).
EfResult ef_fo(const Structure& a, const std::vector<std::size_t>& abar, const Structure& b,
               const std::vector<std::size_t>& bbar, std::size_t n);

inline constexpr std::size_t kDefaultMsoCap = 6;

// n-round MSO game on single-sorted structures with set parameters P̄ (masks
// over the elements) and element parameters ā.
EfResult ef_mso(const Structure& a, const std::vector<std::uint64_t>& P, const std::vector<std::size_t>& abar,
                const Structure& b, const std::vector<std::uint64_t>& Q, const std::vector<std::size_t>& bbar,
                std::size_t n, std::size_t cap = kDefaultMsoCap);

// Coloured set: colour id per element.
struct ColouredSet {
  std::vector<std::size_t> colour;
};

bool eq_cutoff(std::size_t x, std::size_t y, std::size_t d);
bool threshold_equiv(const ColouredSet& a, const std::vector<std::uint64_t>& P, const ColouredSet& b,
                     const std::vector<std::uint64_t>& Q, std::size_t d);
// Single-sorted structure with unary predicates C_<k> for the colours.
Structure coloured_structure(const ColouredSet& c, std::size_t colours);

// Gaifman distance over co-occurrence in tuples of any relation.
std::vector<std::size_t> gaifman_distances(const Structure& a, std::size_t b);
// Induced ℓ-ball around b; b becomes the point "center".
Structure gaifman_neighborhood(const Structure& a, std::size_t b, std::size_t ell);
EfResult local_equiv(const Structure& a, std::size_t b, const Structure& a2, std::size_t b2, std::size_t ell,
                     std::size_t r);

} // namespace inqkit
