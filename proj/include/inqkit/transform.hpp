#pragma once

#include "inqkit/bisim.hpp"
#include "inqkit/fo.hpp"
#include "inqkit/model.hpp"
#include "inqkit/relational.hpp"
#include "inqkit/structure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace inqkit {

// World names of the second model get `suffix` appended; names of the first
// are kept. Throws InputError if the result would still clash.
EpistemicModel disjoint_union(const EpistemicModel& m1, const EpistemicModel& m2,
                              const std::string& suffix = "'");

// ---------------------------------------------------------------------------
// Coverings and richness

struct Covering {
  EpistemicModel source;
  EpistemicModel target;
  std::vector<std::size_t> pi;  // source world -> target world
};

struct CoveringReport {
  bool ok = true;
  std::string failure;  // first failing condition
  std::string witness;
};

// Worlds "w:i" for i = 1..K; generators are full preimages.
Covering rich_cover(const EpistemicModel& m, std::size_t K);
CoveringReport verify_covering(const Covering& c);

// Equivalent to the definition: every maximal generator realizes each of its
// ∼-types at least K times.
bool is_k_rich(const EpistemicModel& m, std::size_t K);

// ---------------------------------------------------------------------------
// Dummy agent and exploded views

inline constexpr const char* kDummyAgent = "@s";

EpistemicModel dummy_agent_expand(const EpistemicModel& m, InfoState s, const std::string& agent = kDummyAgent);

// Exploded view. First sort "world": core worlds by name, copies "u@a".
// Second sort "state": per agent class with index k, states "a#k:{...}".
// Relations: R_<a> on the core, RI from core worlds to their copies, A_<a>
// marking a-copies, and per class the full encoding with E_<a>, in, P_<p>.
struct ExplodedView {
  Structure structure;
  std::optional<std::size_t> point;  // core world or the dummy agent's maximal state
};

inline constexpr std::size_t kDefaultClassCap = 12;

ExplodedView exploded_view(const EpistemicModel& m, std::optional<std::size_t> world = std::nullopt,
                           std::size_t class_cap = kDefaultClassCap);
ExplodedView exploded_view(const EpistemicModel& m, InfoState state, std::size_t class_cap = kDefaultClassCap);

// Uses the relations only; throws InputError on malformed views.
RelationalModel recover_from_exploded(const Structure& x);

// ---------------------------------------------------------------------------
// Acyclicity

bool is_n_acyclic(const KripkeFrame& frame, std::size_t N);

// m(u) = ℓ - d(w,u) + 1, clamped at 0, with d the frame distance from w.
std::vector<std::size_t> granularity_schedule(const KripkeFrame& frame, std::size_t w, std::size_t ell);

// ---------------------------------------------------------------------------
// Local structures and regularity

struct LocalStructure {
  std::size_t agent = 0;
  InfoState cls;  // in the ambient model
  std::vector<std::size_t> worlds;  // ambient world ids, ascending
  EpistemicModel model;  // mono-modal restriction, worlds renamed to ambient names
  std::size_t level = 0;
  std::vector<std::size_t> colour;  // ρ_m of the ambient model, per local world
};

LocalStructure local_structure(const EpistemicModel& m, std::size_t w, std::size_t a, std::size_t level);

// Blocks of cells; cells are ambient-model states.
struct BlockDecomposition {
  std::vector<std::vector<InfoState>> blocks;
  InfoState block(std::size_t i) const;
};

struct RegularityReport {
  bool ok = true;
  std::string failure;
};

RegularityReport check_kappa_regular(const LocalStructure& l, std::size_t kappa, const BlockDecomposition& d);
bool is_kappa_regular(const LocalStructure& l, std::size_t kappa, const BlockDecomposition& d);

struct ClassDecomposition {
  std::size_t agent;
  InfoState cls;
  std::size_t level;
  BlockDecomposition decomposition;
};

struct RegularizeResult {
  EpistemicModel model;
  std::vector<ClassDecomposition> classes;
};

// Granularity per world; a class uses the minimum over its worlds.
RegularizeResult regularize(const EpistemicModel& m, std::size_t kappa, const std::vector<std::size_t>& granularity,
                            std::size_t K);

// b_m structure: sort "element", unary C_<k> for the colours, binary B, and
// unary P_{i,j,...} per colour combination.
Structure b_structure(const LocalStructure& l, std::size_t kappa, const BlockDecomposition& d);
// ∃X (S ⊆ X ∧ ∀x∀y((Xx ∧ Xy) → Bxy) ∧ ⋁_α X ⊆ P_α), free set variable "S".
FoFormula b_membership_formula(const Structure& b);

} // namespace inqkit
