#pragma once

#include "inqkit/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace inqkit {

// Game depth; kInfinity stands for the unbounded game.
inline constexpr std::size_t kInfinity = SIZE_MAX;

struct Colouring {
  std::size_t level = 0;  // requested level; kInfinity allowed
  std::vector<std::size_t> colour;  // per world of the (possibly united) domain
  std::size_t count = 0;
};

// One move of a game trace. Positions are rendered as strings so traces can
// be printed without the models at hand.
struct Move {
  std::string mover;  // "I" or "II"
  std::string choice;
};

struct GameResult {
  bool holds = false;
  std::vector<Move> witness;  // a winning play for I when !holds
};

// Level colourings of one model or of the disjoint union of two models with
// the same signature. Worlds of the second model are offset by the size of
// the first.
class BisimSolver {
public:
  explicit BisimSolver(const EpistemicModel& m);
  BisimSolver(const EpistemicModel& m1, const EpistemicModel& m2);

  std::size_t size() const { return atoms_.size(); }
  std::size_t offset() const { return n1_; }

  // Colour vector at the given level (kInfinity: the fixpoint).
  const std::vector<std::size_t>& level(std::size_t n);
  std::size_t colour_count(std::size_t n);
  // Level at which the refinement stabilizes.
  std::size_t stable_level();

  bool worlds(std::size_t u, std::size_t v, std::size_t n) { return level(n)[u] == level(n)[v]; }
  // Every world of s matches some world of t at level n and vice versa.
  bool states(InfoState s, InfoState t, std::size_t n);

  // Game with witness; u, v and s, t are indices into the united domain.
  GameResult world_game(std::size_t u, std::size_t v, std::size_t n);
  GameResult state_game(InfoState s, InfoState t, std::size_t n);

  // Colour set of a state at level n, as a bitmask over colour ids.
  std::uint64_t colour_set(InfoState s, std::size_t n);
  // Maximal colour sets of the generators of Σ_a(w) at level n.
  std::vector<std::uint64_t> profile(std::size_t a, std::size_t w, std::size_t n);

  std::string world_label(std::size_t u) const;
  std::string state_label(InfoState s) const;
  const std::vector<InfoState>& generators(std::size_t a, std::size_t w) const { return gens_[a][w]; }
  std::size_t agents() const { return gens_.size(); }

private:
  void add_model(const EpistemicModel& m, std::size_t offset, const std::string& tag);
  void refine_once();
  void play(std::size_t u, std::size_t v, std::size_t n, std::vector<Move>& out);

  const Signature* sig_ = nullptr;
  std::size_t n1_ = 0;
  std::vector<std::uint64_t> atoms_;  // proposition bits per world
  std::vector<std::vector<std::vector<InfoState>>> gens_;  // [agent][world] maximal generators
  std::vector<std::string> labels_;
  std::vector<std::vector<std::size_t>> levels_;
  bool stable_ = false;
};

bool bisim_check(const EpistemicModel& m, std::size_t w, const EpistemicModel& m2, std::size_t w2,
                 std::size_t depth);
bool bisim_check(const EpistemicModel& m, InfoState s, const EpistemicModel& m2, InfoState s2,
                 std::size_t depth);
GameResult bisim_game(const EpistemicModel& m, std::size_t w, const EpistemicModel& m2, std::size_t w2,
                      std::size_t depth);
GameResult bisim_game(const EpistemicModel& m, InfoState s, const EpistemicModel& m2, InfoState s2,
                      std::size_t depth);

Colouring bisim_partition(const EpistemicModel& m, std::size_t n);
Colouring bisim_partition(const EpistemicModel& m1, const EpistemicModel& m2, std::size_t n);

// Characteristic formulas, desugared. Throws CapExceeded when the formula,
// counted as a tree, would exceed `cap` nodes.
inline constexpr std::size_t kDefaultCharFormulaCap = std::size_t{1} << 40;

Formula char_formula(const EpistemicModel& m, std::size_t w, std::size_t n,
                     std::size_t cap = kDefaultCharFormulaCap);
Formula char_formula(const EpistemicModel& m, InfoState s, std::size_t n,
                     std::size_t cap = kDefaultCharFormulaCap);

// Reusable builder; shares subformulas between calls.
class CharFormulaBuilder {
public:
  explicit CharFormulaBuilder(const EpistemicModel& m);
  Formula world(std::size_t w, std::size_t n);
  Formula state(InfoState s, std::size_t n);

private:
  Formula of_colour(std::size_t c, std::size_t n);
  Formula of_colours(std::uint64_t colours, std::size_t n);
  const EpistemicModel& m_;
  BisimSolver solver_;
  std::vector<std::vector<Formula>> cache_;  // [level][colour]
};

} // namespace inqkit
