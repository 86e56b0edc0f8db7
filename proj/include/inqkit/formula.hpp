#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace inqkit {

// Agents and propositions, each kept in lexicographic order so that
// indices are canonical.
class Signature {
public:
  Signature() = default;
  Signature(std::vector<std::string> agents, std::vector<std::string> props);

  const std::vector<std::string>& agents() const { return agents_; }
  const std::vector<std::string>& props() const { return props_; }

  // Throws UnknownIdentifier.
  std::size_t agent_index(std::string_view name) const;
  std::size_t prop_index(std::string_view name) const;
  bool has_agent(std::string_view name) const;
  bool has_prop(std::string_view name) const;

  bool operator==(const Signature&) const = default;

private:
  std::vector<std::string> agents_;
  std::vector<std::string> props_;
};

// Core kinds first; the sugar kinds only appear before desugaring.
enum class Kind { Atom, Bottom, And, Implies, IDisj, Box, WBox, Not, Or, Question };

bool is_sugar(Kind k);

class Formula;

namespace detail {
struct FormulaNode;
}

// Immutable formula AST. Copies share structure; subformulas may be shared
// between formulas (the AST is a DAG).
class Formula {
public:
  Formula() = default;

  static Formula atom(std::size_t prop);
  static Formula bottom();
  static Formula top();  // bot -> bot
  static Formula conj(Formula l, Formula r);
  static Formula implies(Formula l, Formula r);
  static Formula idisj(Formula l, Formula r);
  static Formula box(std::size_t agent, Formula f);
  static Formula wbox(std::size_t agent, Formula f);
  static Formula neg(Formula f);
  static Formula disj(Formula l, Formula r);
  static Formula question(Formula f);

  // Folds; the empty conjunction is top, the empty disjunctions are bot.
  static Formula conj_all(const std::vector<Formula>& fs);
  static Formula idisj_all(const std::vector<Formula>& fs);
  // Classical disjunction, desugared: !(!f1 & ... & !fn).
  static Formula classical_disj_all(const std::vector<Formula>& fs);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  std::size_t index() const;  // prop index for Atom, agent index for modalities
  const Formula& lhs() const;  // sole child of unary kinds
  const Formula& rhs() const;
  std::size_t node_count() const;
  std::size_t hash() const;
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

private:
  explicit Formula(std::shared_ptr<const detail::FormulaNode> n) : node_(std::move(n)) {}
  static Formula make(Kind k, std::size_t index, Formula l, Formula r);
  std::shared_ptr<const detail::FormulaNode> node_;
};

namespace detail {
struct FormulaNode {
  Kind kind;
  std::size_t index = 0;
  Formula lhs, rhs;
  std::size_t nodes = 1;
  std::size_t hash = 0;
};
} // namespace detail

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Grammar:
//   form  := impl
//   impl  := idisj ("->" impl)?
//   idisj := conj (("\/" | "||") conj)*
//   conj  := unary ("&" unary)*
//   unary := "!" unary | "?" unary | "[" id "]" unary | "[+" id "]" unary | atom
//   atom  := id | "bot" | "(" form ")"
Formula parse(std::string_view text, const Signature& sig);
std::string render(const Formula& f, const Signature& sig);

Formula desugar(const Formula& f);
std::size_t modal_depth(const Formula& f);
bool contains_sugar(const Formula& f);
bool syntactically_truth_conditional(const Formula& f);

inline constexpr std::size_t kDefaultEnumerationCap = 2'000'000;

// All core-kind formulas with at most `max_nodes` nodes and modal depth at
// most `max_modal_depth`, ordered by (node count, structural order).
// Throws CapExceeded with the would-be count.
std::vector<Formula> enumerate_formulas(const Signature& sig, std::size_t max_modal_depth,
                                        std::size_t max_nodes,
                                        std::size_t cap = kDefaultEnumerationCap);

// Number of formulas enumerate_formulas would return, computed by dynamic
// programming over (nodes, depth) without materializing anything.
unsigned long long count_formulas(const Signature& sig, std::size_t max_modal_depth,
                                  std::size_t max_nodes);

} // namespace inqkit
