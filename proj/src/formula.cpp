#include "inqkit/formula.hpp"

#include "inqkit/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>

namespace inqkit {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v, const char* what) {
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end())
    throw InputError(std::string("duplicate ") + what + " name");
  return v;
}

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

} // namespace

Signature::Signature(std::vector<std::string> agents, std::vector<std::string> props)
    : agents_(sorted_unique(std::move(agents), "agent")),
      props_(sorted_unique(std::move(props), "proposition")) {}

std::size_t Signature::agent_index(std::string_view name) const {
  auto it = std::lower_bound(agents_.begin(), agents_.end(), name);
  if (it == agents_.end() || *it != name) throw UnknownIdentifier(std::string(name));
  return static_cast<std::size_t>(it - agents_.begin());
}

std::size_t Signature::prop_index(std::string_view name) const {
  auto it = std::lower_bound(props_.begin(), props_.end(), name);
  if (it == props_.end() || *it != name) throw UnknownIdentifier(std::string(name));
  return static_cast<std::size_t>(it - props_.begin());
}

bool Signature::has_agent(std::string_view name) const {
  return std::binary_search(agents_.begin(), agents_.end(), name);
}

bool Signature::has_prop(std::string_view name) const {
  return std::binary_search(props_.begin(), props_.end(), name);
}

bool is_sugar(Kind k) { return k == Kind::Not || k == Kind::Or || k == Kind::Question; }

// ---------------------------------------------------------------------------

Formula Formula::make(Kind k, std::size_t index, Formula l, Formula r) {
  auto n = std::make_shared<detail::FormulaNode>();
  n->kind = k;
  n->index = index;
  std::size_t h = mix(static_cast<std::size_t>(k) + 1, index);
  // Node counts saturate; shared DAGs can denote huge trees.
  auto add = [](std::size_t a, std::size_t b) { return a > SIZE_MAX - b ? SIZE_MAX : a + b; };
  if (l.valid()) {
    n->nodes = add(n->nodes, l.node_count());
    h = mix(h, l.hash());
  }
  if (r.valid()) {
    n->nodes = add(n->nodes, r.node_count());
    h = mix(h, r.hash());
  }
  n->hash = h;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return Formula(std::move(n));
}

Formula Formula::atom(std::size_t prop) { return make(Kind::Atom, prop, {}, {}); }
Formula Formula::bottom() { return make(Kind::Bottom, 0, {}, {}); }
Formula Formula::top() { return implies(bottom(), bottom()); }
Formula Formula::conj(Formula l, Formula r) { return make(Kind::And, 0, std::move(l), std::move(r)); }
Formula Formula::implies(Formula l, Formula r) {
  return make(Kind::Implies, 0, std::move(l), std::move(r));
}
Formula Formula::idisj(Formula l, Formula r) { return make(Kind::IDisj, 0, std::move(l), std::move(r)); }
Formula Formula::box(std::size_t a, Formula f) { return make(Kind::Box, a, std::move(f), {}); }
Formula Formula::wbox(std::size_t a, Formula f) { return make(Kind::WBox, a, std::move(f), {}); }
Formula Formula::neg(Formula f) { return make(Kind::Not, 0, std::move(f), {}); }
Formula Formula::disj(Formula l, Formula r) { return make(Kind::Or, 0, std::move(l), std::move(r)); }
Formula Formula::question(Formula f) { return make(Kind::Question, 0, std::move(f), {}); }

Formula Formula::conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

Formula Formula::idisj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bottom();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = idisj(acc, fs[i]);
  return acc;
}

Formula Formula::classical_disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bottom();
  if (fs.size() == 1) return fs.front();
  std::vector<Formula> negs;
  negs.reserve(fs.size());
  for (const auto& f : fs) negs.push_back(implies(f, bottom()));
  return implies(conj_all(negs), bottom());
}

Kind Formula::kind() const { return node_->kind; }
std::size_t Formula::index() const { return node_->index; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }
std::size_t Formula::node_count() const { return node_->nodes; }
std::size_t Formula::hash() const { return node_->hash; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.valid() || !b.valid()) return false;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.index() != b.index() ||
      a.node_count() != b.node_count())
    return false;
  return a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.valid()) return std::strong_ordering::less;
  if (!b.valid()) return std::strong_ordering::greater;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.index() <=> b.index(); c != 0) return c;
  if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
  return a.rhs() <=> b.rhs();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
  Parser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Formula parse_all() {
    Formula f = parse_impl();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
    }
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  Formula parse_impl() {
    Formula l = parse_idisj();
    if (accept("->")) return Formula::implies(l, parse_impl());
    return l;
  }

  Formula parse_idisj() {
    Formula acc = parse_conj();
    while (true) {
      if (accept("\\/")) acc = Formula::idisj(acc, parse_conj());
      else if (accept("||")) acc = Formula::disj(acc, parse_conj());
      else return acc;
    }
  }

  Formula parse_conj() {
    Formula acc = parse_unary();
    while (accept("&")) acc = Formula::conj(acc, parse_unary());
    return acc;
  }

  Formula parse_unary() {
    if (accept("!")) return Formula::neg(parse_unary());
    if (accept("?")) return Formula::question(parse_unary());
    if (accept("[+")) {
      std::size_t at = pos_;
      std::string a = ident();
      if (!accept("]")) fail("expected ']'");
      return Formula::wbox(agent(a, at), parse_unary());
    }
    if (accept("[")) {
      std::size_t at = pos_;
      std::string a = ident();
      if (!accept("]")) fail("expected ']'");
      return Formula::box(agent(a, at), parse_unary());
    }
    return parse_atom();
  }

  std::size_t agent(const std::string& name, std::size_t) const {
    return sig_.agent_index(name);
  }

  Formula parse_atom() {
    if (accept("(")) {
      Formula f = parse_impl();
      if (!accept(")")) fail("expected ')'");
      return f;
    }
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    std::string id = ident();
    if (id == "bot") return Formula::bottom();
    return Formula::atom(sig_.prop_index(id));
  }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

// Binding strength: implication 1, disjunctions 2, conjunction 3, unary 4.
int precedence(Kind k) {
  switch (k) {
  case Kind::Implies: return 1;
  case Kind::IDisj:
  case Kind::Or: return 2;
  case Kind::And: return 3;
  default: return 4;
  }
}

void render_into(const Formula& f, const Signature& sig, std::string& out, int min_prec) {
  const int p = precedence(f.kind());
  const bool parens = p < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
  case Kind::Atom: out += sig.props().at(f.index()); break;
  case Kind::Bottom: out += "bot"; break;
  case Kind::And:
    render_into(f.lhs(), sig, out, 3);
    out += " & ";
    render_into(f.rhs(), sig, out, 4);
    break;
  case Kind::IDisj:
  case Kind::Or:
    render_into(f.lhs(), sig, out, 2);
    out += f.kind() == Kind::IDisj ? " \\/ " : " || ";
    render_into(f.rhs(), sig, out, 3);
    break;
  case Kind::Implies:
    render_into(f.lhs(), sig, out, 2);
    out += " -> ";
    render_into(f.rhs(), sig, out, 1);
    break;
  case Kind::Box:
    out += "[" + sig.agents().at(f.index()) + "]";
    render_into(f.lhs(), sig, out, 4);
    break;
  case Kind::WBox:
    out += "[+" + sig.agents().at(f.index()) + "]";
    render_into(f.lhs(), sig, out, 4);
    break;
  case Kind::Not:
    out += '!';
    render_into(f.lhs(), sig, out, 4);
    break;
  case Kind::Question:
    out += '?';
    render_into(f.lhs(), sig, out, 4);
    break;
  }
  if (parens) out += ')';
}

} // namespace

Formula parse(std::string_view text, const Signature& sig) { return Parser(text, sig).parse_all(); }

std::string render(const Formula& f, const Signature& sig) {
  std::string out;
  render_into(f, sig, out, 0);
  return out;
}

// ---------------------------------------------------------------------------

Formula desugar(const Formula& f) {
  switch (f.kind()) {
  case Kind::Atom:
  case Kind::Bottom: return f;
  case Kind::And: return Formula::conj(desugar(f.lhs()), desugar(f.rhs()));
  case Kind::Implies: return Formula::implies(desugar(f.lhs()), desugar(f.rhs()));
  case Kind::IDisj: return Formula::idisj(desugar(f.lhs()), desugar(f.rhs()));
  case Kind::Box: return Formula::box(f.index(), desugar(f.lhs()));
  case Kind::WBox: return Formula::wbox(f.index(), desugar(f.lhs()));
  case Kind::Not: return Formula::implies(desugar(f.lhs()), Formula::bottom());
  case Kind::Or: {
    auto nl = Formula::implies(desugar(f.lhs()), Formula::bottom());
    auto nr = Formula::implies(desugar(f.rhs()), Formula::bottom());
    return Formula::implies(Formula::conj(nl, nr), Formula::bottom());
  }
  case Kind::Question: {
    auto d = desugar(f.lhs());
    return Formula::idisj(d, Formula::implies(d, Formula::bottom()));
  }
  }
  return f;
}

std::size_t modal_depth(const Formula& f) {
  switch (f.kind()) {
  case Kind::Atom:
  case Kind::Bottom: return 0;
  case Kind::Box:
  case Kind::WBox: return 1 + modal_depth(f.lhs());
  case Kind::Not:
  case Kind::Question: return modal_depth(f.lhs());
  default: return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
  }
}

bool contains_sugar(const Formula& f) {
  if (is_sugar(f.kind())) return true;
  if (f.lhs().valid() && contains_sugar(f.lhs())) return true;
  return f.rhs().valid() && contains_sugar(f.rhs());
}

bool syntactically_truth_conditional(const Formula& f) {
  switch (f.kind()) {
  case Kind::Atom:
  case Kind::Bottom:
  case Kind::Box:
  case Kind::WBox: return true;
  case Kind::IDisj:
  case Kind::Question: return false;
  case Kind::Not: return syntactically_truth_conditional(f.lhs());
  default: return syntactically_truth_conditional(f.lhs()) && syntactically_truth_conditional(f.rhs());
  }
}

// ---------------------------------------------------------------------------
// Enumeration

unsigned long long count_formulas(const Signature& sig, std::size_t max_depth, std::size_t max_nodes) {
  // exact[n][d]: formulas with exactly n nodes and modal depth exactly d.
  const unsigned long long leaves = sig.props().size() + 1;
  const unsigned long long modal = 2 * sig.agents().size();
  std::vector<std::vector<unsigned long long>> exact(max_nodes + 1,
                                                     std::vector<unsigned long long>(max_depth + 1, 0));
  auto sat_add = [](unsigned long long a, unsigned long long b) {
    return a > ~0ULL - b ? ~0ULL : a + b;
  };
  auto sat_mul = [](unsigned long long a, unsigned long long b) {
    if (a == 0 || b == 0) return 0ULL;
    return a > ~0ULL / b ? ~0ULL : a * b;
  };
  if (max_nodes >= 1) exact[1][0] = leaves;
  for (std::size_t n = 2; n <= max_nodes; ++n) {
    for (std::size_t d = 1; d <= max_depth; ++d) exact[n][d] = sat_mul(modal, exact[n - 1][d - 1]);
    for (std::size_t l = 1; l + 1 < n; ++l) {
      std::size_t r = n - 1 - l;
      for (std::size_t dl = 0; dl <= max_depth; ++dl)
        for (std::size_t dr = 0; dr <= max_depth; ++dr)
          exact[n][std::max(dl, dr)] =
              sat_add(exact[n][std::max(dl, dr)], sat_mul(3, sat_mul(exact[l][dl], exact[r][dr])));
    }
  }
  unsigned long long total = 0;
  for (std::size_t n = 1; n <= max_nodes; ++n)
    for (std::size_t d = 0; d <= max_depth; ++d) total = sat_add(total, exact[n][d]);
  return total;
}

std::vector<Formula> enumerate_formulas(const Signature& sig, std::size_t max_depth, std::size_t max_nodes,
                                        std::size_t cap) {
  const auto total = count_formulas(sig, max_depth, max_nodes);
  if (total > cap) throw CapExceeded("formula enumeration", total, cap);

  // by_size[n][d]: formulas with exactly n nodes and depth exactly d.
  std::vector<std::vector<std::vector<Formula>>> by_size(
      max_nodes + 1, std::vector<std::vector<Formula>>(max_depth + 1));
  if (max_nodes >= 1) {
    for (std::size_t p = 0; p < sig.props().size(); ++p) by_size[1][0].push_back(Formula::atom(p));
    by_size[1][0].push_back(Formula::bottom());
  }
  for (std::size_t n = 2; n <= max_nodes; ++n) {
    for (Kind k : {Kind::And, Kind::Implies, Kind::IDisj}) {
      for (std::size_t l = 1; l + 1 < n; ++l) {
        std::size_t r = n - 1 - l;
        for (std::size_t dl = 0; dl <= max_depth; ++dl)
          for (const auto& fl : by_size[l][dl])
            for (std::size_t dr = 0; dr <= max_depth; ++dr)
              for (const auto& fr : by_size[r][dr]) {
                auto& bucket = by_size[n][std::max(dl, dr)];
                if (k == Kind::And) bucket.push_back(Formula::conj(fl, fr));
                else if (k == Kind::Implies) bucket.push_back(Formula::implies(fl, fr));
                else bucket.push_back(Formula::idisj(fl, fr));
              }
      }
    }
    for (std::size_t d = 1; d <= max_depth; ++d)
      for (std::size_t a = 0; a < sig.agents().size(); ++a)
        for (const auto& f : by_size[n - 1][d - 1]) {
          by_size[n][d].push_back(Formula::box(a, f));
          by_size[n][d].push_back(Formula::wbox(a, f));
        }
  }
  std::vector<Formula> out;
  out.reserve(total);
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    std::size_t first = out.size();
    for (std::size_t d = 0; d <= max_depth; ++d)
      out.insert(out.end(), by_size[n][d].begin(), by_size[n][d].end());
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
  }
  return out;
}

} // namespace inqkit
