#include "inqkit/fo.hpp"

#include "inqkit/error.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>

namespace inqkit {

namespace {

struct VarTable {
  std::mutex mu;
  std::map<std::string, int> ids;
  std::vector<std::string> names;
};

VarTable& vars() {
  static VarTable t;
  return t;
}

std::vector<int> merge(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_quantifier(FoKind k) {
  return k == FoKind::Forall || k == FoKind::Exists || k == FoKind::ForallSet || k == FoKind::ExistsSet;
}

} // namespace

int fo_var(const std::string& name) {
  auto& t = vars();
  std::lock_guard<std::mutex> lock(t.mu);
  auto [it, fresh] = t.ids.emplace(name, static_cast<int>(t.names.size()));
  if (fresh) t.names.push_back(name);
  return it->second;
}

const std::string& fo_var_name(int id) {
  auto& t = vars();
  std::lock_guard<std::mutex> lock(t.mu);
  return t.names.at(static_cast<std::size_t>(id));
}

FoFormula FoFormula::make(FoKind k, std::string name, std::vector<int> vs, FoFormula l, FoFormula r) {
  auto n = std::make_shared<detail::FoNode>();
  n->kind = k;
  n->name = std::move(name);
  n->vars = std::move(vs);
  if (is_quantifier(k)) {
    n->free = l.free_vars();
    n->free.erase(std::remove(n->free.begin(), n->free.end(), n->vars[0]), n->free.end());
    n->rank = l.rank() + 1;
  } else if (l.valid()) {
    n->free = r.valid() ? merge(l.free_vars(), r.free_vars()) : l.free_vars();
    n->rank = std::max(l.rank(), r.valid() ? r.rank() : 0);
  } else {
    n->free = n->vars;
    std::sort(n->free.begin(), n->free.end());
    n->free.erase(std::unique(n->free.begin(), n->free.end()), n->free.end());
  }
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return FoFormula(std::move(n));
}

FoFormula FoFormula::truth() { return make(FoKind::True, "", {}, {}, {}); }
FoFormula FoFormula::falsity() { return make(FoKind::False, "", {}, {}, {}); }
FoFormula FoFormula::rel(const std::string& name, std::vector<std::string> vs) {
  std::vector<int> ids;
  for (const auto& v : vs) ids.push_back(fo_var(v));
  return make(FoKind::Rel, name, std::move(ids), {}, {});
}
FoFormula FoFormula::eq(const std::string& x, const std::string& y) {
  return make(FoKind::Eq, "", {fo_var(x), fo_var(y)}, {}, {});
}
FoFormula FoFormula::mem(const std::string& x, const std::string& set) {
  return make(FoKind::Mem, "", {fo_var(x), fo_var(set)}, {}, {});
}
FoFormula FoFormula::neg(FoFormula f) { return make(FoKind::Not, "", {}, std::move(f), {}); }
FoFormula FoFormula::conj(FoFormula l, FoFormula r) { return make(FoKind::And, "", {}, std::move(l), std::move(r)); }
FoFormula FoFormula::disj(FoFormula l, FoFormula r) { return make(FoKind::Or, "", {}, std::move(l), std::move(r)); }
FoFormula FoFormula::implies(FoFormula l, FoFormula r) {
  return make(FoKind::Implies, "", {}, std::move(l), std::move(r));
}
FoFormula FoFormula::iff(FoFormula l, FoFormula r) { return make(FoKind::Iff, "", {}, std::move(l), std::move(r)); }
FoFormula FoFormula::forall(const std::string& v, const std::string& sort, FoFormula f) {
  return make(FoKind::Forall, sort, {fo_var(v)}, std::move(f), {});
}
FoFormula FoFormula::exists(const std::string& v, const std::string& sort, FoFormula f) {
  return make(FoKind::Exists, sort, {fo_var(v)}, std::move(f), {});
}
FoFormula FoFormula::forall_set(const std::string& v, const std::string& sort, FoFormula f) {
  return make(FoKind::ForallSet, sort, {fo_var(v)}, std::move(f), {});
}
FoFormula FoFormula::exists_set(const std::string& v, const std::string& sort, FoFormula f) {
  return make(FoKind::ExistsSet, sort, {fo_var(v)}, std::move(f), {});
}
FoFormula FoFormula::conj_all(const std::vector<FoFormula>& fs) {
  if (fs.empty()) return truth();
  FoFormula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}
FoFormula FoFormula::disj_all(const std::vector<FoFormula>& fs) {
  if (fs.empty()) return falsity();
  FoFormula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

FoKind FoFormula::kind() const { return node_->kind; }
const std::string& FoFormula::name() const { return node_->name; }
const std::vector<int>& FoFormula::vars() const { return node_->vars; }
const FoFormula& FoFormula::lhs() const { return node_->lhs; }
const FoFormula& FoFormula::rhs() const { return node_->rhs; }
const std::vector<int>& FoFormula::free_vars() const { return node_->free; }
std::size_t FoFormula::rank() const { return node_->rank; }

std::size_t quantifier_rank(const FoFormula& f) { return f.rank(); }

std::string render_fo(const FoFormula& f) {
  auto v = [&](std::size_t i) { return fo_var_name(f.vars()[i]); };
  switch (f.kind()) {
  case FoKind::True: return "true";
  case FoKind::False: return "false";
  case FoKind::Rel: {
    std::string out = "(" + f.name();
    for (std::size_t i = 0; i < f.vars().size(); ++i) out += " " + v(i);
    return out + ")";
  }
  case FoKind::Eq: return "(= " + v(0) + " " + v(1) + ")";
  case FoKind::Mem: return "(in " + v(0) + " " + v(1) + ")";
  case FoKind::Not: return "(not " + render_fo(f.lhs()) + ")";
  case FoKind::And: return "(and " + render_fo(f.lhs()) + " " + render_fo(f.rhs()) + ")";
  case FoKind::Or: return "(or " + render_fo(f.lhs()) + " " + render_fo(f.rhs()) + ")";
  case FoKind::Implies: return "(implies " + render_fo(f.lhs()) + " " + render_fo(f.rhs()) + ")";
  case FoKind::Iff: return "(iff " + render_fo(f.lhs()) + " " + render_fo(f.rhs()) + ")";
  case FoKind::Forall: return "(forall (" + v(0) + " " + f.name() + ") " + render_fo(f.lhs()) + ")";
  case FoKind::Exists: return "(exists (" + v(0) + " " + f.name() + ") " + render_fo(f.lhs()) + ")";
  case FoKind::ForallSet: return "(forall (" + v(0) + " set " + f.name() + ") " + render_fo(f.lhs()) + ")";
  case FoKind::ExistsSet: return "(exists (" + v(0) + " set " + f.name() + ") " + render_fo(f.lhs()) + ")";
  }
  return "";
}

// ---------------------------------------------------------------------------
// S-expression parser

namespace {

class SexpParser {
public:
  explicit SexpParser(const std::string& text) : t_(text) {}

  FoFormula parse_all() {
    auto f = formula();
    skip();
    if (pos_ != t_.size()) throw SyntaxError("unexpected trailing input", pos_);
    return f;
  }

private:
  void skip() {
    while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < t_.size() && t_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) throw SyntaxError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  std::string atom() {
    skip();
    std::size_t start = pos_;
    while (pos_ < t_.size() && !std::isspace(static_cast<unsigned char>(t_[pos_])) && t_[pos_] != '(' &&
           t_[pos_] != ')')
      ++pos_;
    if (start == pos_) throw SyntaxError("expected symbol", pos_);
    return t_.substr(start, pos_ - start);
  }

  FoFormula formula() {
    if (!peek('(')) {
      std::size_t at = pos_;
      auto a = atom();
      if (a == "true") return FoFormula::truth();
      if (a == "false") return FoFormula::falsity();
      throw SyntaxError("expected formula", at);
    }
    expect('(');
    std::size_t at = pos_;
    auto head = atom();
    FoFormula out;
    if (head == "forall" || head == "exists") {
      expect('(');
      auto var = atom();
      auto second = atom();
      bool set = false;
      std::string sort = second;
      if (second == "set") {
        set = true;
        sort = atom();
      }
      expect(')');
      if (set) set_vars_.push_back(var);
      auto body = formula();
      if (set) set_vars_.pop_back();
      if (head == "forall")
        out = set ? FoFormula::forall_set(var, sort, body) : FoFormula::forall(var, sort, body);
      else
        out = set ? FoFormula::exists_set(var, sort, body) : FoFormula::exists(var, sort, body);
    } else if (head == "and" || head == "or") {
      std::vector<FoFormula> parts;
      while (!peek(')')) parts.push_back(formula());
      out = head == "and" ? FoFormula::conj_all(parts) : FoFormula::disj_all(parts);
    } else if (head == "not") {
      out = FoFormula::neg(formula());
    } else if (head == "implies" || head == "iff") {
      auto l = formula();
      auto r = formula();
      out = head == "implies" ? FoFormula::implies(l, r) : FoFormula::iff(l, r);
    } else if (head == "=") {
      auto x = atom();
      auto y = atom();
      out = FoFormula::eq(x, y);
    } else {
      std::vector<std::string> args;
      while (!peek(')')) args.push_back(atom());
      if (head == "in" && args.size() == 2 &&
          std::find(set_vars_.begin(), set_vars_.end(), args[1]) != set_vars_.end())
        out = FoFormula::mem(args[0], args[1]);
      else if (args.empty())
        throw SyntaxError("relation atom without arguments", at);
      else
        out = FoFormula::rel(head, args);
    }
    expect(')');
    return out;
  }

  const std::string& t_;
  std::size_t pos_ = 0;
  std::vector<std::string> set_vars_;
};

} // namespace

FoFormula parse_fo(const std::string& text) { return SexpParser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Evaluation

FoEvaluator::FoEvaluator(const Structure& a, std::size_t set_cap) : a_(a), set_cap_(set_cap) {}

std::uint64_t FoEvaluator::lookup(const std::vector<Slot>& env, int var) const {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->var == var) return it->value;
  throw InputError("unbound variable '" + fo_var_name(var) + "'");
}

std::size_t FoEvaluator::sort_of(const std::string& name) const {
  auto s = a_.sort_index(name);
  if (s == SIZE_MAX) throw InputError("unknown sort '" + name + "'");
  return s;
}

std::size_t FoEvaluator::rel_of(const FoFormula& f) {
  auto it = rel_cache_.find(f.id());
  if (it != rel_cache_.end()) return it->second;
  auto r = a_.relation_index(f.name());
  if (r == SIZE_MAX) throw UnknownIdentifier(f.name());
  if (a_.relations()[r].sorts.size() != f.vars().size())
    throw InputError("arity mismatch for relation '" + f.name() + "'");
  rel_cache_.emplace(f.id(), r);
  return r;
}

bool FoEvaluator::eval(const FoFormula& f, const FoEnv& env) {
  keep_.push_back(f);
  std::vector<Slot> slots;
  for (const auto& [v, x] : env) slots.push_back({v, x});
  return run(f, slots);
}

bool FoEvaluator::run(const FoFormula& f, std::vector<Slot>& env) {
  switch (f.kind()) {
  case FoKind::True: return true;
  case FoKind::False: return false;
  case FoKind::Rel: {
    auto r = rel_of(f);
    const auto& vs = f.vars();
    if (vs.size() == 1) return a_.holds1(r, lookup(env, vs[0]));
    if (vs.size() == 2) return a_.holds2(r, lookup(env, vs[0]), lookup(env, vs[1]));
    std::vector<std::size_t> t;
    for (auto v : vs) t.push_back(lookup(env, v));
    return a_.holds(r, t);
  }
  case FoKind::Eq: return lookup(env, f.vars()[0]) == lookup(env, f.vars()[1]);
  case FoKind::Mem: {
    auto x = lookup(env, f.vars()[0]);
    return (lookup(env, f.vars()[1]) >> a_.element(x).local) & 1u;
  }
  case FoKind::Not: return !run(f.lhs(), env);
  case FoKind::And: return run(f.lhs(), env) && run(f.rhs(), env);
  case FoKind::Or: return run(f.lhs(), env) || run(f.rhs(), env);
  case FoKind::Implies: return !run(f.lhs(), env) || run(f.rhs(), env);
  case FoKind::Iff: return run(f.lhs(), env) == run(f.rhs(), env);
  default: break;
  }

  // Quantifiers, memoized on the values of the free variables.
  const auto& fv = f.free_vars();
  const bool memo = fv.size() <= 4;
  Key key{f.id(), {~0ULL, ~0ULL, ~0ULL, ~0ULL}};
  if (memo) {
    for (std::size_t i = 0; i < fv.size(); ++i) key.v[i] = lookup(env, fv[i]);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const std::size_t sort = sort_of(f.name());
  const int var = f.vars()[0];
  const bool universal = f.kind() == FoKind::Forall || f.kind() == FoKind::ForallSet;
  bool result = universal;
  env.push_back({var, 0});
  if (f.kind() == FoKind::Forall || f.kind() == FoKind::Exists) {
    for (auto e : a_.sort_elements(sort)) {
      env.back().value = e;
      if (run(f.lhs(), env) != universal) {
        result = !universal;
        break;
      }
    }
  } else {
    const std::size_t n = a_.sort_elements(sort).size();
    if (n > set_cap_ || n >= 64) {
      env.pop_back();
      throw CapExceeded("set quantifier over sort '" + f.name() + "'", n, set_cap_);
    }
    const std::uint64_t end = std::uint64_t{1} << n;
    for (std::uint64_t m = 0; m < end; ++m) {
      env.back().value = m;
      if (run(f.lhs(), env) != universal) {
        result = !universal;
        break;
      }
    }
  }
  env.pop_back();
  if (memo) memo_.emplace(key, result);
  return result;
}

bool eval_fo(const Structure& a, const FoFormula& f, const FoEnv& env, std::size_t set_cap) {
  return FoEvaluator(a, set_cap).eval(f, env);
}

// ---------------------------------------------------------------------------
// Standard translation

std::string Translator::free_var(Target t, std::size_t k) {
  return (t == Target::world ? "w_" : "s_") + std::to_string(k);
}

FoFormula Translator::translate(const Formula& f, Target t, std::size_t k) {
  const Formula core = contains_sugar(f) ? desugar(f) : f;
  auto key = std::make_tuple(core.id(), static_cast<int>(t), k);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  keep_.push_back(core);
  FoFormula out = t == Target::world ? world_clause(core, k) : state_clause(core, k);
  cache_.emplace(key, out);
  return out;
}

namespace {
std::string idx(const char* prefix, std::size_t k) { return prefix + std::to_string(k); }
} // namespace

FoFormula Translator::world_clause(const Formula& f, std::size_t k) {
  const std::string w = idx("w_", k);
  switch (f.kind()) {
  case Kind::Atom: return FoFormula::rel("P_" + sig_.props().at(f.index()), {w});
  case Kind::Bottom: return FoFormula::falsity();
  case Kind::And:
    return FoFormula::conj(translate(f.lhs(), Target::world, k), translate(f.rhs(), Target::world, k));
  case Kind::IDisj:
    return FoFormula::disj(translate(f.lhs(), Target::world, k), translate(f.rhs(), Target::world, k));
  case Kind::Implies:
    return FoFormula::implies(translate(f.lhs(), Target::world, k), translate(f.rhs(), Target::world, k));
  case Kind::Box: {
    // ∃t (t is σ_a(w) ∧ φ(t)), with t = σ_a(w) defined by
    // ∀y (y ε t ↔ ∃u (E_a(w,u) ∧ y ε u)).
    const std::string t = idx("s_", k + 1), y = idx("y_", k), u = idx("u_", k);
    const std::string E = "E_" + sig_.agents().at(f.index());
    auto inner = FoFormula::exists(u, "state", FoFormula::conj(FoFormula::rel(E, {w, u}), FoFormula::rel("in", {y, u})));
    auto def = FoFormula::forall(y, "world", FoFormula::iff(FoFormula::rel("in", {y, t}), inner));
    return FoFormula::exists(t, "state", FoFormula::conj(def, translate(f.lhs(), Target::state, k + 1)));
  }
  case Kind::WBox: {
    const std::string t = idx("s_", k + 1);
    const std::string E = "E_" + sig_.agents().at(f.index());
    return FoFormula::forall(t, "state",
                             FoFormula::implies(FoFormula::rel(E, {w, t}), translate(f.lhs(), Target::state, k + 1)));
  }
  default: break;
  }
  throw InputError("translation expects a desugared formula");
}

FoFormula Translator::state_clause(const Formula& f, std::size_t k) {
  const std::string s = idx("s_", k), x = idx("x_", k);
  switch (f.kind()) {
  case Kind::Atom:
    return FoFormula::forall(
        x, "world",
        FoFormula::implies(FoFormula::rel("in", {x, s}), FoFormula::rel("P_" + sig_.props().at(f.index()), {x})));
  case Kind::Bottom: return FoFormula::neg(FoFormula::exists(x, "world", FoFormula::rel("in", {x, s})));
  case Kind::And:
    return FoFormula::conj(translate(f.lhs(), Target::state, k), translate(f.rhs(), Target::state, k));
  case Kind::IDisj:
    return FoFormula::disj(translate(f.lhs(), Target::state, k), translate(f.rhs(), Target::state, k));
  case Kind::Implies: {
    const std::string t = idx("s_", k + 1);
    auto sub = FoFormula::forall(x, "world", FoFormula::implies(FoFormula::rel("in", {x, t}), FoFormula::rel("in", {x, s})));
    auto body = FoFormula::implies(translate(f.lhs(), Target::state, k + 1), translate(f.rhs(), Target::state, k + 1));
    return FoFormula::forall(t, "state", FoFormula::implies(sub, body));
  }
  case Kind::Box:
  case Kind::WBox: {
    const std::string v = idx("w_", k + 1);
    return FoFormula::forall(v, "world",
                             FoFormula::implies(FoFormula::rel("in", {v, s}), translate(f, Target::world, k + 1)));
  }
  default: break;
  }
  throw InputError("translation expects a desugared formula");
}

FoFormula standard_translation(const Formula& f, const Signature& sig, Target t) {
  return Translator(sig).translate(f, t, 0);
}

} // namespace inqkit
