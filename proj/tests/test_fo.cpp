#include <doctest.h>

#include "fixtures.hpp"
#include "inqkit/corpus.hpp"
#include "inqkit/error.hpp"
#include "inqkit/fo.hpp"
#include "oracles/naive_semantics.hpp"

using namespace inqkit;

namespace {

Structure path3() {
  Structure s;
  auto e = s.add_sort("element");
  auto E = s.add_relation("E", {e, e});
  for (auto n : {"0", "1", "2"}) s.add_element(e, n);
  s.add_tuple(E, {0, 1});
  s.add_tuple(E, {1, 2});
  return s;
}

} // namespace

TEST_CASE("parsing and rendering first-order formulas") {
  auto f = parse_fo("(forall (x element) (exists (y element) (or (E x y) (= x y))))");
  CHECK(f.kind() == FoKind::Forall);
  CHECK(quantifier_rank(f) == 2);
  CHECK(f.free_vars().empty());
  auto again = parse_fo(render_fo(f));
  CHECK(render_fo(again) == render_fo(f));

  auto g = parse_fo("(exists (X set element) (forall (x element) (in x X)))");
  CHECK(g.kind() == FoKind::ExistsSet);
  CHECK(g.lhs().lhs().kind() == FoKind::Mem);
  auto h = parse_fo("(in w s)");
  CHECK(h.kind() == FoKind::Rel);
  CHECK(h.free_vars().size() == 2);

  CHECK_THROWS_AS(parse_fo("(forall x E)"), SyntaxError);
  CHECK_THROWS_AS(parse_fo("(and (E x y)"), SyntaxError);
}

TEST_CASE("evaluation on a small path") {
  auto p = path3();
  CHECK(eval_fo(p, parse_fo("(exists (x element) (exists (y element) (E x y)))")));
  CHECK_FALSE(eval_fo(p, parse_fo("(exists (x element) (E x x))")));
  CHECK(eval_fo(p, parse_fo("(exists (x element) (forall (y element) (not (E y x))))")));
  // every set closed under successors that contains 0 contains 2
  auto reach = parse_fo(
      "(forall (X set element) (implies (and (in a X) (forall (x element) (forall (y element) "
      "(implies (and (in x X) (E x y)) (in y X))))) (in b X)))");
  FoEnv env{{fo_var("a"), 0}, {fo_var("b"), 2}};
  CHECK(eval_fo(p, reach, env));
  env[fo_var("a")] = 2;
  env[fo_var("b")] = 0;
  CHECK_FALSE(eval_fo(p, reach, env));
  CHECK_THROWS(eval_fo(p, parse_fo("(E x y)")));
  CHECK_THROWS(eval_fo(p, parse_fo("(exists (x nope) true)")));
}

TEST_CASE("standard translation agrees with support semantics") {
  std::size_t checked = 0;
  for (const auto& m : corpus(17, 25)) {
    auto fs = enumerate_formulas(m.sig(), 2, 6);
    for (auto flavor : {EncodingFlavor::locally_full, EncodingFlavor::full}) {
      auto x = to_structure(encode(m, flavor));
      FoEvaluator ev(x);
      Translator tr(m.sig());
      for (std::size_t k = 0; k < fs.size(); k += 3) {
        const auto& f = fs[k];
        auto fw = tr.translate(f, Target::world);
        auto fsup = tr.translate(f, Target::state);
        CHECK(fw.free_vars().size() <= 1);
        for (std::size_t w = 0; w < m.size(); ++w) {
          FoEnv env{{fo_var("w_0"), x.element_index(m.world_name(w))}};
          CHECK(ev.eval(fw, env) == oracle::naive_truth(m, w, f));
        }
        m.all().for_each_subset([&](InfoState s) {
          auto name = state_name(m.worlds(), s);
          if (!x.has_element(name)) return;
          FoEnv env{{fo_var("s_0"), x.element_index(name)}};
          CHECK(ev.eval(fsup, env) == oracle::naive_supports(m, s, f));
          ++checked;
        });
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("translation of sugar goes through the core") {
  auto m = fx::M1();
  auto x = to_structure(encode(m, EncodingFlavor::locally_full));
  for (const char* text : {"?p", "!p", "p \\/ !p", "[a] p", "[+a] p", "[a] ?p", "p -> [a] p", "!?p"}) {
    auto f = parse(text, m.sig());
    auto fw = standard_translation(f, m.sig(), Target::world);
    for (std::size_t w = 0; w < m.size(); ++w)
      CHECK(eval_fo(x, fw, {{fo_var("w_0"), x.element_index(m.world_name(w))}}) == truth(m, w, f));
  }
}
