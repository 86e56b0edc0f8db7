#include <doctest.h>

#include "fixtures.hpp"
#include "inqkit/corpus.hpp"
#include "inqkit/error.hpp"
#include "inqkit/transform.hpp"
#include "oracles/naive_bisim.hpp"

using namespace inqkit;
using fx::st;

namespace {

// Every member s of every Σ_a(w) has some member s' ⊇ s realizing each
// ∼-type of s at least K times.
bool naive_k_rich(const EpistemicModel& m, std::size_t K) {
  oracle::NaiveGame game(m, m);
  auto same = [&](std::size_t u, std::size_t v) { return game.worlds(u, v, 2 * m.size()); };
  for (std::size_t a = 0; a < m.sig().agents().size(); ++a)
    for (std::size_t w = 0; w < m.size(); ++w) {
      auto members = m.Sigma(a, w).members();
      for (auto s : members) {
        bool found = false;
        for (auto t : members) {
          if (!s.subset_of(t)) continue;
          bool ok = true;
          s.for_each([&](std::size_t u) {
            std::size_t n = 0;
            t.for_each([&](std::size_t v) { n += same(u, v); });
            ok = ok && n >= K;
          });
          found = found || ok;
        }
        if (!found) return false;
      }
    }
  return true;
}

KripkeFrame frame(std::size_t n, std::vector<std::vector<std::vector<std::size_t>>> parts) {
  std::vector<std::vector<InfoState>> ps;
  for (auto& agent : parts) {
    ps.emplace_back();
    for (auto& cls : agent) {
      InfoState s;
      for (auto w : cls) s = s.with(w);
      ps.back().push_back(s);
    }
  }
  std::vector<std::string> agents{"a", "b", "c"};
  agents.resize(parts.size());
  return make_frame(n, agents, ps);
}

} // namespace

TEST_CASE("disjoint unions") {
  auto m1 = fx::M1();
  auto u = disjoint_union(m1, m1);
  CHECK(u.size() == 4);
  CHECK(u.world_name(2) == "u'");
  auto ml = disjoint_union(m1, fx::L());
  CHECK(bisim_check(ml, 0, m1, 0, kInfinity));
  CHECK(bisim_check(ml, 2, fx::L(), 0, kInfinity));
  CHECK_THROWS_AS(disjoint_union(m1, m1, ""), InputError);

  for (const auto& [a, b] : corpus_pairs(8, 20)) {
    auto ab = disjoint_union(a, b);
    for (std::size_t w = 0; w < a.size(); ++w) CHECK(bisim_check(ab, w, a, w, kInfinity));
    for (std::size_t w = 0; w < b.size(); ++w) CHECK(bisim_check(ab, a.size() + w, b, w, kInfinity));
  }
}

TEST_CASE("rich covers") {
  auto m1 = fx::M1();
  auto c = rich_cover(m1, 2);
  CHECK(c.source.size() == 4);
  CHECK(c.source.Sigma(0, 0).maximal() == std::vector<InfoState>{st(c.source, "u:1,u:2"), st(c.source, "v:1,v:2")});
  CHECK(verify_covering(c).ok);
  CHECK(is_k_rich(c.source, 2));
  CHECK_FALSE(is_k_rich(c.source, 3));
  CHECK(is_k_rich(rich_cover(m1, 3).source, 3));
  CHECK(is_k_rich(m1, 1));
  CHECK_FALSE(is_k_rich(m1, 2));

  auto one = rich_cover(m1, 1);
  CHECK(one.source.size() == 2);
  CHECK(verify_covering(Covering{m1, m1, {0, 1}}).ok);

  auto collapse = verify_covering(Covering{fx::M0(), m1, {0, 1}});
  CHECK_FALSE(collapse.ok);
  CHECK(collapse.failure == "inquisitive assignment");
  CHECK(verify_covering(Covering{m1, m1, {0, 0}}).failure == "surjectivity");
  CHECK(verify_covering(Covering{m1, m1, {1, 0}}).failure == "valuation");
  CHECK(verify_covering(Covering{m1, m1, {0}}).failure == "totality");
  CHECK_THROWS_AS(rich_cover(m1, 0), InputError);
  CHECK_THROWS_AS(rich_cover(m1, 33), CapExceeded);
}

TEST_CASE("covers of corpus models") {
  for (const auto& m : corpus(12, 40)) {
    for (std::size_t K = 1; K <= 3; ++K) {
      if (m.size() * K > kMaxWorlds) continue;
      auto c = rich_cover(m, K);
      CHECK(verify_covering(c).ok);
      CHECK(is_k_rich(c.source, K));
      std::vector<std::size_t> fibre(m.size());
      for (auto w : c.pi) ++fibre[w];
      for (auto f : fibre) CHECK(f == K);
    }
  }
}

TEST_CASE("richness agrees with the all-members definition") {
  for (const auto& m : corpus(13, 60))
    for (std::size_t K = 1; K <= 3; ++K) {
      CHECK(is_k_rich(m, K) == naive_k_rich(m, K));
    }
  auto c = rich_cover(fx::M1(), 2);
  CHECK(naive_k_rich(c.source, 2));
}

TEST_CASE("dummy agent expansion") {
  auto m1 = fx::M1();
  auto e = dummy_agent_expand(m1, st(m1, "u,v"));
  auto s = e.sig().agent_index(kDummyAgent);
  CHECK(e.Sigma(s, 0).maximal() == std::vector<InfoState>{st(m1, "u,v")});
  CHECK(kripke_companion(e).cls(s, 1) == st(m1, "u,v"));
  auto single = dummy_agent_expand(m1, st(m1, "u"));
  auto f = kripke_companion(single);
  for (std::size_t w = 0; w < 2; ++w) CHECK(f.cls(single.sig().agent_index(kDummyAgent), w).size() == 1);
  CHECK_THROWS_AS(dummy_agent_expand(m1, InfoState{}), InputError);
  CHECK_THROWS_AS(dummy_agent_expand(e, st(m1, "u")), InputError);

  // dropping the dummy agent again can only merge classes
  for (const auto& [a, b] : corpus_pairs(19, 20))
    a.all().for_each_subset([&](InfoState sa) {
      if (sa.empty()) return;
      auto ea = dummy_agent_expand(a, sa);
      auto eb = dummy_agent_expand(b, b.all());
      for (std::size_t u = 0; u < a.size(); ++u)
        for (std::size_t v = 0; v < b.size(); ++v)
          if (bisim_check(ea, u, eb, v, 2)) CHECK(bisim_check(a, u, b, v, 2));
    });
}

TEST_CASE("exploded views") {
  auto m1 = fx::M1();
  auto x = exploded_view(m1);
  auto W = x.structure.sort_index("world"), S = x.structure.sort_index("state");
  CHECK(x.structure.sort_elements(W).size() == 4);
  CHECK(x.structure.sort_elements(S).size() == 4);
  CHECK(x.structure.relations()[x.structure.relation_index("RI")].tuples.size() == 2);
  CHECK_FALSE(x.point);

  auto two = fx::model(R"({"worlds":["u","v"],"agents":["a","b"],"props":[],
      "sigma":{"a":{"u":[["u","v"]],"v":[["u","v"]]},"b":{"u":[["u"]],"v":[["v"]]}}})");
  auto x2 = exploded_view(two, 0);
  const auto& RI = x2.structure.relations()[x2.structure.relation_index("RI")];
  std::size_t copies_of_u = 0;
  for (const auto& t : RI.tuples) copies_of_u += t[0] == x2.structure.element_index("u");
  CHECK(copies_of_u == 2);
  CHECK(x2.point == x2.structure.element_index("u"));

  auto xs = exploded_view(m1, st(m1, "u,v"));
  REQUIRE(xs.point);
  CHECK(x.structure.sort_elements(S).size() + 4 == xs.structure.sort_elements(S).size());
  CHECK(xs.structure.element(*xs.point).name == std::string(kDummyAgent) + "#0:{u,v}");

  CHECK_THROWS_AS(exploded_view(m1, std::optional<std::size_t>{}, 1), CapExceeded);
}

TEST_CASE("recovery inverts the exploded view") {
  CHECK(same_relational_model(recover_from_exploded(exploded_view(fx::M1()).structure),
                              encode(fx::M1(), EncodingFlavor::locally_full)));
  CHECK(same_relational_model(recover_from_exploded(exploded_view(fx::L()).structure),
                              encode(fx::L(), EncodingFlavor::locally_full)));
  for (const auto& m : corpus(14, 40)) {
    auto r = recover_from_exploded(exploded_view(m).structure);
    CHECK(same_relational_model(r, encode(m, EncodingFlavor::locally_full)));
    auto s = m.all().minus(InfoState::singleton(0));
    if (s.empty()) continue;
    auto rs = recover_from_exploded(exploded_view(m, s).structure);
    CHECK(same_relational_model(rs, encode(dummy_agent_expand(m, s), EncodingFlavor::locally_full)));
  }
  Structure junk;
  junk.add_sort("world");
  CHECK_THROWS_AS(recover_from_exploded(junk), InputError);
}

TEST_CASE("exploded views respect disjoint unions") {
  for (const auto& [a, b] : corpus_pairs(15, 10)) {
    auto lhs = exploded_view(disjoint_union(a, b)).structure;
    auto rhs = disjoint_union(exploded_view(a).structure, exploded_view(b).structure);
    CHECK(isomorphic(lhs, rhs));
  }
  auto m1 = fx::M1(), m0 = fx::M0();
  CHECK_FALSE(isomorphic(exploded_view(disjoint_union(m1, m1)).structure,
                         disjoint_union(exploded_view(m1).structure, exploded_view(m0).structure)));
}

TEST_CASE("acyclicity") {
  auto two_cycle = frame(2, {{{0, 1}}, {{0, 1}}});
  CHECK_FALSE(is_n_acyclic(two_cycle, 2));
  auto four = frame(4, {{{0, 1}, {2, 3}}, {{1, 2}, {3, 0}}});
  CHECK(is_n_acyclic(four, 2));
  CHECK(is_n_acyclic(four, 3));
  CHECK_FALSE(is_n_acyclic(four, 4));
  auto mono = frame(3, {{{0, 1, 2}}});
  for (std::size_t n = 2; n < 6; ++n) CHECK(is_n_acyclic(mono, n));
  CHECK_THROWS_AS(is_n_acyclic(four, 1), InputError);

  // 2-acyclic frames: classes of distinct agents share at most one world
  for (const auto& m : corpus(16, 200)) {
    auto f = kripke_companion(m);
    if (!is_n_acyclic(f, 2)) continue;
    for (std::size_t w = 0; w < m.size(); ++w)
      for (std::size_t a = 0; a < f.agents.size(); ++a)
        for (std::size_t b = a + 1; b < f.agents.size(); ++b) CHECK((f.cls(a, w) & f.cls(b, w)).size() <= 1);
  }
}

TEST_CASE("granularity schedule") {
  auto four = frame(4, {{{0, 1}, {2, 3}}, {{1, 2}, {3}, {0}}});
  CHECK(granularity_schedule(four, 0, 2) == std::vector<std::size_t>{3, 2, 1, 0});
  CHECK(granularity_schedule(four, 3, 0) == std::vector<std::size_t>{0, 0, 0, 1});
}
