#include <doctest.h>

#include "fixtures.hpp"
#include "inqkit/corpus.hpp"
#include "inqkit/error.hpp"
#include "inqkit/relational.hpp"

using namespace inqkit;

namespace {

bool same_model(const EpistemicModel& a, const EpistemicModel& b) {
  if (!(a.sig() == b.sig()) || a.worlds() != b.worlds() || a.valuations() != b.valuations()) return false;
  for (std::size_t i = 0; i < a.sig().agents().size(); ++i)
    for (std::size_t w = 0; w < a.size(); ++w)
      if (!(a.Sigma(i, w) == b.Sigma(i, w))) return false;
  return true;
}

const ConditionCheck& check(const RelationalReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.condition == name) return c;
  throw std::runtime_error("no condition " + name);
}

} // namespace

TEST_CASE("encoding sizes on the three-world example") {
  auto m = fx::example3w();
  CHECK(encode(m, EncodingFlavor::minimal, std::nullopt, true).states.size() == 3);
  CHECK(encode(m, EncodingFlavor::locally_full, std::nullopt, true).states.size() == 4);
  CHECK(encode(m, EncodingFlavor::full, std::nullopt, true).states.size() == 8);
  CHECK_THROWS_AS(encode(m, EncodingFlavor::minimal), InvalidModel);

  auto r = encode(m, EncodingFlavor::minimal, std::nullopt, true);
  auto rep = validate_relational(r);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(check(rep, "factivity").ok);
  CHECK(check(rep, "extensionality").ok);
  CHECK_THROWS_AS(decode(r), InvalidModel);
}

TEST_CASE("flavors and their flags") {
  auto m = fx::M1();
  auto mn = encode(m, EncodingFlavor::minimal);
  auto lf = encode(m, EncodingFlavor::locally_full);
  auto fl = encode(m, EncodingFlavor::full);
  CHECK(mn.states.size() == 3);
  CHECK(lf.states.size() == 4);
  CHECK(fl.states.size() == 4);
  CHECK(validate_relational(lf).locally_full);
  CHECK(validate_relational(fl).full);
  CHECK(same_relational_model(lf, fl));
  CHECK_FALSE(same_relational_model(mn, lf));

  auto pointed = encode(fx::M0(), EncodingFlavor::minimal, fx::st(fx::M0(), "v"));
  CHECK(pointed.state_index(fx::st(fx::M0(), "v")) != SIZE_MAX);

  CHECK(parse_flavor("lf") == EncodingFlavor::locally_full);
  CHECK_THROWS_AS(parse_flavor("huge"), InputError);
}

TEST_CASE("full encoding cap") {
  Json j = {{"agents", {"a"}}, {"props", Json::array()}, {"worlds", Json::array()}, {"sigma", {{"a", Json::object()}}}};
  for (int i = 0; i < 17; ++i) {
    auto w = "w" + std::to_string(i);
    j["worlds"].push_back(w);
    j["sigma"]["a"][w] = {{w}};
  }
  auto m = model_from_json(j);
  CHECK_THROWS_AS(encode(m, EncodingFlavor::full), CapExceeded);
  CHECK(encode(m, EncodingFlavor::full, std::nullopt, false, 17).states.size() == (1u << 17));
}

TEST_CASE("decode inverts encode on the corpus") {
  for (const auto& m : corpus(7, 80)) {
    for (auto f : {EncodingFlavor::minimal, EncodingFlavor::locally_full, EncodingFlavor::full}) {
      auto r = encode(m, f);
      auto rep = validate_relational(r);
      CHECK(rep.ok());
      if (f != EncodingFlavor::minimal) CHECK(rep.locally_full);
      CHECK(rep.full == (f == EncodingFlavor::full || r.states.size() == (std::size_t{1} << m.size())));
      CHECK(same_model(decode(r), m));
      for (std::size_t a = 0; a < m.sig().agents().size(); ++a)
        for (std::size_t w = 0; w < m.size(); ++w) CHECK(r.R(a, w) == m.sigma(a, w));
    }
  }
}

TEST_CASE("validation catches each broken condition") {
  auto base = encode(fx::M1(), EncodingFlavor::locally_full);

  auto dup = base;
  dup.states.push_back(dup.states.back());
  CHECK_FALSE(check(validate_relational(dup), "extensionality").ok);

  auto down = encode(fx::M0(), EncodingFlavor::locally_full);
  auto u = down.state_index(fx::st(fx::M0(), "u"));
  for (auto& per_world : down.E[0]) std::erase(per_world, u);
  CHECK_FALSE(check(validate_relational(down), "downward closure").ok);

  auto empty = base;
  empty.E[0][0].clear();
  CHECK_FALSE(check(validate_relational(empty), "non-emptiness").ok);

  auto intro = base;
  std::erase(intro.E[0][1], intro.state_index(fx::st(fx::M1(), "u")));
  CHECK_FALSE(check(validate_relational(intro), "full introspection").ok);
}
