#pragma once

#include "inqkit/io.hpp"
#include "inqkit/model.hpp"

namespace fx {

using inqkit::EpistemicModel;
using inqkit::Json;

inline EpistemicModel model(const char* text, bool allow_invalid = false) {
  return inqkit::model_from_json(Json::parse(text), allow_invalid);
}

// Σ_a generated by {{u},{v}}, p true at u.
inline EpistemicModel M1() {
  return model(R"({"worlds":["u","v"],"agents":["a"],"props":["p"],"valuation":{"p":["u"]},
                   "sigma":{"a":{"u":[["u"],["v"]],"v":[["u"],["v"]]}}})");
}

// Σ_a generated by {{u,v}}, p true at u.
inline EpistemicModel M0() {
  return model(R"({"worlds":["u","v"],"agents":["a"],"props":["p"],"valuation":{"p":["u"]},
                   "sigma":{"a":{"u":[["u","v"]],"v":[["u","v"]]}}})");
}

// Single world without p.
inline EpistemicModel L() {
  return model(R"({"worlds":["x"],"agents":["a"],"props":["p"],"valuation":{"p":[]},
                   "sigma":{"a":{"x":[["x"]]}}})");
}

inline EpistemicModel example3w() {
  return model(R"({"worlds":["w1","w2","w3"],"agents":["a"],"props":[],"valuation":{},
                   "sigma":{"a":{"w1":[["w1"],["w2"]],"w2":[["w1"],["w2"]],"w3":[["w1"],["w2"]]}}})",
               true);
}

inline inqkit::InfoState st(const EpistemicModel& m, const std::string& names) {
  return inqkit::parse_state(m, names);
}

} // namespace fx
