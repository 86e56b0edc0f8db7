#include "inqkit/io.hpp"

#include "inqkit/error.hpp"

#include <fstream>
#include <map>
#include <set>

namespace inqkit {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  return j.at(key);
}

std::vector<std::string> names(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw InputError(std::string(what) + " must contain strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::size_t index_of(const std::vector<std::string>& list, const std::string& name) {
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i] == name) return i;
  throw UnknownIdentifier(name);
}

InfoState state_from(const std::vector<std::string>& worlds, const Json& j) {
  InfoState s;
  for (const auto& w : names(j, "state")) s = s.with(index_of(worlds, w));
  return s;
}

std::vector<std::string> unique(std::vector<std::string> v, const char* what) {
  std::set<std::string> seen;
  for (const auto& x : v)
    if (!seen.insert(x).second) throw InputError(std::string("duplicate ") + what + " '" + x + "'");
  return v;
}

} // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

Json state_to_json(const std::vector<std::string>& worlds, InfoState s) {
  Json out = Json::array();
  s.for_each([&](std::size_t w) { out.push_back(worlds.at(w)); });
  return out;
}

EpistemicModel model_from_json(const Json& j, bool allow_invalid) {
  auto worlds = unique(names(field(j, "worlds"), "worlds"), "world");
  auto agents = names(field(j, "agents"), "agents");
  auto props = j.contains("props") ? names(j.at("props"), "props") : std::vector<std::string>{};
  Signature sig(agents, props);
  if (worlds.size() > kMaxWorlds) throw CapExceeded("worlds", worlds.size(), kMaxWorlds);

  std::vector<InfoState> val(sig.props().size());
  if (j.contains("valuation")) {
    const auto& v = j.at("valuation");
    if (!v.is_object()) throw InputError("valuation must be an object");
    for (auto it = v.begin(); it != v.end(); ++it) val[sig.prop_index(it.key())] = state_from(worlds, it.value());
  }
  const auto& sj = field(j, "sigma");
  if (!sj.is_object()) throw InputError("sigma must be an object");
  std::vector<std::vector<DownwardFamily>> sigma(sig.agents().size(), std::vector<DownwardFamily>(worlds.size()));
  std::vector<std::vector<bool>> given(sig.agents().size(), std::vector<bool>(worlds.size(), false));
  for (auto it = sj.begin(); it != sj.end(); ++it) {
    auto a = sig.agent_index(it.key());
    if (!it.value().is_object()) throw InputError("sigma." + it.key() + " must be an object");
    for (auto wt = it.value().begin(); wt != it.value().end(); ++wt) {
      auto w = index_of(worlds, wt.key());
      if (!wt.value().is_array()) throw InputError("sigma entries must be lists of states");
      std::vector<InfoState> gens;
      for (const auto& s : wt.value()) gens.push_back(state_from(worlds, s));
      sigma[a][w] = DownwardFamily::from_generators(gens);
      given[a][w] = true;
    }
  }
  for (std::size_t a = 0; a < given.size(); ++a)
    for (std::size_t w = 0; w < worlds.size(); ++w)
      if (!given[a][w]) throw InputError("sigma lacks " + sig.agents()[a] + " at " + worlds[w]);
  EpistemicModel m(sig, worlds, val, sigma);
  if (allow_invalid && !check_frame_conditions(m).empty()) return m;
  return validate_epistemic(std::move(m));
}

Json model_to_json(const EpistemicModel& m) {
  Json j;
  j["worlds"] = m.worlds();
  j["agents"] = m.sig().agents();
  j["props"] = m.sig().props();
  j["valuation"] = Json::object();
  for (std::size_t p = 0; p < m.sig().props().size(); ++p)
    j["valuation"][m.sig().props()[p]] = state_to_json(m.worlds(), m.valuation(p));
  j["sigma"] = Json::object();
  for (std::size_t a = 0; a < m.sig().agents().size(); ++a) {
    Json per = Json::object();
    for (std::size_t w = 0; w < m.size(); ++w) {
      Json gens = Json::array();
      for (auto g : m.Sigma(a, w).maximal()) gens.push_back(state_to_json(m.worlds(), g));
      per[m.world_name(w)] = gens;
    }
    j["sigma"][m.sig().agents()[a]] = per;
  }
  return j;
}

RelationalModel relational_from_json(const Json& j) {
  RelationalModel r;
  r.worlds = unique(names(field(j, "worlds"), "worlds"), "world");
  if (r.worlds.size() > kMaxWorlds) throw CapExceeded("worlds", r.worlds.size(), kMaxWorlds);
  r.sig = Signature(names(field(j, "agents"), "agents"),
                    j.contains("props") ? names(j.at("props"), "props") : std::vector<std::string>{});
  // States are re-sorted canonically; E indices are remapped to match.
  std::vector<InfoState> given;
  for (const auto& s : field(j, "states")) given.push_back(state_from(r.worlds, s));
  std::set<InfoState> sorted(given.begin(), given.end());
  if (sorted.size() != given.size()) throw InputError("duplicate states");
  r.states.assign(sorted.begin(), sorted.end());

  r.E.assign(r.sig.agents().size(), std::vector<std::vector<std::size_t>>(r.worlds.size()));
  const auto& ej = field(j, "E");
  for (auto it = ej.begin(); it != ej.end(); ++it) {
    auto a = r.sig.agent_index(it.key());
    for (auto wt = it.value().begin(); wt != it.value().end(); ++wt) {
      auto w = index_of(r.worlds, wt.key());
      std::set<std::size_t> idx;
      for (const auto& i : wt.value()) {
        auto k = i.get<std::size_t>();
        if (k >= given.size()) throw InputError("E refers to state " + std::to_string(k) + " out of range");
        idx.insert(r.state_index(given[k]));
      }
      r.E[a][w].assign(idx.begin(), idx.end());
    }
  }
  r.props.assign(r.sig.props().size(), InfoState{});
  if (j.contains("P"))
    for (auto it = j.at("P").begin(); it != j.at("P").end(); ++it)
      r.props[r.sig.prop_index(it.key())] = state_from(r.worlds, it.value());
  return r;
}

Json relational_to_json(const RelationalModel& r) {
  Json j;
  j["worlds"] = r.worlds;
  j["agents"] = r.sig.agents();
  j["props"] = r.sig.props();
  j["states"] = Json::array();
  for (auto s : r.states) j["states"].push_back(state_to_json(r.worlds, s));
  j["E"] = Json::object();
  for (std::size_t a = 0; a < r.sig.agents().size(); ++a) {
    Json per = Json::object();
    for (std::size_t w = 0; w < r.worlds.size(); ++w) per[r.worlds[w]] = r.E[a][w];
    j["E"][r.sig.agents()[a]] = per;
  }
  j["P"] = Json::object();
  for (std::size_t p = 0; p < r.sig.props().size(); ++p) j["P"][r.sig.props()[p]] = state_to_json(r.worlds, r.props[p]);
  return j;
}

Structure structure_from_json(const Json& j) {
  Structure s;
  for (const auto& sort : field(j, "sorts")) {
    auto id = s.add_sort(field(sort, "name").get<std::string>());
    for (const auto& e : names(field(sort, "elements"), "elements")) {
      if (s.has_element(e)) throw InputError("duplicate element '" + e + "'");
      s.add_element(id, e);
    }
  }
  if (j.contains("relations"))
    for (const auto& rel : j.at("relations")) {
      std::vector<std::size_t> sorts;
      for (const auto& name : names(field(rel, "sorts"), "sorts")) {
        auto k = s.sort_index(name);
        if (k == SIZE_MAX) throw UnknownIdentifier(name);
        sorts.push_back(k);
      }
      auto r = s.add_relation(field(rel, "name").get<std::string>(), sorts);
      for (const auto& t : field(rel, "tuples")) {
        std::vector<std::size_t> tuple;
        for (const auto& e : names(t, "tuple")) tuple.push_back(s.element_index(e));
        s.add_tuple(r, tuple);
      }
    }
  if (j.contains("points"))
    for (auto it = j.at("points").begin(); it != j.at("points").end(); ++it)
      s.set_point(it.key(), s.element_index(it.value().get<std::string>()));
  return s;
}

Json structure_to_json(const Structure& s) {
  Json j;
  j["sorts"] = Json::array();
  for (std::size_t k = 0; k < s.sort_names().size(); ++k) {
    Json el = Json::array();
    for (auto e : s.sort_elements(k)) el.push_back(s.element(e).name);
    j["sorts"].push_back({{"name", s.sort_names()[k]}, {"elements", el}});
  }
  j["relations"] = Json::array();
  for (const auto& r : s.relations()) {
    Json sorts = Json::array(), tuples = Json::array();
    for (auto k : r.sorts) sorts.push_back(s.sort_names()[k]);
    for (const auto& t : r.tuples) {
      Json tj = Json::array();
      for (auto e : t) tj.push_back(s.element(e).name);
      tuples.push_back(tj);
    }
    j["relations"].push_back({{"name", r.name}, {"sorts", sorts}, {"tuples", tuples}});
  }
  j["points"] = Json::object();
  for (const auto& [name, e] : s.points()) j["points"][name] = s.element(e).name;
  return j;
}

BlockDecomposition decomposition_from_json(const EpistemicModel& m, const Json& j) {
  BlockDecomposition d;
  for (const auto& block : field(j, "blocks")) {
    d.blocks.emplace_back();
    for (const auto& cell : block) d.blocks.back().push_back(state_from(m.worlds(), cell));
  }
  return d;
}

Json decomposition_to_json(const EpistemicModel& m, const BlockDecomposition& d) {
  Json blocks = Json::array();
  for (const auto& b : d.blocks) {
    Json cells = Json::array();
    for (auto c : b) cells.push_back(state_to_json(m.worlds(), c));
    blocks.push_back(cells);
  }
  return Json{{"blocks", blocks}};
}

Json moves_to_json(const std::vector<Move>& moves) {
  Json out = Json::array();
  for (const auto& mv : moves) out.push_back({{"mover", mv.mover}, {"choice", mv.choice}});
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

InfoState parse_state(const EpistemicModel& m, const std::string& text) {
  InfoState s;
  for (const auto& w : split(text, ',')) s = s.with(m.world_index(w));
  return s;
}

} // namespace inqkit
