#include "inqkit/cli.hpp"

#include "inqkit/corpus.hpp"
#include "inqkit/error.hpp"
#include "inqkit/fo.hpp"
#include "inqkit/io.hpp"
#include "inqkit/transform.hpp"

#include <CLI11.hpp>

#include <functional>
#include <map>

namespace inqkit::cli {

namespace {

struct Opts {
  std::string model, model2, world, world2, state, state2, formula, depth, flavor = "lf", granularity = "1",
      target = "world", rel, left, right, abar, bbar, Pa, Pb, ca, cb, decomposition, agent, structure;
  std::size_t kappa = 1, K = 1, N = 2, ell = 1, r = 1, count = 10, cap = 0;
  std::uint64_t seed = 0;
  bool allow_invalid = false, unsafe = false, pairs = false;
  bool has_state = false, has_state2 = false, has_cap = false;
};

struct Outcome {
  Json payload;
  int code = 0;
};

std::size_t parse_depth(const std::string& s, std::size_t fallback) {
  if (s.empty()) return fallback;
  if (s == "inf" || s == "infinity" || s == "oo") return kInfinity;
  try {
    std::size_t pos = 0;
    auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw InputError("bad depth '" + s + "'");
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw InputError("bad depth '" + s + "'");
  }
}

Json depth_json(std::size_t n) { return n == kInfinity ? Json("inf") : Json(n); }

std::size_t cap_or(const Opts& o, std::size_t fallback) {
  if (!o.has_cap) return fallback;
  if (!o.unsafe) throw InputError("--cap changes a safety limit; pass --unsafe to acknowledge");
  return o.cap;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw InputError(std::string("missing ") + flag);
}

EpistemicModel load_model(const std::string& path, bool allow_invalid = false) {
  require(path, "-m");
  return model_from_json(load_json_file(path), allow_invalid);
}

Structure load_structure(const std::string& path, const char* flag) {
  require(path, flag);
  return structure_from_json(load_json_file(path));
}

std::vector<std::size_t> elements(const Structure& s, const std::string& list) {
  std::vector<std::size_t> out;
  for (const auto& e : split(list, ',')) out.push_back(s.element_index(e));
  return out;
}

std::vector<std::uint64_t> element_sets(const Structure& s, const std::string& list) {
  std::vector<std::uint64_t> out;
  for (const auto& set : split(list, '|')) {
    std::uint64_t m = 0;
    for (auto e : elements(s, set)) m |= std::uint64_t{1} << s.element(e).local;
    out.push_back(m);
  }
  return out;
}

std::vector<std::size_t> numbers(const std::string& list) {
  std::vector<std::size_t> out;
  for (const auto& x : split(list, ',')) out.push_back(parse_depth(x, 0));
  return out;
}

std::vector<std::uint64_t> index_sets(const std::string& list) {
  std::vector<std::uint64_t> out;
  for (const auto& set : split(list, '|')) {
    std::uint64_t m = 0;
    for (auto i : numbers(set)) {
      if (i >= 64) throw InputError("element index out of range");
      m |= std::uint64_t{1} << i;
    }
    out.push_back(m);
  }
  return out;
}

std::vector<std::size_t> parse_granularity(const EpistemicModel& m, const std::string& text) {
  if (text.find('=') == std::string::npos) return std::vector<std::size_t>(m.size(), parse_depth(text, 1));
  std::vector<std::size_t> g(m.size(), SIZE_MAX);
  for (const auto& item : split(text, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("granularity entries look like world=level");
    g[m.world_index(item.substr(0, eq))] = parse_depth(item.substr(eq + 1), 1);
  }
  for (std::size_t w = 0; w < m.size(); ++w)
    if (g[w] == SIZE_MAX) throw InputError("granularity lacks world " + m.world_name(w));
  return g;
}

Json verdict(const char* key, bool holds) { return Json{{key, holds}}; }

// ---------------------------------------------------------------------------

Outcome cmd_validate(const Opts& o) {
  auto m = load_model(o.model, true);
  auto vs = check_frame_conditions(m);
  Json list = Json::array();
  for (const auto& v : vs)
    list.push_back({{"kind", v.kind}, {"agent", v.agent}, {"world", v.world}, {"other", v.other},
                    {"state", v.state}, {"message", v.message()}});
  return {{{"valid", vs.empty()}, {"violations", list}}, vs.empty() ? 0 : 1};
}

Outcome cmd_eval(const Opts& o) {
  auto m = load_model(o.model);
  require(o.formula, "-f");
  if (!o.has_state) throw InputError("missing --state");
  auto f = parse(o.formula, m.sig());
  SupportEvaluator ev(m, cap_or(o, kDefaultSupportCap));
  bool ok = ev.supports(parse_state(m, o.state), f);
  return {verdict("supports", ok), ok ? 0 : 1};
}

Outcome cmd_truth(const Opts& o) {
  auto m = load_model(o.model);
  require(o.formula, "-f");
  require(o.world, "-w");
  auto f = parse(o.formula, m.sig());
  SupportEvaluator ev(m, cap_or(o, kDefaultSupportCap));
  bool ok = ev.truth(m.world_index(o.world), f);
  return {verdict("truth", ok), ok ? 0 : 1};
}

Outcome cmd_bisim(const Opts& o) {
  auto m = load_model(o.model);
  auto m2 = o.model2.empty() ? m : load_model(o.model2);
  auto n = parse_depth(o.depth, kInfinity);
  GameResult g;
  if (o.has_state) {
    auto s = parse_state(m, o.state);
    auto t = parse_state(m2, o.has_state2 ? o.state2 : o.state);
    g = bisim_game(m, s, m2, t, n);
  } else {
    require(o.world, "-w");
    auto w2 = o.world2.empty() ? o.world : o.world2;
    g = bisim_game(m, m.world_index(o.world), m2, m2.world_index(w2), n);
  }
  Json j{{"bisimilar", g.holds}, {"depth", depth_json(n)}};
  if (!g.holds) j["witness"] = moves_to_json(g.witness);
  return {j, g.holds ? 0 : 1};
}

Outcome cmd_partition(const Opts& o) {
  auto m = load_model(o.model);
  auto n = parse_depth(o.depth, kInfinity);
  Colouring c;
  std::vector<std::string> labels;
  if (o.model2.empty()) {
    c = bisim_partition(m, n);
    labels = m.worlds();
  } else {
    auto m2 = load_model(o.model2);
    c = bisim_partition(m, m2, n);
    for (const auto& w : m.worlds()) labels.push_back("M:" + w);
    for (const auto& w : m2.worlds()) labels.push_back("M':" + w);
  }
  std::vector<Json> classes(c.count, Json::array());
  Json colour = Json::object();
  for (std::size_t i = 0; i < c.colour.size(); ++i) {
    classes[c.colour[i]].push_back(labels[i]);
    colour[labels[i]] = c.colour[i];
  }
  return {{{"depth", depth_json(n)}, {"count", c.count}, {"classes", classes}, {"colour", colour}}, 0};
}

Outcome cmd_charform(const Opts& o) {
  auto m = load_model(o.model);
  auto n = parse_depth(o.depth, 0);
  if (n == kInfinity) throw InputError("characteristic formulas need a finite depth");
  auto cap = cap_or(o, kDefaultCharFormulaCap);
  Formula f;
  if (o.has_state) {
    f = char_formula(m, parse_state(m, o.state), n, cap);
  } else {
    require(o.world, "-w");
    f = char_formula(m, m.world_index(o.world), n, cap);
  }
  return {{{"formula", render(f, m.sig())}, {"nodes", f.node_count()}, {"depth", n}}, 0};
}

Outcome cmd_encode(const Opts& o) {
  auto m = load_model(o.model, o.allow_invalid);
  std::optional<InfoState> pointed;
  if (o.has_state) pointed = parse_state(m, o.state);
  auto flavor = parse_flavor(o.flavor);
  auto r = encode(m, flavor, pointed, o.allow_invalid, cap_or(o, kDefaultFullEncodingCap));
  auto j = relational_to_json(r);
  j["flavor"] = to_string(flavor);
  return {j, 0};
}

Outcome cmd_decode(const Opts& o) {
  require(o.rel, "-r");
  return {model_to_json(decode(relational_from_json(load_json_file(o.rel)))), 0};
}

Outcome cmd_validate_rel(const Opts& o) {
  require(o.rel, "-r");
  auto rep = validate_relational(relational_from_json(load_json_file(o.rel)));
  Json checks = Json::array();
  for (const auto& c : rep.checks) checks.push_back({{"condition", c.condition}, {"ok", c.ok}, {"witness", c.witness}});
  return {{{"ok", rep.ok()}, {"locally_full", rep.locally_full}, {"full", rep.full}, {"checks", checks}},
          rep.ok() ? 0 : 1};
}

Outcome cmd_translate(const Opts& o) {
  auto m = load_model(o.model);
  require(o.formula, "-f");
  Target t;
  if (o.target == "world") t = Target::world;
  else if (o.target == "state") t = Target::state;
  else throw InputError("--target is world or state");
  auto fo = standard_translation(parse(o.formula, m.sig()), m.sig(), t);
  return {{{"fo", render_fo(fo)}, {"rank", quantifier_rank(fo)}, {"free", Translator::free_var(t)}}, 0};
}

Outcome cmd_ef(const Opts& o) {
  auto a = load_structure(o.left, "-a");
  auto b = load_structure(o.right, "-b");
  auto n = parse_depth(o.depth, 0);
  auto res = ef_fo(a, elements(a, o.abar), b, elements(b, o.bbar), n);
  Json j{{"equivalent", res.holds}, {"rounds", n}};
  if (!res.holds) j["witness"] = moves_to_json(res.witness);
  return {j, res.holds ? 0 : 1};
}

Outcome cmd_mso_ef(const Opts& o) {
  auto a = load_structure(o.left, "-a");
  auto b = load_structure(o.right, "-b");
  auto n = parse_depth(o.depth, 0);
  auto res = ef_mso(a, element_sets(a, o.Pa), elements(a, o.abar), b, element_sets(b, o.Pb), elements(b, o.bbar), n,
                    cap_or(o, kDefaultMsoCap));
  Json j{{"equivalent", res.holds}, {"rounds", n}};
  if (!res.holds) j["witness"] = moves_to_json(res.witness);
  return {j, res.holds ? 0 : 1};
}

Outcome cmd_threshold(const Opts& o) {
  ColouredSet a{numbers(o.ca)}, b{numbers(o.cb)};
  auto d = parse_depth(o.depth, 1);
  bool ok = threshold_equiv(a, index_sets(o.Pa), b, index_sets(o.Pb), d);
  return {{{"equivalent", ok}, {"cutoff", d}}, ok ? 0 : 1};
}

Outcome cmd_explode(const Opts& o) {
  auto m = load_model(o.model);
  auto cap = cap_or(o, kDefaultClassCap);
  ExplodedView v;
  if (o.has_state) v = exploded_view(m, parse_state(m, o.state), cap);
  else if (!o.world.empty()) v = exploded_view(m, m.world_index(o.world), cap);
  else v = exploded_view(m, std::nullopt, cap);
  return {structure_to_json(v.structure), 0};
}

Outcome cmd_recover(const Opts& o) {
  auto x = load_structure(o.structure, "-x");
  return {relational_to_json(recover_from_exploded(x)), 0};
}

Outcome cmd_union(const Opts& o) {
  auto m = load_model(o.model);
  require(o.model2, "-M");
  return {model_to_json(disjoint_union(m, load_model(o.model2))), 0};
}

Outcome cmd_cover(const Opts& o) {
  auto c = rich_cover(load_model(o.model), o.K);
  auto rep = verify_covering(c);
  Json pi = Json::object();
  for (std::size_t v = 0; v < c.pi.size(); ++v) pi[c.source.world_name(v)] = c.target.world_name(c.pi[v]);
  Json j{{"source", model_to_json(c.source)}, {"pi", pi}, {"verified", rep.ok}};
  if (!rep.ok) j["failure"] = {{"condition", rep.failure}, {"witness", rep.witness}};
  return {j, rep.ok ? 0 : 1};
}

Outcome cmd_rich(const Opts& o) {
  bool ok = is_k_rich(load_model(o.model), o.K);
  return {{{"rich", ok}, {"K", o.K}}, ok ? 0 : 1};
}

Outcome cmd_dummy(const Opts& o) {
  auto m = load_model(o.model);
  if (!o.has_state) throw InputError("missing --state");
  return {model_to_json(dummy_agent_expand(m, parse_state(m, o.state))), 0};
}

Outcome cmd_regularize(const Opts& o) {
  auto m = load_model(o.model);
  auto res = regularize(m, o.kappa, parse_granularity(m, o.granularity), o.K);
  Json classes = Json::array();
  for (const auto& c : res.classes) {
    auto d = decomposition_to_json(m, c.decomposition);
    d["agent"] = m.sig().agents()[c.agent];
    d["class"] = state_to_json(m.worlds(), c.cls);
    d["level"] = depth_json(c.level);
    classes.push_back(d);
  }
  return {{{"model", model_to_json(res.model)}, {"decompositions", classes}}, 0};
}

Outcome cmd_bstruct(const Opts& o) {
  auto m = load_model(o.model);
  require(o.world, "-w");
  require(o.agent, "--agent");
  require(o.decomposition, "-d");
  auto level = parse_depth(o.depth, 1);
  auto l = local_structure(m, m.world_index(o.world), m.sig().agent_index(o.agent), level);
  auto d = decomposition_from_json(m, load_json_file(o.decomposition));
  auto b = b_structure(l, o.kappa, d);
  auto j = structure_to_json(b);
  j["membership"] = render_fo(b_membership_formula(b));
  return {j, 0};
}

Outcome cmd_acyclic(const Opts& o) {
  bool ok = is_n_acyclic(kripke_companion(load_model(o.model)), o.N);
  return {{{"acyclic", ok}, {"N", o.N}}, ok ? 0 : 1};
}

Outcome cmd_localequiv(const Opts& o) {
  auto a = load_structure(o.left, "-a");
  auto b = load_structure(o.right, "-b");
  require(o.abar, "--abar");
  require(o.bbar, "--bbar");
  auto res = local_equiv(a, a.element_index(o.abar), b, b.element_index(o.bbar), o.ell, o.r);
  Json j{{"equivalent", res.holds}, {"ell", o.ell}, {"r", o.r}};
  if (!res.holds) j["witness"] = moves_to_json(res.witness);
  return {j, res.holds ? 0 : 1};
}

Outcome cmd_corpus(const Opts& o) {
  Json models = Json::array();
  if (o.pairs) {
    for (auto& p : corpus_pairs(o.seed, o.count)) models.push_back(Json::array({model_to_json(p.first), model_to_json(p.second)}));
  } else {
    for (auto& m : corpus(o.seed, o.count)) models.push_back(model_to_json(m));
  }
  return {{{"seed", o.seed}, {"count", o.count}, {"models", models}}, 0};
}

using Handler = std::function<Outcome(const Opts&)>;

struct Command {
  const char* name;
  const char* help;
  const char* flags;  // which options apply
  Handler run;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> cmds = {
      {"validate", "check the frame conditions of a model file", "m", cmd_validate},
      {"eval", "support of a formula at a state", "m state f cap", cmd_eval},
      {"truth", "truth of a formula at a world", "m w f cap", cmd_truth},
      {"bisim", "n-bisimilarity of worlds or states, with a witness play", "m M w W state state2 n", cmd_bisim},
      {"partition", "level-n bisimulation colouring", "m M n", cmd_partition},
      {"charform", "characteristic formula of a world or state", "m w state n cap", cmd_charform},
      {"encode", "relational encoding of a model", "m flavor state allow-invalid cap", cmd_encode},
      {"decode", "decode a relational model", "r", cmd_decode},
      {"validate-rel", "check the relational-model conditions", "r", cmd_validate_rel},
      {"translate", "standard translation of a formula", "m f target", cmd_translate},
      {"ef", "first-order pebble game", "a b abar bbar n", cmd_ef},
      {"mso-ef", "monadic second-order game", "a b abar bbar Pa Pb n cap", cmd_mso_ef},
      {"threshold", "threshold equivalence of coloured sets", "ca cb Pa Pb n", cmd_threshold},
      {"explode", "exploded view of a model", "m w state cap", cmd_explode},
      {"recover", "relational model from an exploded view", "x", cmd_recover},
      {"union", "disjoint union of two models", "m M", cmd_union},
      {"cover", "K-fold product covering", "m K", cmd_cover},
      {"rich", "K-richness check", "m K", cmd_rich},
      {"dummy", "dummy-agent expansion at a state", "m state", cmd_dummy},
      {"regularize", "kappa-regular, K-rich bisimilar companion", "m kappa granularity K", cmd_regularize},
      {"bstruct", "b-structure of a regular local structure", "m w agent n kappa d", cmd_bstruct},
      {"acyclic", "N-acyclicity of the underlying frame", "m N", cmd_acyclic},
      {"localequiv", "game on Gaifman neighbourhoods", "a b abar bbar ell rank", cmd_localequiv},
      {"corpus", "seeded random models", "seed count pairs", cmd_corpus},
  };
  return cmds;
}

void add_flags(CLI::App* sub, const std::string& flags, Opts& o) {
  std::map<std::string, std::function<void()>> table = {
      {"m", [&] { sub->add_option("-m,--model", o.model, "model file"); }},
      {"M", [&] { sub->add_option("-M,--model2", o.model2, "second model file"); }},
      {"w", [&] { sub->add_option("-w,--world", o.world, "world"); }},
      {"W", [&] { sub->add_option("-W,--world2", o.world2, "world of the second model"); }},
      {"state", [&] { sub->add_option("--state", o.state, "comma-separated worlds")->each([&](const std::string&) { o.has_state = true; }); }},
      {"state2", [&] { sub->add_option("--state2", o.state2, "state of the second model")->each([&](const std::string&) { o.has_state2 = true; }); }},
      {"f", [&] { sub->add_option("-f,--formula", o.formula, "formula"); }},
      {"n", [&] { sub->add_option("-n,--depth", o.depth, "depth, rounds or level (inf allowed)"); }},
      {"flavor", [&] { sub->add_option("--flavor", o.flavor, "minimal, locally_full or full"); }},
      {"allow-invalid", [&] { sub->add_flag("--allow-invalid", o.allow_invalid, "admit models failing validation"); }},
      {"cap", [&] { sub->add_option("--cap", o.cap, "override the size limit (needs --unsafe)")->each([&](const std::string&) { o.has_cap = true; });
                    sub->add_flag("--unsafe", o.unsafe, "acknowledge a raised limit"); }},
      {"r", [&] { sub->add_option("-r,--relational", o.rel, "relational model file"); }},
      {"target", [&] { sub->add_option("--target", o.target, "world or state"); }},
      {"a", [&] { sub->add_option("-a,--left", o.left, "left structure file"); }},
      {"b", [&] { sub->add_option("-b,--right", o.right, "right structure file"); }},
      {"abar", [&] { sub->add_option("--abar", o.abar, "left parameters (element names)"); }},
      {"bbar", [&] { sub->add_option("--bbar", o.bbar, "right parameters (element names)"); }},
      {"Pa", [&] { sub->add_option("--Pa", o.Pa, "left set parameters, sets separated by |"); }},
      {"Pb", [&] { sub->add_option("--Pb", o.Pb, "right set parameters, sets separated by |"); }},
      {"ca", [&] { sub->add_option("--ca", o.ca, "left colours, one per element"); }},
      {"cb", [&] { sub->add_option("--cb", o.cb, "right colours, one per element"); }},
      {"x", [&] { sub->add_option("-x,--structure", o.structure, "structure file"); }},
      {"K", [&] { sub->add_option("--K", o.K, "richness"); }},
      {"N", [&] { sub->add_option("--N", o.N, "cycle length bound"); }},
      {"kappa", [&] { sub->add_option("--kappa", o.kappa, "number of blocks"); }},
      {"granularity", [&] { sub->add_option("--granularity", o.granularity, "level, or world=level list"); }},
      {"agent", [&] { sub->add_option("--agent", o.agent, "agent"); }},
      {"d", [&] { sub->add_option("-d,--decomposition", o.decomposition, "block decomposition file"); }},
      {"rank", [&] { sub->add_option("--r", o.r, "quantifier rank"); }},
      {"ell", [&] { sub->add_option("--ell", o.ell, "neighbourhood radius"); }},
      {"seed", [&] { sub->add_option("--seed", o.seed, "random seed"); }},
      {"count", [&] { sub->add_option("--count", o.count, "number of models"); }},
      {"pairs", [&] { sub->add_flag("--pairs", o.pairs, "emit pairs sharing a signature"); }},
  };
  for (const auto& f : split(flags, ' ')) {
    table.at(f)();
  }
}

Json error_json(const std::string& command, const std::string& kind, const std::string& message) {
  return {{"command", command}, {"error", {{"kind", kind}, {"message", message}}}};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"inqkit: inquisitive epistemic modal logic toolkit", "inqkit"};
  app.require_subcommand(1);
  Opts o;
  std::map<CLI::App*, const Command*> subs;
  for (const auto& c : commands()) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_flags(sub, c.flags, o);
    subs[sub] = &c;
  }

  std::vector<const char*> argv{"inqkit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    out << error_json("", "UsageError", e.what()).dump(2) << "\n";
    err << "inqkit: " << e.what() << "\n";
    return 2;
  }

  const Command* cmd = nullptr;
  for (auto& [sub, c] : subs)
    if (sub->parsed()) cmd = c;
  std::string name = cmd->name;
  try {
    auto res = cmd->run(o);
    res.payload["command"] = name;
    out << res.payload.dump(2) << "\n";
    return res.code;
  } catch (const InsufficientRichness& e) {
    // A failed construction, not bad input.
    out << error_json(name, e.kind(), e.what()).dump(2) << "\n";
    return 1;
  } catch (const Error& e) {
    out << error_json(name, e.kind(), e.what()).dump(2) << "\n";
    err << "inqkit " << name << ": " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    out << error_json(name, "InputError", e.what()).dump(2) << "\n";
    err << "inqkit " << name << ": " << e.what() << "\n";
    return 2;
  }
}

} // namespace inqkit::cli
