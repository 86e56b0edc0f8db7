#include "inqkit/corpus.hpp"

#include "inqkit/error.hpp"

#include <algorithm>

namespace inqkit {

namespace {

// Portable bounded draw; std::uniform_int_distribution is not specified
// bit-for-bit across standard libraries.
std::size_t draw(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

const char* kAgents[] = {"a", "b", "c", "d"};
const char* kProps[] = {"p", "q", "r", "s"};

} // namespace

Signature random_signature(std::mt19937_64& rng, const CorpusParams& params) {
  if (params.max_agents == 0 || params.max_agents > 4 || params.max_props > 4)
    throw InputError("corpus supports 1 to 4 agents and at most 4 propositions");
  std::vector<std::string> agents, props;
  for (std::size_t i = 0, n = draw(rng, 1, params.max_agents); i < n; ++i) agents.push_back(kAgents[i]);
  for (std::size_t i = 0, n = draw(rng, 1, std::max<std::size_t>(1, params.max_props)); i < n; ++i)
    props.push_back(kProps[i]);
  if (params.max_props == 0) props.clear();
  return Signature(agents, props);
}

EpistemicModel random_model(std::mt19937_64& rng, const Signature& sig, const CorpusParams& params) {
  if (params.min_worlds == 0 || params.min_worlds > params.max_worlds || params.max_worlds > kMaxWorlds)
    throw InputError("bad world range for the corpus");
  // Valid by construction, but validation is the gate.
  for (;;) {
    std::size_t n = draw(rng, params.min_worlds, params.max_worlds);
    std::vector<std::string> worlds;
    for (std::size_t i = 1; i <= n; ++i) worlds.push_back("w" + std::to_string(i));
    std::vector<InfoState> val;
    for (std::size_t p = 0; p < sig.props().size(); ++p) val.push_back(InfoState(rng() & InfoState::full(n).bits()));

    std::vector<std::vector<DownwardFamily>> sigma(sig.agents().size(), std::vector<DownwardFamily>(n));
    for (auto& fams : sigma) {
      std::size_t labels = draw(rng, 1, n);
      std::vector<InfoState> classes(labels);
      for (std::size_t w = 0; w < n; ++w) {
        auto l = draw(rng, 0, labels - 1);
        classes[l] = classes[l].with(w);
      }
      for (auto cls : classes) {
        if (cls.empty()) continue;
        auto members = cls.members();
        std::vector<InfoState> gens;
        for (std::size_t g = 0, k = draw(rng, 1, params.max_generators); g < k; ++g) {
          InfoState s;
          for (auto w : members)
            if (rng() & 1u) s = s.with(w);
          if (s.empty()) s = InfoState::singleton(members[draw(rng, 0, members.size() - 1)]);
          gens.push_back(s);
        }
        // Repair factivity: every world of the class must be covered.
        for (auto w : members) {
          bool covered = false;
          for (auto g : gens) covered = covered || g.contains(w);
          if (!covered) {
            auto& g = gens[draw(rng, 0, gens.size() - 1)];
            g = g.with(w);
          }
        }
        auto fam = DownwardFamily::from_generators(gens);
        cls.for_each([&](std::size_t w) { fams[w] = fam; });
      }
    }
    EpistemicModel m(sig, worlds, val, sigma);
    if (check_frame_conditions(m).empty()) return validate_epistemic(std::move(m));
  }
}

EpistemicModel random_model(std::mt19937_64& rng, const CorpusParams& params) {
  auto sig = random_signature(rng, params);
  return random_model(rng, sig, params);
}

std::vector<EpistemicModel> corpus(std::uint64_t seed, std::size_t count, const CorpusParams& params) {
  std::mt19937_64 rng(seed);
  std::vector<EpistemicModel> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_model(rng, params));
  return out;
}

std::vector<ModelPair> corpus_pairs(std::uint64_t seed, std::size_t count, const CorpusParams& params) {
  std::mt19937_64 rng(seed);
  std::vector<ModelPair> out;
  for (std::size_t i = 0; i < count; ++i) {
    auto sig = random_signature(rng, params);
    auto a = random_model(rng, sig, params);
    auto b = random_model(rng, sig, params);
    out.push_back({std::move(a), std::move(b)});
  }
  return out;
}

} // namespace inqkit
