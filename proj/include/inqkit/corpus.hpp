#pragma once

#include "inqkit/model.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace inqkit {

struct CorpusParams {
  std::size_t min_worlds = 2;
  std::size_t max_worlds = 5;
  std::size_t max_agents = 2;
  std::size_t max_props = 2;
  std::size_t max_generators = 3;  // per class
};

// Agents are "a", "b", ... and propositions "p", "q", ...; worlds "w1", ...
Signature random_signature(std::mt19937_64& rng, const CorpusParams& params = {});
EpistemicModel random_model(std::mt19937_64& rng, const Signature& sig, const CorpusParams& params = {});
EpistemicModel random_model(std::mt19937_64& rng, const CorpusParams& params = {});

std::vector<EpistemicModel> corpus(std::uint64_t seed, std::size_t count, const CorpusParams& params = {});

struct ModelPair {
  EpistemicModel first, second;
};
// Both models of a pair share one signature.
std::vector<ModelPair> corpus_pairs(std::uint64_t seed, std::size_t count, const CorpusParams& params = {});

} // namespace inqkit
