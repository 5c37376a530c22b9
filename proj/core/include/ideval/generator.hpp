#ifndef IDEVAL_GENERATOR_HPP
#define IDEVAL_GENERATOR_HPP

#include <cstdint>

#include "ideval/diagram.hpp"

namespace ideval {

// Knobs for the random-diagram generator. Generated diagrams always satisfy
// the structural constraints (acyclic, regular, no-forgetting, childless
// value nodes, normalized tables) and are rejected and redrawn until the
// exhaustive-policy caps hold, so every generated instance can be checked
// against the brute-force evaluator.
struct GeneratorConfig {
  int minDecisions = 1;
  int maxDecisions = 4;
  int minChance = 1;
  int maxChance = 8;
  int minValue = 1;
  int maxValue = 3;
  int maxCardinality = 3;
  int maxParents = 3;
  double policyCap = 4e4;
  double jointCap = 7e3;
  double costCap = 1.2e7;
};

// Deterministic in `seed` (and the config).
InfluenceDiagram generateDiagram(std::uint64_t seed, const GeneratorConfig& config = {});

// Random chance-node-only network, for inference testing.
InfluenceDiagram generateBayesNet(std::uint64_t seed, int maxNodes = 10,
                                  int maxCardinality = 3, int maxParents = 3);

// Random decision-free network with utility nodes.
InfluenceDiagram generateValueNetwork(std::uint64_t seed, int maxNodes = 8,
                                      int maxCardinality = 3, int maxValues = 3);

}  // namespace ideval

#endif  // IDEVAL_GENERATOR_HPP
