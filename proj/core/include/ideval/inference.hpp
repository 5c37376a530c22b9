#ifndef IDEVAL_INFERENCE_HPP
#define IDEVAL_INFERENCE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ideval/diagram.hpp"
#include "ideval/factor.hpp"

namespace ideval {

// An ordering of the variables to eliminate. It must cover exactly the
// network variables outside the query/retained set, each once.
struct EliminationOrder {
  std::vector<std::string> sequence;
};

struct InferenceResult {
  Factor marginal;       // unnormalized P(query, evidence)
  InferenceStats stats;
  int networkSize = 0;   // node count of the network the query ran on
};

// Restricts the network to the ancestral set of `targets`; marginals over
// the targets are unchanged.
InfluenceDiagram relevancePrune(const InfluenceDiagram& bn,
                                const std::set<std::string>& targets);

// Greedy min-fill elimination order over the moral graph, ties broken
// lexicographically; covers exactly the nodes outside `keep`.
EliminationOrder minFillOrder(const InfluenceDiagram& bn,
                              const std::set<std::string>& keep);

// Exact marginal computation by variable elimination. Evidence variables are
// restricted out of every table first and are excluded from elimination; the
// result is the unnormalized P(query, evidence) over the non-evidence query
// variables. When `order` is given it must cover exactly the eliminable set
// (nodes outside query and evidence); otherwise a min-fill order is used.
InferenceResult infer(const InfluenceDiagram& bn,
                      const std::set<std::string>& query,
                      const std::map<std::string, int>& evidence = {},
                      const std::optional<EliminationOrder>& order = {});

}  // namespace ideval

#endif  // IDEVAL_INFERENCE_HPP
