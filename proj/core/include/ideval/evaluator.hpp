#ifndef IDEVAL_EVALUATOR_HPP
#define IDEVAL_EVALUATOR_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ideval/decomposition.hpp"
#include "ideval/diagram.hpp"
#include "ideval/inference.hpp"

namespace ideval {

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// A lookup table mapping configurations of `scope()` (the relevant parents
// of the decision at the time it was solved) to actions.
struct DecisionRule {
  Variable decision;
  ArgTable table;
  const std::vector<Variable>& scope() const { return table.scope; }
};

// Instrumentation for one stage of an evaluation: either the work done for
// one decision (its marginal queries) or the final expected-value pass.
struct StageStats {
  std::string stage;  // decision name, or "expected-value"
  int queries = 0;
  std::vector<int> queryNetworkSizes;
  InferenceStats stats;
};

struct EvaluationResult {
  std::string method;
  double expectedValue = 0.0;
  std::vector<DecisionRule> policy;  // one rule per decision, original order
  std::vector<StageStats> stages;    // execution order; final entry is the
                                     // expected-value pass
};

struct FunctionalResult {
  Factor functional;        // over relevantParents and the decision, utility units
  Factor relevantMarginal;  // P(relevantParents) from the pruned query
  StageStats stage;
};

// Computes the decision functional of a reduced tail: one pruned marginal
// query for the relevant parents and one per encoded utility node, combined
// as scaled ratios and corrected back into true utility units. Entries whose
// parent configuration has probability zero are set to 0. When
// `conformingOrder` is given, every query eliminates in that relative order.
// The queries share no state and their statistics merge in a fixed order,
// so a caller may run them concurrently without changing the result.
FunctionalResult tailFunctional(const InfluenceDiagram& redTail,
                                const TailDecomposition& decomp,
                                const std::optional<EliminationOrder>& conformingOrder = {});

// The argmax rule read off a functional; ties resolve to the smallest action.
DecisionRule optimalRule(const Factor& functional, const Variable& decision);

struct ExpectedValueResult {
  double value = 0.0;
  StageStats stage;
};

// Expected value of a decision-free network: each utility node is encoded as
// a binary random node, queried in its pruned ancestral network, and the
// scaled results are summed.
ExpectedValueResult expectedValue(const InfluenceDiagram& valueNetwork);

enum class OrderMode {
  PerQuery,    // each query picks its own min-fill order
  Conforming,  // per stage, all queries follow one shared elimination order
};

struct EvalOptions {
  OrderMode orderMode = OrderMode::PerQuery;
};

// One shared elimination order for all of a stage's queries: min-fill over
// the reduced tail, retaining the relevant parents, the decision, and the
// encoded utility nodes.
EliminationOrder stageEliminationOrder(const InfluenceDiagram& redTail,
                                       const TailDecomposition& decomp);

// Restriction of `order` to the nodes of `subset`, preserving relative order.
EliminationOrder orderRestrictedTo(const EliminationOrder& order,
                                   const std::set<std::string>& subset);

// Evaluates an influence diagram by repeatedly solving its tail decision in
// the reduced tail and folding the result back into the body, finishing with
// an expected-value pass over the residual value network. Throws
// ValidationError when the input diagram is invalid.
EvaluationResult evaluate(const InfluenceDiagram& diagram,
                          const EvalOptions& options = {});

}  // namespace ideval

#endif  // IDEVAL_EVALUATOR_HPP
