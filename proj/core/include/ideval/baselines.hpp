#ifndef IDEVAL_BASELINES_HPP
#define IDEVAL_BASELINES_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "ideval/evaluator.hpp"

namespace ideval {

// Raised when a method cannot be applied to the given diagram (wrong shape
// or configured resource caps exceeded).
class MethodError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The working state of the fusion elimination: a list of probability factors
// and a list of signed utility factors. `fuse` is the only mutator.
struct FactorLists {
  std::vector<Factor> probabilities;
  std::vector<Factor> utilities;
};

// One fusion step for variable x. Probability factors involving x are
// multiplied and summed; utility factors involving x are summed, combined
// with that probability product, summed over x, and renormalized by the new
// probability factor (0/0 taken as 0). When no probability factor involves
// x, the product is the empty product and the normalizer is |frame(x)|.
void fuse(FactorLists& lists, const Variable& x, InferenceStats* stats = nullptr);

// Fusion counterpart of tailFunctional: fuses every downstream non-utility
// node in `order`, then reads the functional off the summed utility list and
// the marginal off the multiplied probability list. `order` must cover
// exactly the reduced tail's nodes outside the retained set (relevant
// parents, decision, encoded utility nodes).
FunctionalResult fusionTailFunctional(const InfluenceDiagram& redTail,
                                      const TailDecomposition& decomp,
                                      const EliminationOrder& order);

// Fusion counterpart of expectedValue: fuses every random node of a
// decision-free network and sums the surviving utility factors.
ExpectedValueResult fusionExpectedValue(const InfluenceDiagram& valueNetwork,
                                        const std::optional<EliminationOrder>& order = {});

// Full evaluation with the fusion functional substituted stage by stage.
EvaluationResult evaluateFusion(const InfluenceDiagram& diagram);

// The single-value-node method: the utility is encoded as a binary random
// node, decisions get uniform tables over their full parent sets, and each
// decision (last first) is solved from the evidence-conditioned joint over
// itself and all its parents, then frozen into the network as a
// deterministic table. Requires exactly one value node.
EvaluationResult evaluateShachterPeot(const InfluenceDiagram& diagram);

struct BruteForceCaps {
  double policyCap = 1e6;  // number of policies over full parent scopes
  double jointCap = 1e6;   // chance-configuration count
  double costCap = 2e8;    // policies x configurations
};

// Exhaustive policy enumeration with expected utility computed by direct
// summation over chance configurations; independent of the table algebra
// and elimination machinery. Ties resolve to the lexicographically first
// policy encoding.
EvaluationResult evaluateBruteForce(const InfluenceDiagram& diagram,
                                    const BruteForceCaps& caps = {});

// Expected utility of a fixed policy, by the same direct summation. Rules
// may have reduced scopes; every decision needs exactly one rule.
double policyValue(const InfluenceDiagram& diagram,
                   const std::vector<DecisionRule>& policy);

struct MethodRow {
  std::string method;
  bool ran = false;
  std::string note;  // e.g. "skipped (cap)" or "skipped (needs one value node)"
  double expectedValue = 0.0;
  long long multiplications = 0;
  long long additions = 0;
  long long divisions = 0;
  int maxFactorSize = 0;
};

// Per-stage instrumentation of the reduction queries against one fusion pass
// over the same reduced tail with a conforming elimination order.
// `elim` counts are the multiplications performed inside the elimination
// loops; the final assembly products are excluded on both sides.
struct StageComparison {
  std::string decision;
  int valueNodeCount = 0;  // utility nodes in the tail (the m of the bound)
  long long reductionElimMults = 0;
  long long fusionElimMults = 0;
  long long reductionMults = 0;
  long long fusionMults = 0;
  int reductionMaxFactor = 0;
  int fusionMaxFactor = 0;
  double ratio = 1.0;  // reductionElimMults / fusionElimMults, 1 when both 0
  bool multiplicationBoundHolds = false;  // reduction <= (1+m) * fusion
  bool factorSizeBoundHolds = false;
  double functionalGap = 0.0;  // max |e difference| on positive-probability rows
};

struct ComparisonReport {
  std::vector<MethodRow> methods;
  std::vector<StageComparison> stages;
  double maxRatio = 1.0;
  bool multiplicationBoundHolds = true;
  bool factorSizeBoundHolds = true;
  double maxValueGap = 0.0;  // largest expected-value spread among methods run
};

// Runs every applicable method plus the per-stage paired instrumentation.
ComparisonReport compareMethods(const InfluenceDiagram& diagram,
                                bool includeOracle,
                                const BruteForceCaps& caps = {});

}  // namespace ideval

#endif  // IDEVAL_BASELINES_HPP
