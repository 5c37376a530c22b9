#include "ideval/evaluator.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace ideval {

namespace {

std::string describe(const ValidationReport& report) {
  std::string msg = "invalid diagram:";
  for (const auto& v : report.violations) msg += " [" + v.message + "]";
  return msg;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(describe(report)), report_(std::move(report)) {}

FunctionalResult tailFunctional(const InfluenceDiagram& redTail,
                                const TailDecomposition& decomp,
                                const std::optional<EliminationOrder>& conformingOrder) {
  FunctionalResult out;
  StageStats& stage = out.stage;
  stage.stage = decomp.decision;

  const Variable decisionVar = redTail.node(decomp.decision).variable();
  std::vector<Variable> fullScope;
  for (const auto& p : decomp.relevantParents)
    fullScope.push_back(redTail.node(p).variable());
  fullScope.push_back(decisionVar);
  std::sort(fullScope.begin(), fullScope.end());

  auto subOrder = [&](const InfluenceDiagram& net,
                      const std::set<std::string>& retained)
      -> std::optional<EliminationOrder> {
    if (!conformingOrder) return std::nullopt;
    std::set<std::string> eliminable;
    for (const auto& n : net.nodes())
      if (!retained.count(n.name)) eliminable.insert(n.name);
    return orderRestrictedTo(*conformingOrder, eliminable);
  };

  // Marginal of the relevant parents, with the isolated decision pruned away
  // by the ancestral restriction.
  InfluenceDiagram parentNet = relevancePrune(redTail, decomp.relevantParents);
  InferenceResult parentRun =
      infer(parentNet, decomp.relevantParents, {},
            subOrder(parentNet, decomp.relevantParents));
  out.relevantMarginal = parentRun.marginal;
  stage.stats.merge(parentRun.stats);
  stage.queryNetworkSizes.push_back(parentRun.networkSize);
  ++stage.queries;

  // One evidence-restricted query per encoded utility node.
  Factor numerator(0.0);
  double shiftTotal = 0.0;
  std::set<std::string> querySet = decomp.relevantParents;
  querySet.insert(decomp.decision);
  for (const auto& v : decomp.tailValues) {
    const Node& vn = redTail.node(v);
    if (!vn.encoding)
      throw std::logic_error("tail node '" + v + "' lacks a utility encoding");
    std::set<std::string> targets = querySet;
    targets.insert(v);
    InfluenceDiagram valueNet = relevancePrune(redTail, targets);
    std::set<std::string> retained = querySet;
    retained.insert(v);
    InferenceResult run =
        infer(valueNet, querySet, {{v, 1}}, subOrder(valueNet, retained));
    stage.stats.merge(run.stats);
    stage.queryNetworkSizes.push_back(run.networkSize);
    ++stage.queries;
    numerator = add(numerator, scale(run.marginal, vn.encoding->scale, &stage.stats),
                    &stage.stats);
    shiftTotal += vn.encoding->shift;
  }

  Factor denominator =
      scale(out.relevantMarginal, 1.0 / decisionVar.cardinality, &stage.stats);
  Factor raw = divide(expandTo(numerator, fullScope), denominator, &stage.stats);

  // Undo the nonnegativity shifts so entries are true expected utilities,
  // and pin entries at probability-zero parent configurations to 0.
  Factor denFull = expandTo(denominator, fullScope);
  std::vector<double> vals = raw.values();
  for (std::size_t i = 0; i < vals.size(); ++i)
    vals[i] = denFull.values()[i] > 0.0 ? vals[i] - shiftTotal : 0.0;
  if (shiftTotal != 0.0) stage.stats.additions += static_cast<long long>(vals.size());
  out.functional = Factor(raw.scope(), std::move(vals));
  return out;
}

DecisionRule optimalRule(const Factor& functional, const Variable& decision) {
  auto [maxed, table] = maxOut(functional, decision);
  (void)maxed;
  DecisionRule rule;
  rule.decision = decision;
  rule.table = std::move(table);
  return rule;
}

ExpectedValueResult expectedValue(const InfluenceDiagram& valueNetwork) {
  if (valueNetwork.decisionCount() != 0)
    throw std::invalid_argument("expectedValue requires a decision-free network");

  std::vector<Node> transformed;
  std::vector<std::string> valueNames;
  for (const auto& n : valueNetwork.nodes()) {
    if (n.kind == NodeKind::Value) {
      transformed.push_back(cooperTransform(n));
      valueNames.push_back(n.name);
    } else {
      transformed.push_back(n);
    }
  }
  std::sort(valueNames.begin(), valueNames.end());
  InfluenceDiagram bn(std::move(transformed));

  ExpectedValueResult out;
  out.stage.stage = "expected-value";
  for (const auto& v : valueNames) {
    const UtilityEncoding& enc = *bn.node(v).encoding;
    InfluenceDiagram pruned = relevancePrune(bn, {v});
    InferenceResult run = infer(pruned, {}, {{v, 1}});
    out.stage.stats.merge(run.stats);
    out.stage.queryNetworkSizes.push_back(run.networkSize);
    ++out.stage.queries;
    out.value += run.marginal.scalarValue() * enc.scale - enc.shift;
  }
  return out;
}

EliminationOrder stageEliminationOrder(const InfluenceDiagram& redTail,
                                       const TailDecomposition& decomp) {
  std::set<std::string> keep = decomp.relevantParents;
  keep.insert(decomp.decision);
  for (const auto& v : decomp.tailValues) keep.insert(v);
  return minFillOrder(redTail, keep);
}

EliminationOrder orderRestrictedTo(const EliminationOrder& order,
                                   const std::set<std::string>& subset) {
  EliminationOrder out;
  for (const auto& x : order.sequence)
    if (subset.count(x)) out.sequence.push_back(x);
  if (out.sequence.size() != subset.size())
    throw std::invalid_argument("order does not cover the requested subset");
  return out;
}

EvaluationResult evaluate(const InfluenceDiagram& diagram, const EvalOptions& options) {
  ValidationReport report = validate(diagram);
  if (!report.ok()) throw ValidationError(std::move(report));

  EvaluationResult result;
  result.method = "reduction";
  const std::vector<std::string> originalOrder = diagram.decisionOrder();
  std::map<std::string, DecisionRule> rules;

  InfluenceDiagram current = pruneBarren(diagram);
  while (current.decisionCount() > 0) {
    const std::string d = tailDecisionNode(current);
    const TailDecomposition decomp = decompose(current, d);
    const InfluenceDiagram rt = reducedTail(current, decomp);

    std::optional<EliminationOrder> order;
    if (options.orderMode == OrderMode::Conforming)
      order = stageEliminationOrder(rt, decomp);

    FunctionalResult fr = tailFunctional(rt, decomp, order);
    rules.emplace(d, optimalRule(fr.functional, current.node(d).variable()));
    result.stages.push_back(std::move(fr.stage));

    InfluenceDiagram next = augmentedBody(current, decomp, fr.functional);
    if (!decomp.parents2.empty())
      next = reducedBody(next, fr.relevantMarginal, rt, decomp);
    current = pruneBarren(next);
  }

  ExpectedValueResult ev = expectedValue(current);
  result.expectedValue = ev.value;
  result.stages.push_back(std::move(ev.stage));
  for (const auto& d : originalOrder) result.policy.push_back(rules.at(d));
  return result;
}

}  // namespace ideval
