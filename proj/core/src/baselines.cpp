#include "ideval/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace ideval {

namespace {

Factor uniformConditional(const InfluenceDiagram& diagram, const Node& decision) {
  std::vector<Variable> scope;
  for (const auto& p : decision.parents)
    scope.push_back(diagram.node(p).variable());
  scope.push_back(decision.variable());
  std::size_t n = 1;
  for (const auto& v : scope) n *= static_cast<std::size_t>(v.cardinality);
  std::vector<double> vals(n, 1.0 / decision.cardinality);
  return Factor(std::move(scope), std::move(vals));
}

// Deterministic table over {scope(rule), decision} selecting the rule's
// action with probability one.
Factor ruleTable(const DecisionRule& rule) {
  std::vector<Variable> scope = rule.table.scope;
  scope.push_back(rule.decision);
  const int card = rule.decision.cardinality;
  std::vector<double> vals(
      rule.table.choices.size() * static_cast<std::size_t>(card), 0.0);
  for (std::size_t row = 0; row < rule.table.choices.size(); ++row)
    vals[row * static_cast<std::size_t>(card) +
         static_cast<std::size_t>(rule.table.choices[row])] = 1.0;
  return Factor(std::move(scope), std::move(vals));
}

InfluenceDiagram replaceTable(const InfluenceDiagram& diagram,
                              const std::string& name, Factor table,
                              NodeKind kind) {
  std::vector<Node> nodes = diagram.nodes();
  for (auto& n : nodes) {
    if (n.name != name) continue;
    n.table = std::move(table);
    n.kind = kind;
    break;
  }
  return InfluenceDiagram(std::move(nodes));
}

// Expected utility by direct summation over chance configurations, reading
// the node tables entry by entry. No factor algebra and no elimination: this
// is the reference route the elimination-based methods are checked against.
class DirectEvaluator {
 public:
  explicit DirectEvaluator(const InfluenceDiagram& diagram) : diagram_(diagram) {
    const auto& nodes = diagram.nodes();
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) pos_[nodes[i].name] = i;
    for (const auto& name : diagram.topologicalOrder()) {
      const Node& n = diagram.node(name);
      if (n.kind != NodeKind::Value) topo_.push_back(pos_[name]);
      if (n.kind == NodeKind::Random) chance_.push_back(pos_[name]);
    }
    for (const auto& n : nodes) {
      if (n.kind == NodeKind::Value) values_.push_back(pos_[n.name]);
      Plan plan;
      if (n.kind != NodeKind::Decision) {
        const auto& scope = n.table.scope();
        for (std::size_t i = 0; i < scope.size(); ++i) {
          plan.nodeOf.push_back(pos_.at(scope[i].name));
          plan.strides.push_back(n.table.strides()[i]);
        }
      }
      plans_.push_back(std::move(plan));
    }
  }

  long double chanceConfigurations() const {
    long double total = 1;
    for (int c : chance_) total *= diagram_.nodes()[c].cardinality;
    return total;
  }

  // rules: node index of each decision -> its rule; every decision covered.
  double expectedUtility(const std::map<int, const DecisionRule*>& rules) const {
    const auto& nodes = diagram_.nodes();
    std::map<int, Plan> rulePlans;
    for (const auto& [idx, rule] : rules) rulePlans[idx] = planFor(*rule);

    std::vector<int> state(nodes.size(), 0);
    std::vector<int> counter(chance_.size(), 0);
    double eu = 0.0;
    for (;;) {
      for (std::size_t i = 0; i < chance_.size(); ++i) state[chance_[i]] = counter[i];
      double prob = 1.0;
      for (int idx : topo_) {
        const Node& n = nodes[idx];
        if (n.kind == NodeKind::Decision) {
          const DecisionRule* rule = rules.at(idx);
          state[idx] = rule->table.choices[planIndex(rulePlans.at(idx), state)];
        } else {
          prob *= n.table.values()[planIndex(plans_[idx], state)];
          if (prob == 0.0) break;
        }
      }
      if (prob != 0.0) {
        double util = 0.0;
        for (int v : values_)
          util += nodes[v].table.values()[planIndex(plans_[v], state)];
        eu += prob * util;
      }
      std::size_t j = chance_.size();
      for (;;) {
        if (j == 0) return eu;
        --j;
        if (++counter[j] < nodes[chance_[j]].cardinality) break;
        counter[j] = 0;
      }
    }
  }

  int nodeIndex(const std::string& name) const {
    auto it = pos_.find(name);
    if (it == pos_.end())
      throw std::invalid_argument("unknown node '" + name + "'");
    return it->second;
  }

 private:
  struct Plan {
    std::vector<int> nodeOf;
    std::vector<std::size_t> strides;
  };

  Plan planFor(const DecisionRule& rule) const {
    Plan plan;
    std::vector<std::size_t> strides(rule.table.scope.size(), 1);
    for (std::size_t i = rule.table.scope.size(); i-- > 1;)
      strides[i - 1] =
          strides[i] * static_cast<std::size_t>(rule.table.scope[i].cardinality);
    for (std::size_t i = 0; i < rule.table.scope.size(); ++i) {
      plan.nodeOf.push_back(pos_.at(rule.table.scope[i].name));
      plan.strides.push_back(strides[i]);
    }
    return plan;
  }

  static std::size_t planIndex(const Plan& plan, const std::vector<int>& state) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < plan.nodeOf.size(); ++i)
      idx += plan.strides[i] * static_cast<std::size_t>(state[plan.nodeOf[i]]);
    return idx;
  }

  const InfluenceDiagram& diagram_;
  std::map<std::string, int> pos_;
  std::vector<int> topo_;
  std::vector<int> chance_;
  std::vector<int> values_;
  std::vector<Plan> plans_;
};

InferenceStats aggregateStats(const EvaluationResult& r) {
  InferenceStats total;
  for (const auto& s : r.stages) total.merge(s.stats);
  return total;
}

MethodRow rowFrom(const EvaluationResult& r) {
  MethodRow row;
  row.method = r.method;
  row.ran = true;
  row.expectedValue = r.expectedValue;
  InferenceStats t = aggregateStats(r);
  row.multiplications = t.multiplications;
  row.additions = t.additions;
  row.divisions = t.divisions;
  row.maxFactorSize = t.maxFactorSize;
  return row;
}

}  // namespace

void fuse(FactorLists& lists, const Variable& x, InferenceStats* stats) {
  std::vector<Factor> pInvolved, pRest;
  for (auto& f : lists.probabilities) {
    if (f.inScope(x.name))
      pInvolved.push_back(std::move(f));
    else
      pRest.push_back(std::move(f));
  }
  lists.probabilities = std::move(pRest);

  Factor prod;        // product of the probability factors involving x
  Factor normalizer;  // what the utility update divides by
  const bool anyP = !pInvolved.empty();
  if (anyP) {
    prod = productAll(pInvolved, stats);
    if (stats && pInvolved.size() == 1) stats->noteFactor(prod.scope().size());
    normalizer = sumOut(prod, x, stats);
    lists.probabilities.push_back(normalizer);
  } else {
    normalizer = Factor(static_cast<double>(x.cardinality));
  }

  std::vector<Factor> fInvolved, fRest;
  for (auto& f : lists.utilities) {
    if (f.inScope(x.name))
      fInvolved.push_back(std::move(f));
    else
      fRest.push_back(std::move(f));
  }
  lists.utilities = std::move(fRest);
  if (fInvolved.empty()) return;

  Factor fsum = addAll(fInvolved, stats);
  Factor combined = anyP ? product(fsum, prod, stats) : std::move(fsum);
  Factor summed = sumOut(combined, x, stats);
  lists.utilities.push_back(divide(summed, normalizer, stats));
}

FunctionalResult fusionTailFunctional(const InfluenceDiagram& redTail,
                                      const TailDecomposition& decomp,
                                      const EliminationOrder& order) {
  FunctionalResult out;
  StageStats& stage = out.stage;
  stage.stage = decomp.decision;
  stage.queries = 1;
  stage.queryNetworkSizes.push_back(static_cast<int>(redTail.nodes().size()));

  std::set<std::string> expect;
  for (const auto& n : redTail.nodes())
    if (!decomp.relevantParents.count(n.name) && n.name != decomp.decision &&
        !decomp.tailValues.count(n.name))
      expect.insert(n.name);
  std::set<std::string> got(order.sequence.begin(), order.sequence.end());
  if (got != expect || got.size() != order.sequence.size())
    throw std::invalid_argument(
        "order does not cover the downstream non-utility nodes");

  FactorLists lists;
  for (const auto& n : redTail.nodes()) {
    if (n.encoding) {
      lists.utilities.push_back(n.encoding->utility);
      stage.stats.noteFactor(n.encoding->utility.scope().size());
    } else {
      lists.probabilities.push_back(n.table);
      stage.stats.noteFactor(n.table.scope().size());
    }
  }

  for (const auto& x : order.sequence)
    fuse(lists, redTail.node(x).variable(), &stage.stats);
  stage.stats.eliminationMultiplications = stage.stats.multiplications;

  const Variable decisionVar = redTail.node(decomp.decision).variable();
  std::vector<Variable> fullScope;
  for (const auto& p : decomp.relevantParents)
    fullScope.push_back(redTail.node(p).variable());
  fullScope.push_back(decisionVar);
  std::sort(fullScope.begin(), fullScope.end());

  Factor pProduct = productAll(lists.probabilities, &stage.stats);
  stage.stats.noteFactor(pProduct.scope().size());
  Factor eSum = addAll(lists.utilities, &stage.stats);
  out.functional = expandTo(eSum, fullScope);
  out.relevantMarginal =
      sumOut(expandTo(pProduct, fullScope), decisionVar, &stage.stats);
  return out;
}

ExpectedValueResult fusionExpectedValue(const InfluenceDiagram& valueNetwork,
                                        const std::optional<EliminationOrder>& order) {
  if (valueNetwork.decisionCount() != 0)
    throw std::invalid_argument(
        "fusionExpectedValue requires a decision-free network");
  ExpectedValueResult out;
  out.stage.stage = "expected-value";
  out.stage.queries = 1;
  out.stage.queryNetworkSizes.push_back(
      static_cast<int>(valueNetwork.nodes().size()));

  EliminationOrder rho;
  if (order) {
    rho = *order;
  } else {
    std::set<std::string> keep;
    for (const auto& n : valueNetwork.nodes())
      if (n.kind == NodeKind::Value) keep.insert(n.name);
    rho = minFillOrder(valueNetwork, keep);
  }

  FactorLists lists;
  for (const auto& n : valueNetwork.nodes()) {
    if (n.kind == NodeKind::Value)
      lists.utilities.push_back(n.table);
    else
      lists.probabilities.push_back(n.table);
    out.stage.stats.noteFactor(n.table.scope().size());
  }
  for (const auto& x : rho.sequence)
    fuse(lists, valueNetwork.node(x).variable(), &out.stage.stats);
  out.stage.stats.eliminationMultiplications = out.stage.stats.multiplications;

  Factor total = addAll(lists.utilities, &out.stage.stats);
  out.value = total.isScalar() ? total.scalarValue() : total.sum();
  return out;
}

EvaluationResult evaluateFusion(const InfluenceDiagram& diagram) {
  ValidationReport report = validate(diagram);
  if (!report.ok()) throw ValidationError(std::move(report));

  EvaluationResult result;
  result.method = "fusion";
  const std::vector<std::string> originalOrder = diagram.decisionOrder();
  std::map<std::string, DecisionRule> rules;

  InfluenceDiagram current = pruneBarren(diagram);
  while (current.decisionCount() > 0) {
    const std::string d = tailDecisionNode(current);
    const TailDecomposition decomp = decompose(current, d);
    const InfluenceDiagram rt = reducedTail(current, decomp);
    FunctionalResult fr =
        fusionTailFunctional(rt, decomp, stageEliminationOrder(rt, decomp));
    rules.emplace(d, optimalRule(fr.functional, current.node(d).variable()));
    result.stages.push_back(std::move(fr.stage));

    InfluenceDiagram next = augmentedBody(current, decomp, fr.functional);
    if (!decomp.parents2.empty())
      next = reducedBody(next, fr.relevantMarginal, rt, decomp);
    current = pruneBarren(next);
  }

  ExpectedValueResult ev = fusionExpectedValue(current);
  result.expectedValue = ev.value;
  result.stages.push_back(std::move(ev.stage));
  for (const auto& d : originalOrder) result.policy.push_back(rules.at(d));
  return result;
}

EvaluationResult evaluateShachterPeot(const InfluenceDiagram& diagram) {
  ValidationReport report = validate(diagram);
  if (!report.ok()) throw ValidationError(std::move(report));

  InfluenceDiagram pruned = pruneBarren(diagram);
  std::vector<std::string> valueNames = pruned.kindNames(NodeKind::Value);
  if (valueNames.size() != 1)
    throw MethodError("method requires a single value node");
  const std::string v = valueNames.front();

  EvaluationResult result;
  result.method = "shachter-peot";
  const std::vector<std::string> order = pruned.decisionOrder();

  std::vector<Node> converted;
  for (const auto& n : pruned.nodes()) {
    if (n.kind == NodeKind::Value) {
      converted.push_back(cooperTransform(n));
    } else if (n.kind == NodeKind::Decision) {
      Node t = n;
      t.kind = NodeKind::Random;
      t.table = uniformConditional(pruned, n);
      converted.push_back(std::move(t));
    } else {
      converted.push_back(n);
    }
  }
  InfluenceDiagram network(std::move(converted));

  std::map<std::string, DecisionRule> rules;
  for (std::size_t i = order.size(); i-- > 0;) {
    const std::string& d = order[i];
    const Node& dn = pruned.node(d);
    std::set<std::string> query(dn.parents.begin(), dn.parents.end());
    query.insert(d);
    std::set<std::string> targets = query;
    targets.insert(v);
    InfluenceDiagram sub = relevancePrune(network, targets);
    InferenceResult run = infer(sub, query, {{v, 1}});

    StageStats stage;
    stage.stage = d;
    stage.queries = 1;
    stage.queryNetworkSizes.push_back(run.networkSize);
    stage.stats = run.stats;
    result.stages.push_back(std::move(stage));

    DecisionRule rule = optimalRule(run.marginal, dn.variable());
    network = replaceTable(network, d, ruleTable(rule), NodeKind::Random);
    rules.emplace(d, std::move(rule));
  }

  // Freeze the rules into the original network and take its expected value.
  InfluenceDiagram instantiated = pruned;
  for (const auto& [d, rule] : rules)
    instantiated = replaceTable(instantiated, d, ruleTable(rule), NodeKind::Random);
  ExpectedValueResult ev = expectedValue(instantiated);
  result.expectedValue = ev.value;
  result.stages.push_back(std::move(ev.stage));
  for (const auto& d : order) result.policy.push_back(rules.at(d));
  return result;
}

EvaluationResult evaluateBruteForce(const InfluenceDiagram& diagram,
                                    const BruteForceCaps& caps) {
  ValidationReport report = validate(diagram);
  if (!report.ok()) throw ValidationError(std::move(report));

  const std::vector<std::string> order = diagram.decisionOrder();
  DirectEvaluator direct(diagram);
  const long double joint = direct.chanceConfigurations();
  if (joint > caps.jointCap)
    throw MethodError("joint configuration count exceeds the oracle cap");

  // Rule skeletons over full parent scopes, original decision order.
  std::vector<DecisionRule> rules;
  std::vector<int> nodeIdx;
  long double policyCount = 1;
  for (const auto& d : order) {
    const Node& dn = diagram.node(d);
    DecisionRule rule;
    rule.decision = dn.variable();
    for (const auto& p : dn.parents)
      rule.table.scope.push_back(diagram.node(p).variable());
    std::sort(rule.table.scope.begin(), rule.table.scope.end());
    rule.table.maximized = rule.decision;
    std::size_t cells = 1;
    for (const auto& s : rule.table.scope)
      cells *= static_cast<std::size_t>(s.cardinality);
    rule.table.choices.assign(cells, 0);
    policyCount *= std::pow(static_cast<long double>(dn.cardinality),
                            static_cast<long double>(cells));
    rules.push_back(std::move(rule));
    nodeIdx.push_back(direct.nodeIndex(d));
  }
  if (policyCount > caps.policyCap)
    throw MethodError("policy count exceeds the oracle cap");
  if (policyCount * joint > caps.costCap)
    throw MethodError("policy enumeration cost exceeds the oracle cap");

  std::map<int, const DecisionRule*> ruleMap;
  for (std::size_t i = 0; i < rules.size(); ++i) ruleMap[nodeIdx[i]] = &rules[i];

  double bestValue = -std::numeric_limits<double>::infinity();
  std::vector<DecisionRule> bestRules;
  for (;;) {
    const double eu = direct.expectedUtility(ruleMap);
    if (eu > bestValue) {
      bestValue = eu;
      bestRules = rules;
    }
    // Advance the policy odometer; the last table cell moves fastest, so
    // policies appear in lexicographic order of their encodings.
    bool carried = false;
    for (std::size_t r = rules.size(); r-- > 0 && !carried;) {
      auto& choices = rules[r].table.choices;
      const int card = rules[r].decision.cardinality;
      for (std::size_t c = choices.size(); c-- > 0;) {
        if (++choices[c] < card) {
          carried = true;
          break;
        }
        choices[c] = 0;
      }
    }
    if (!carried) break;
  }

  EvaluationResult result;
  result.method = "brute-force";
  result.expectedValue = bestValue;
  result.policy = std::move(bestRules);
  return result;
}

double policyValue(const InfluenceDiagram& diagram,
                   const std::vector<DecisionRule>& policy) {
  DirectEvaluator direct(diagram);
  std::map<int, const DecisionRule*> ruleMap;
  for (const auto& rule : policy) {
    const int idx = direct.nodeIndex(rule.decision.name);
    if (diagram.nodes()[idx].kind != NodeKind::Decision)
      throw std::invalid_argument("policy names non-decision node '" +
                                  rule.decision.name + "'");
    ruleMap[idx] = &rule;
  }
  for (const auto& n : diagram.nodes())
    if (n.kind == NodeKind::Decision && !ruleMap.count(direct.nodeIndex(n.name)))
      throw std::invalid_argument("policy misses a rule for decision '" +
                                  n.name + "'");
  return direct.expectedUtility(ruleMap);
}

ComparisonReport compareMethods(const InfluenceDiagram& diagram,
                                bool includeOracle, const BruteForceCaps& caps) {
  ValidationReport vr = validate(diagram);
  if (!vr.ok()) throw ValidationError(std::move(vr));

  ComparisonReport report;

  // Per-stage paired instrumentation with one conforming order per tail.
  InfluenceDiagram current = pruneBarren(diagram);
  while (current.decisionCount() > 0) {
    const std::string d = tailDecisionNode(current);
    const TailDecomposition decomp = decompose(current, d);
    const InfluenceDiagram rt = reducedTail(current, decomp);
    const EliminationOrder rho = stageEliminationOrder(rt, decomp);

    FunctionalResult red = tailFunctional(rt, decomp, rho);
    FunctionalResult fus = fusionTailFunctional(rt, decomp, rho);

    StageComparison sc;
    sc.decision = d;
    sc.valueNodeCount = static_cast<int>(decomp.tailValues.size());
    sc.reductionElimMults = red.stage.stats.eliminationMultiplications;
    sc.fusionElimMults = fus.stage.stats.eliminationMultiplications;
    sc.reductionMults = red.stage.stats.multiplications;
    sc.fusionMults = fus.stage.stats.multiplications;
    sc.reductionMaxFactor = red.stage.stats.maxFactorSize;
    sc.fusionMaxFactor = fus.stage.stats.maxFactorSize;
    sc.multiplicationBoundHolds =
        sc.reductionElimMults <=
        static_cast<long long>(1 + sc.valueNodeCount) * sc.fusionElimMults;
    sc.factorSizeBoundHolds = sc.reductionMaxFactor <= sc.fusionMaxFactor;
    if (sc.fusionElimMults > 0)
      sc.ratio = static_cast<double>(sc.reductionElimMults) /
                 static_cast<double>(sc.fusionElimMults);
    else
      sc.ratio = sc.reductionElimMults == 0
                     ? 1.0
                     : std::numeric_limits<double>::infinity();

    Factor mask = expandTo(red.relevantMarginal, red.functional.scope());
    for (std::size_t i = 0; i < mask.values().size(); ++i)
      if (mask.values()[i] > 0.0)
        sc.functionalGap = std::max(
            sc.functionalGap,
            std::abs(red.functional.values()[i] - fus.functional.values()[i]));

    report.maxRatio = std::max(report.maxRatio, sc.ratio);
    report.multiplicationBoundHolds =
        report.multiplicationBoundHolds && sc.multiplicationBoundHolds;
    report.factorSizeBoundHolds =
        report.factorSizeBoundHolds && sc.factorSizeBoundHolds;
    report.stages.push_back(std::move(sc));

    InfluenceDiagram next = augmentedBody(current, decomp, red.functional);
    if (!decomp.parents2.empty())
      next = reducedBody(next, red.relevantMarginal, rt, decomp);
    current = pruneBarren(next);
  }

  EvalOptions conforming;
  conforming.orderMode = OrderMode::Conforming;
  report.methods.push_back(rowFrom(evaluate(diagram, conforming)));
  report.methods.push_back(rowFrom(evaluateFusion(diagram)));
  try {
    report.methods.push_back(rowFrom(evaluateShachterPeot(diagram)));
  } catch (const MethodError& e) {
    MethodRow row;
    row.method = "shachter-peot";
    row.note = std::string("skipped (") + e.what() + ")";
    report.methods.push_back(std::move(row));
  }
  if (includeOracle) {
    try {
      report.methods.push_back(rowFrom(evaluateBruteForce(diagram, caps)));
    } catch (const MethodError&) {
      MethodRow row;
      row.method = "brute-force";
      row.note = "skipped (cap)";
      report.methods.push_back(std::move(row));
    }
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& row : report.methods) {
    if (!row.ran) continue;
    lo = std::min(lo, row.expectedValue);
    hi = std::max(hi, row.expectedValue);
  }
  if (hi >= lo) report.maxValueGap = hi - lo;
  return report;
}

}  // namespace ideval
