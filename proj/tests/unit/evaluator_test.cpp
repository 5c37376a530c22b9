#include <doctest.h>

#include <cmath>

#include "ideval/baselines.hpp"
#include "ideval/evaluator.hpp"
#include "ideval/generator.hpp"
#include "ideval/io.hpp"
#include "support/builders.hpp"
#include "support/oracle.hpp"

using namespace ideval;
using testsupport::NetBuilder;

namespace {

InfluenceDiagram fixture(const std::string& name) {
  return loadNetwork(std::string(IDEVAL_FIXTURE_DIR) + "/" + name);
}

GeneratorConfig smallSuite() {
  GeneratorConfig cfg;
  cfg.maxDecisions = 3;
  cfg.maxChance = 6;
  cfg.policyCap = 4e3;
  cfg.jointCap = 2e3;
  return cfg;
}

}  // namespace

TEST_CASE("the functional of a lone decision recovers its utility table") {
  auto d = NetBuilder().decision("d", 3, {}).value("v", {"d"}, {1, 5, 2}).build();
  TailDecomposition t = decompose(d, "d");
  FunctionalResult fr = tailFunctional(reducedTail(d, t), t);
  CHECK(fr.relevantMarginal.isScalar());
  CHECK(fr.relevantMarginal.scalarValue() == doctest::Approx(1.0));
  REQUIRE(fr.functional.size() == 3);
  CHECK(fr.functional.values()[0] == doctest::Approx(1.0));
  CHECK(fr.functional.values()[1] == doctest::Approx(5.0));
  CHECK(fr.functional.values()[2] == doctest::Approx(2.0));
}

TEST_CASE("the four-stage fixture needs exactly two queries at its last stage") {
  InfluenceDiagram d = fixture("four_stage.idnet");
  TailDecomposition t = decompose(d, "d_4");
  InfluenceDiagram rt = reducedTail(d, t);

  // The parent query network is the two isolated uniform relevant parents.
  InfluenceDiagram parentNet = relevancePrune(rt, t.relevantParents);
  CHECK(parentNet.nodes().size() == 2);
  for (const auto& n : parentNet.nodes()) CHECK(n.parents.empty());

  FunctionalResult fr = tailFunctional(rt, t);
  CHECK(fr.stage.queries == 2);
  CHECK(fr.stage.queryNetworkSizes[0] == 2);
  CHECK(fr.stage.queryNetworkSizes[1] == 6);  // the whole reduced tail
}

TEST_CASE("the functional equals the conditional expected utility where defined") {
  for (std::uint64_t seed = 130; seed <= 160; ++seed) {
    InfluenceDiagram d = generateDiagram(seed, smallSuite());
    TailDecomposition t = decompose(d, tailDecisionNode(d));
    InfluenceDiagram rt = reducedTail(d, t);
    if (rt.nodes().size() > 12) continue;
    FunctionalResult fr = tailFunctional(rt, t);

    std::vector<std::string> given;
    for (const auto& v : fr.functional.scope()) given.push_back(v.name);
    auto oracle = testsupport::conditionalExpectedUtility(
        testsupport::valueViewOfTail(rt), given);
    REQUIRE(oracle.size() == fr.functional.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      if (oracle[i].probability <= 0) continue;
      CHECK(std::abs(fr.functional.values()[i] - oracle[i].value) <= 1e-8);
    }
  }
}

TEST_CASE("rules take the argmax with low-index ties") {
  Variable dv{"d", 3, {}};
  Factor e({dv}, {1, 5, 2});
  DecisionRule r = optimalRule(e, dv);
  CHECK(r.table.choices == std::vector<int>{1});

  Factor flat({Variable{"a", 2, {}}, dv}, {4, 4, 4, 1, 1, 1});
  DecisionRule rf = optimalRule(flat, dv);
  CHECK(rf.table.choices == std::vector<int>{0, 0});
}

TEST_CASE("expected value of a tiny value network") {
  auto net = NetBuilder()
                 .chance("a", 2, {}, {0.4, 0.6})
                 .value("v", {"a"}, {0, 10})
                 .build();
  ExpectedValueResult r = expectedValue(net);
  CHECK(r.value == doctest::Approx(6.0));
  CHECK(r.stage.queries == 1);
}

TEST_CASE("expected value adds utilities sharing a parent") {
  auto net = NetBuilder()
                 .chance("a", 2, {}, {0.4, 0.6})
                 .value("v1", {"a"}, {0, 10})
                 .value("v2", {"a"}, {3, -1})
                 .build();
  CHECK(expectedValue(net).value == doctest::Approx(6.0 + (0.4 * 3 - 0.6)));
}

TEST_CASE("expected value matches enumeration on random value networks") {
  for (std::uint64_t seed = 500; seed <= 540; ++seed) {
    InfluenceDiagram net = generateValueNetwork(seed, 10);
    const double expect = testsupport::expectedUtility(net);
    CHECK(std::abs(expectedValue(net).value - expect) <= 1e-8);
  }
  auto withDecision = NetBuilder().decision("d", 2, {}).build();
  CHECK_THROWS_AS(expectedValue(withDecision), std::invalid_argument);
}

TEST_CASE("evaluation handles the decision-free and lone-decision edges") {
  auto valueNet = NetBuilder()
                      .chance("a", 2, {}, {0.4, 0.6})
                      .value("v", {"a"}, {0, 10})
                      .build();
  EvaluationResult r = evaluate(valueNet);
  CHECK(r.policy.empty());
  CHECK(r.expectedValue == doctest::Approx(6.0));

  auto lone = fixture("lone_decision.idnet");
  EvaluationResult lr = evaluate(lone);
  CHECK(lr.expectedValue == doctest::Approx(5.0));
  REQUIRE(lr.policy.size() == 1);
  CHECK(lr.policy[0].decision.name == "d");
  CHECK(lr.policy[0].table.choices == std::vector<int>{1});

  auto invalid = NetBuilder().chance("a", 2, {}, {0.9, 0.9}).build();
  CHECK_THROWS_AS(evaluate(invalid), ValidationError);
}

TEST_CASE("evaluation matches the exhaustive optimum across the random suite") {
  for (std::uint64_t seed = 700; seed <= 760; ++seed) {
    InfluenceDiagram d = generateDiagram(seed, smallSuite());
    EvaluationResult fast = evaluate(d);
    EvaluationResult oracle = evaluateBruteForce(d);
    CHECK(std::abs(fast.expectedValue - oracle.expectedValue) <= 1e-8);
    // The returned policy attains the claimed value under direct evaluation.
    CHECK(std::abs(policyValue(d, fast.policy) - oracle.expectedValue) <= 1e-8);
    // One stage per decision plus the final expected-value pass.
    CHECK(fast.stages.size() == static_cast<std::size_t>(d.decisionCount()) + 1);
  }
}

TEST_CASE("one stage per decision, reported in original order") {
  InfluenceDiagram d = fixture("four_stage.idnet");
  EvaluationResult r = evaluate(d);
  REQUIRE(r.policy.size() == 4);
  CHECK(r.policy[0].decision.name == "d_1");
  CHECK(r.policy[3].decision.name == "d_4");
  REQUIRE(r.stages.size() == 5);  // four decisions plus the value pass
  CHECK(r.stages[0].stage == "d_4");
  CHECK(r.stages[0].queries == 2);
  CHECK(r.stages[3].stage == "d_1");
  CHECK(r.stages[4].stage == "expected-value");
  // Rule scopes are the relevant parents at solve time.
  CHECK(r.policy[3].scope().size() == 2);
}

TEST_CASE("every stage of the loop preserves the reachable optimum") {
  GeneratorConfig cfg = smallSuite();
  cfg.maxDecisions = 3;
  for (std::uint64_t seed = 820; seed <= 835; ++seed) {
    InfluenceDiagram original = generateDiagram(seed, cfg);
    const double target = evaluateBruteForce(original).expectedValue;
    InfluenceDiagram current = pruneBarren(original);
    while (current.decisionCount() > 0) {
      TailDecomposition t = decompose(current, tailDecisionNode(current));
      InfluenceDiagram rt = reducedTail(current, t);
      FunctionalResult fr = tailFunctional(rt, t);
      InfluenceDiagram next = augmentedBody(current, t, fr.functional);
      if (!t.parents2.empty()) next = reducedBody(next, fr.relevantMarginal, rt, t);
      current = pruneBarren(next);
      CHECK(std::abs(evaluateBruteForce(current).expectedValue - target) <= 1e-8);
    }
    CHECK(std::abs(expectedValue(current).value - target) <= 1e-8);
  }
}

TEST_CASE("conforming orders change the work, never the answer") {
  for (std::uint64_t seed = 800; seed <= 815; ++seed) {
    InfluenceDiagram d = generateDiagram(seed, smallSuite());
    EvalOptions conf;
    conf.orderMode = OrderMode::Conforming;
    EvaluationResult a = evaluate(d);
    EvaluationResult b = evaluate(d, conf);
    CHECK(std::abs(a.expectedValue - b.expectedValue) <= 1e-9);
  }
}

TEST_CASE("shifting one utility shifts the value by exactly that constant") {
  for (std::uint64_t seed = 900; seed <= 915; ++seed) {
    InfluenceDiagram d = generateDiagram(seed, smallSuite());
    const double base = evaluate(d).expectedValue;
    for (double k : {7.25, -13.5}) {
      std::vector<Node> nodes = d.nodes();
      for (auto& n : nodes) {
        if (n.kind != NodeKind::Value) continue;
        std::vector<double> vals = n.table.values();
        for (auto& x : vals) x += k;
        n.table = Factor(n.table.scope(), std::move(vals));
        break;  // shift the first value node only
      }
      InfluenceDiagram shifted(std::move(nodes));
      EvaluationResult r = evaluate(shifted);
      CHECK(std::abs(r.expectedValue - (base + k)) <= 1e-9);
      // The policy still achieves the shifted optimum.
      EvaluationResult oracle = evaluateBruteForce(shifted);
      CHECK(std::abs(policyValue(shifted, r.policy) - oracle.expectedValue) <= 1e-8);
    }
  }
}

TEST_CASE("positive scaling of all utilities scales the value") {
  for (std::uint64_t seed = 950; seed <= 965; ++seed) {
    InfluenceDiagram d = generateDiagram(seed, smallSuite());
    const double base = evaluate(d).expectedValue;
    const double lambda = 2.5;
    std::vector<Node> nodes = d.nodes();
    for (auto& n : nodes) {
      if (n.kind != NodeKind::Value) continue;
      std::vector<double> vals = n.table.values();
      for (auto& x : vals) x *= lambda;
      n.table = Factor(n.table.scope(), std::move(vals));
    }
    InfluenceDiagram scaled(std::move(nodes));
    EvaluationResult r = evaluate(scaled);
    const double tol = 1e-9 * std::max(1.0, std::abs(lambda * base));
    CHECK(std::abs(r.expectedValue - lambda * base) <= tol);
    EvaluationResult oracle = evaluateBruteForce(scaled);
    CHECK(std::abs(policyValue(scaled, r.policy) - oracle.expectedValue) <= 1e-8);
  }
}

TEST_CASE("an extra insulated parent changes neither value nor rule scopes") {
  for (std::uint64_t seed = 1000; seed <= 1015; ++seed) {
    InfluenceDiagram d = generateDiagram(seed, smallSuite());
    EvaluationResult base = evaluate(d);

    // A fresh root chance node made a parent of every decision from some
    // stage onward; it feeds nothing downstream, so it is irrelevant.
    std::vector<Node> nodes = d.nodes();
    Node extra;
    extra.name = "pad";
    extra.kind = NodeKind::Random;
    extra.cardinality = 2;
    extra.table = Factor({Variable{"pad", 2, {}}}, {0.5, 0.5});
    const std::vector<std::string> order = d.decisionOrder();
    for (auto& n : nodes) {
      bool isLater = false;
      for (const auto& dn : order)
        if (n.name == dn) isLater = true;  // all decisions, first onward
      if (isLater && n.kind == NodeKind::Decision) n.parents.push_back("pad");
    }
    nodes.insert(nodes.begin(), extra);
    InfluenceDiagram padded(std::move(nodes));
    REQUIRE(validate(padded).ok());

    EvaluationResult r = evaluate(padded);
    CHECK(std::abs(r.expectedValue - base.expectedValue) <= 1e-9);
    REQUIRE(r.policy.size() == base.policy.size());
    for (std::size_t i = 0; i < r.policy.size(); ++i) {
      CHECK(r.policy[i].scope().size() == base.policy[i].scope().size());
      for (const auto& v : r.policy[i].scope()) CHECK(v.name != "pad");
    }
  }
}
