// Acceptance suite: runs every evaluator guarantee end to end on a seeded
// random family of influence diagrams plus the structural fixtures, and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <vector>

#include "ideval/baselines.hpp"
#include "ideval/generator.hpp"
#include "ideval/io.hpp"
#include "support/oracle.hpp"

using namespace ideval;

namespace {

struct Criterion {
  std::string name;
  bool pass = true;
  std::string detail;
};

std::vector<Criterion> results;

void report(const std::string& name, bool pass, const std::string& detail) {
  results.push_back({name, pass, detail});
  std::printf("%s  %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fixturePath(const std::string& name) {
  return std::string(IDEVAL_FIXTURE_DIR) + "/" + name;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

constexpr int kSuiteSize = 200;
constexpr std::uint64_t kSuiteSeedBase = 1;

InfluenceDiagram suiteDiagram(int i) {
  return generateDiagram(kSuiteSeedBase + static_cast<std::uint64_t>(i));
}

// --- Criterion 1: reduction result equals the exhaustive optimum. ---------
void oracleEquivalence() {
  double worstValueGap = 0, worstPolicyGap = 0;
  int failures = 0;
  for (int i = 0; i < kSuiteSize; ++i) {
    InfluenceDiagram d = suiteDiagram(i);
    EvaluationResult fast = evaluate(d);
    EvaluationResult oracle = evaluateBruteForce(d);
    const double valueGap = std::abs(fast.expectedValue - oracle.expectedValue);
    const double policyGap =
        std::abs(policyValue(d, fast.policy) - oracle.expectedValue);
    worstValueGap = std::max(worstValueGap, valueGap);
    worstPolicyGap = std::max(worstPolicyGap, policyGap);
    if (valueGap > 1e-8 || policyGap > 1e-8) ++failures;
  }
  report("oracle-equivalence", failures == 0,
         std::to_string(kSuiteSize) + " diagrams, max value gap " +
             fmt(worstValueGap) + ", max policy gap " + fmt(worstPolicyGap));
}

// --- Criterion 2: the fusion and single-value-node routes agree. -----------
void crossMethodAgreement() {
  double worstFusion = 0, worstSp = 0;
  int spChecked = 0, failures = 0;
  for (int i = 0; i < kSuiteSize; ++i) {
    InfluenceDiagram d = suiteDiagram(i);
    const double red = evaluate(d).expectedValue;
    const double fus = evaluateFusion(d).expectedValue;
    worstFusion = std::max(worstFusion, std::abs(red - fus));
    if (std::abs(red - fus) > 1e-8) ++failures;
    if (d.kindNames(NodeKind::Value).size() == 1) {
      ++spChecked;
      const double sp = evaluateShachterPeot(d).expectedValue;
      worstSp = std::max(worstSp, std::abs(red - sp));
      if (std::abs(red - sp) > 1e-8) ++failures;
    }
  }
  report("cross-method-agreement", failures == 0,
         "fusion gap " + fmt(worstFusion) + " on " + std::to_string(kSuiteSize) +
             " diagrams; single-value-node gap " + fmt(worstSp) + " on " +
             std::to_string(spChecked));
}

// --- Criteria 3 and 4: per-tail instrumentation bounds. --------------------
void instrumentationBounds() {
  double maxRatio = 0;
  int tails = 0, multViolations = 0, sizeViolations = 0;
  for (int i = 0; i < kSuiteSize; ++i) {
    ComparisonReport report = compareMethods(suiteDiagram(i), false);
    for (const auto& sc : report.stages) {
      ++tails;
      maxRatio = std::max(maxRatio, sc.ratio);
      if (!sc.multiplicationBoundHolds) ++multViolations;
      if (!sc.factorSizeBoundHolds) ++sizeViolations;
    }
  }
  report("per-utility-node-multiplication-bound", multViolations == 0,
         std::to_string(tails) + " tails, max elimination-multiplication ratio " +
             fmt(maxRatio) + ", violations " + std::to_string(multViolations));
  report("factor-size-dominance", sizeViolations == 0,
         std::to_string(tails) + " tails, violations " +
             std::to_string(sizeViolations));
}

// --- Criterion 5: structural fixtures. -------------------------------------
void structuralFixtures() {
  bool ok = true;
  std::string why;

  InfluenceDiagram two = loadNetwork(fixturePath("two_stage.idnet"));
  TailDecomposition t2 = decompose(two, tailDecisionNode(two));
  if (t2.parents2 != std::set<std::string>{"c_4"}) ok = false, why += " pi2";
  if (t2.parents1 != std::set<std::string>{"c_3", "d_1"}) ok = false, why += " pi1";
  if (t2.downstream != std::set<std::string>{"c_6", "d_2", "v_2"})
    ok = false, why += " X2";

  InfluenceDiagram four = loadNetwork(fixturePath("four_stage.idnet"));
  if (tailDecisionNode(four) != "d_4") ok = false, why += " tail";
  TailDecomposition t4 = decompose(four, "d_4");
  if (t4.relevantParents != std::set<std::string>{"c_10", "d_2"})
    ok = false, why += " pi_r";
  if (!t4.parents2.empty()) ok = false, why += " pi2-empty";
  EvaluationResult r4 = evaluate(four);
  if (r4.stages.front().stage != "d_4" || r4.stages.front().queries != 2)
    ok = false, why += " queries";

  report("structural-fixtures", ok,
         ok ? "both fixtures partition and query as documented" : "mismatch:" + why);
}

// --- Criterion 6: well-definedness of the rebuilt parent tables. -----------
void rebuiltParentTables() {
  int stagesChecked = 0, spreadViolations = 0, valueViolations = 0;
  double worstSpread = 0, worstGap = 0;
  for (int i = 0; i < kSuiteSize; ++i) {
    InfluenceDiagram current = pruneBarren(suiteDiagram(i));
    while (current.decisionCount() > 0) {
      const std::string d = tailDecisionNode(current);
      TailDecomposition t = decompose(current, d);
      InfluenceDiagram rt = reducedTail(current, t);
      FunctionalResult fr = tailFunctional(rt, t);
      InfluenceDiagram aug = augmentedBody(current, t, fr.functional);
      InfluenceDiagram next = aug;
      if (!t.parents2.empty()) {
        ++stagesChecked;
        // Spread of the ratio across the axes that are marginalized out.
        std::set<std::string> z;
        for (const auto& p : t.relevantParents)
          if (t.parents1.count(p)) z.insert(p);
        std::set<std::string> zPrefix;
        std::map<std::string, std::set<std::string>> desc;
        for (const auto& zn : z) desc[zn] = rt.descendantsOf(zn);
        for (std::size_t ci = 0; ci < t.parents2Order.size(); ++ci) {
          const std::string& c = t.parents2Order[ci];
          for (const auto& zn : z)
            if (desc[zn].count(c)) zPrefix.insert(zn);
          Factor num = fr.relevantMarginal;
          for (std::size_t j = ci + 1; j < t.parents2Order.size(); ++j)
            num = sumOut(num, rt.node(t.parents2Order[j]).variable());
          Factor den = sumOut(num, rt.node(c).variable());
          Factor ratio = divide(num, den);
          Factor denFull = expandTo(den, ratio.scope());
          std::map<std::size_t, std::pair<double, double>> groups;
          std::vector<int> cfg(ratio.scope().size(), 0);
          for (std::size_t idx = 0;;) {
            if (denFull.values()[idx] > 0) {
              std::size_t key = 0;
              for (std::size_t k = 0; k < ratio.scope().size(); ++k) {
                const auto& v = ratio.scope()[k];
                if (z.count(v.name) && !zPrefix.count(v.name)) continue;
                key = key * static_cast<std::size_t>(v.cardinality) +
                      static_cast<std::size_t>(cfg[k]);
              }
              auto [it, fresh] = groups.emplace(
                  key, std::make_pair(ratio.values()[idx], ratio.values()[idx]));
              if (!fresh) {
                it->second.first = std::min(it->second.first, ratio.values()[idx]);
                it->second.second = std::max(it->second.second, ratio.values()[idx]);
              }
            }
            if (++idx == ratio.size()) break;
            for (std::size_t k = ratio.scope().size(); k-- > 0;) {
              if (++cfg[k] < ratio.scope()[k].cardinality) break;
              cfg[k] = 0;
            }
          }
          for (const auto& [key, mm] : groups) {
            worstSpread = std::max(worstSpread, mm.second - mm.first);
            if (mm.second - mm.first > 1e-10) ++spreadViolations;
          }
        }

        InfluenceDiagram red = reducedBody(aug, fr.relevantMarginal, rt, t);
        const double before = evaluateBruteForce(aug).expectedValue;
        const double after = evaluateBruteForce(red).expectedValue;
        worstGap = std::max(worstGap, std::abs(before - after));
        if (std::abs(before - after) > 1e-8) ++valueViolations;
        next = red;
      }
      current = pruneBarren(next);
    }
  }
  report("rebuilt-parent-tables", spreadViolations == 0 && valueViolations == 0,
         std::to_string(stagesChecked) + " reduced stages, max ratio spread " +
             fmt(worstSpread) + ", max optimum gap " + fmt(worstGap));
}

// --- Criterion 7: the elimination engine against enumeration. --------------
void inferenceCorrectness() {
  std::mt19937_64 rng(20240817);
  double worstGap = 0, worstOrderGap = 0;
  int failures = 0;
  const int trials = 500;
  for (int i = 0; i < trials; ++i) {
    InfluenceDiagram bn = generateBayesNet(9000 + static_cast<std::uint64_t>(i), 10);
    std::set<std::string> query;
    std::map<std::string, int> evidence;
    for (const auto& n : bn.nodes()) {
      const int roll = static_cast<int>(rng() % 4);
      if (roll == 0) query.insert(n.name);
      if (roll == 1) evidence[n.name] = static_cast<int>(rng() % n.cardinality);
    }
    if (query.empty()) query.insert(bn.nodes().front().name);

    InferenceResult run = infer(bn, query, evidence);
    std::vector<std::string> layout;
    for (const auto& v : run.marginal.scope()) layout.push_back(v.name);
    auto expect = testsupport::jointMarginal(bn, layout, evidence);
    for (std::size_t k = 0; k < expect.size(); ++k)
      worstGap = std::max(worstGap, std::abs(expect[k] - run.marginal.values()[k]));

    std::vector<std::string> eliminable;
    for (const auto& n : bn.nodes())
      if (!query.count(n.name) && !evidence.count(n.name))
        eliminable.push_back(n.name);
    for (int t = 0; t < 3; ++t) {
      std::shuffle(eliminable.begin(), eliminable.end(), rng);
      InferenceResult other = infer(bn, query, evidence, EliminationOrder{eliminable});
      for (std::size_t k = 0; k < expect.size(); ++k)
        worstOrderGap = std::max(
            worstOrderGap, std::abs(other.marginal.values()[k] - run.marginal.values()[k]));
    }
    if (worstGap > 1e-9 || worstOrderGap > 1e-9) ++failures;
  }
  report("inference-correctness", failures == 0,
         std::to_string(trials) + " networks, max enumeration gap " + fmt(worstGap) +
             ", max order-variance " + fmt(worstOrderGap));
}

// --- Criterion 8: utility shift and scale behave linearly. -----------------
void shiftScaleInvariance() {
  const int count = 60;
  double worstShift = 0, worstScale = 0, worstPolicy = 0;
  int failures = 0;
  for (int i = 0; i < count; ++i) {
    InfluenceDiagram d = suiteDiagram(i);
    const double base = evaluate(d).expectedValue;

    const double k = 9.75;
    std::vector<Node> shiftedNodes = d.nodes();
    for (auto& n : shiftedNodes) {
      if (n.kind != NodeKind::Value) continue;
      std::vector<double> vals = n.table.values();
      for (auto& x : vals) x += k;
      n.table = Factor(n.table.scope(), std::move(vals));
      break;
    }
    InfluenceDiagram shifted(std::move(shiftedNodes));
    EvaluationResult sr = evaluate(shifted);
    const double shiftGap = std::abs(sr.expectedValue - (base + k));
    worstShift = std::max(worstShift, shiftGap);
    const double shiftPolicyGap = std::abs(
        policyValue(shifted, sr.policy) - evaluateBruteForce(shifted).expectedValue);
    worstPolicy = std::max(worstPolicy, shiftPolicyGap);

    const double lambda = 2.5;
    std::vector<Node> scaledNodes = d.nodes();
    for (auto& n : scaledNodes) {
      if (n.kind != NodeKind::Value) continue;
      std::vector<double> vals = n.table.values();
      for (auto& x : vals) x *= lambda;
      n.table = Factor(n.table.scope(), std::move(vals));
    }
    InfluenceDiagram scaled(std::move(scaledNodes));
    EvaluationResult lr = evaluate(scaled);
    const double scaleGap = std::abs(lr.expectedValue - lambda * base) /
                            std::max(1.0, std::abs(lambda * base));
    worstScale = std::max(worstScale, scaleGap);
    const double scalePolicyGap = std::abs(
        policyValue(scaled, lr.policy) - evaluateBruteForce(scaled).expectedValue);
    worstPolicy = std::max(worstPolicy, scalePolicyGap);

    if (shiftGap > 1e-9 || scaleGap > 1e-9 || shiftPolicyGap > 1e-8 ||
        scalePolicyGap > 1e-8)
      ++failures;
  }
  report("shift-scale-invariance", failures == 0,
         std::to_string(count) + " diagrams, max shift gap " + fmt(worstShift) +
             ", max relative scale gap " + fmt(worstScale) +
             ", max policy gap " + fmt(worstPolicy));
}

}  // namespace

int main() {
  oracleEquivalence();
  crossMethodAgreement();
  instrumentationBounds();
  structuralFixtures();
  rebuiltParentTables();
  inferenceCorrectness();
  shiftScaleInvariance();

  int failed = 0;
  for (const auto& c : results)
    if (!c.pass) ++failed;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed,
              results.size());
  return failed == 0 ? 0 : 1;
}
