#include <doctest.h>

#include <random>
#include <stdexcept>

#include "ideval/diagram.hpp"
#include "ideval/generator.hpp"
#include "support/builders.hpp"
#include "support/oracle.hpp"

using namespace ideval;
using testsupport::NetBuilder;

namespace {

bool hasViolation(const ValidationReport& report, const std::string& code) {
  for (const auto& v : report.violations)
    if (v.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("a single normalized prior validates cleanly") {
  auto d = NetBuilder().chance("a", 2, {}, {0.4, 0.6}).build();
  CHECK(validate(d).ok());
}

TEST_CASE("a value node with a child is reported") {
  auto d = NetBuilder()
               .chance("a", 2, {}, {0.4, 0.6})
               .value("v", {"a"}, {0.0, 1.0})
               .decision("d", 2, {"v"})
               .build();
  ValidationReport r = validate(d);
  CHECK_FALSE(r.ok());
  CHECK(hasViolation(r, "value-child"));
}

TEST_CASE("two unordered decisions are reported as not regular") {
  auto d = NetBuilder()
               .chance("a", 2, {}, {0.4, 0.6})
               .decision("d1", 2, {"a"})
               .decision("d2", 2, {"a"})
               .build();
  ValidationReport r = validate(d);
  CHECK(hasViolation(r, "not-regular"));
}

TEST_CASE("a forgotten parent is reported") {
  auto d = NetBuilder()
               .chance("a", 2, {}, {0.4, 0.6})
               .decision("d1", 2, {"a"})
               .decision("d2", 2, {"d1"})  // forgets a
               .build();
  ValidationReport r = validate(d);
  CHECK(hasViolation(r, "no-forgetting"));
}

TEST_CASE("an unnormalized CPT is reported but not repaired") {
  auto d = NetBuilder().chance("a", 2, {}, {0.5, 0.6}).build();
  ValidationReport r = validate(d);
  CHECK(hasViolation(r, "unnormalized-cpt"));
  CHECK(d.node("a").table.values()[1] == 0.6);
}

TEST_CASE("construction rejects malformed nodes outright") {
  CHECK_THROWS_AS(NetBuilder()
                      .chance("a", 2, {}, {0.4, 0.6})
                      .chance("a", 2, {}, {0.4, 0.6})
                      .build(),
                  std::invalid_argument);
  std::vector<Node> nodes(1);
  nodes[0].name = "x";
  nodes[0].kind = NodeKind::Random;
  nodes[0].cardinality = 2;
  nodes[0].parents = {"ghost"};
  nodes[0].table = Factor({Variable{"x", 2, {}}}, {0.5, 0.5});
  CHECK_THROWS_AS(InfluenceDiagram(std::move(nodes)), std::invalid_argument);
}

TEST_CASE("moralization marries co-parents") {
  auto d = NetBuilder()
               .chance("x", 2, {}, {0.5, 0.5})
               .chance("y", 2, {}, {0.5, 0.5})
               .chance("c", 2, {"x", "y"}, {1, 0, 0, 1, 0, 1, 1, 0})
               .build();
  MoralGraph g = moralGraph(d);
  CHECK(g.hasEdge("x", "c"));
  CHECK(g.hasEdge("y", "c"));
  CHECK(g.hasEdge("x", "y"));
}

TEST_CASE("a chain gains no extra moral edges") {
  auto d = NetBuilder()
               .chance("x", 2, {}, {0.5, 0.5})
               .chance("s", 2, {"x"}, {0.3, 0.7, 0.8, 0.2})
               .chance("y", 2, {"s"}, {0.6, 0.4, 0.1, 0.9})
               .build();
  MoralGraph g = moralGraph(d);
  CHECK(g.hasEdge("x", "s"));
  CHECK(g.hasEdge("s", "y"));
  CHECK_FALSE(g.hasEdge("x", "y"));
}

TEST_CASE("moral edges match the literal definition on random graphs") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    InfluenceDiagram bn = generateBayesNet(seed, 10);
    MoralGraph g = moralGraph(bn);
    auto expected = testsupport::moralEdges(bn);
    std::size_t count = 0;
    for (const auto& [node, nbrs] : g.adjacency) count += nbrs.size();
    CHECK(count == 2 * expected.size());
    for (const auto& [a, b] : expected) CHECK(g.hasEdge(a, b));
  }
}

TEST_CASE("a chain is separated by its middle node") {
  auto d = NetBuilder()
               .chance("x", 2, {}, {0.5, 0.5})
               .chance("s", 2, {"x"}, {0.3, 0.7, 0.8, 0.2})
               .chance("y", 2, {"s"}, {0.6, 0.4, 0.1, 0.9})
               .build();
  CHECK(mSeparated(d, {"s"}, "x", "y"));
  CHECK_FALSE(mSeparated(d, {}, "x", "y"));
}

TEST_CASE("co-parents of a collider stay connected without conditioning") {
  auto d = NetBuilder()
               .chance("x", 2, {}, {0.5, 0.5})
               .chance("y", 2, {}, {0.5, 0.5})
               .chance("c", 2, {"x", "y"}, {1, 0, 0, 1, 0, 1, 1, 0})
               .build();
  CHECK_FALSE(mSeparated(d, {}, "x", "y"));  // the moral edge connects them
}

TEST_CASE("separation agrees with exhaustive path search on random graphs") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    InfluenceDiagram bn = generateBayesNet(seed, 8);
    auto names = bn.names();
    if (names.size() < 2) continue;
    for (int trial = 0; trial < 12; ++trial) {
      const auto& x = names[rng() % names.size()];
      const auto& y = names[rng() % names.size()];
      if (x == y) continue;
      std::set<std::string> s;
      for (const auto& n : names)
        if (n != x && n != y && (rng() & 1)) s.insert(n);
      CHECK(mSeparated(bn, s, x, y) == testsupport::moralSeparated(bn, s, x, y));
      CHECK(mSeparated(bn, s, x, y) == mSeparated(bn, s, y, x));  // symmetry
    }
  }
}

TEST_CASE("ancestral set of a root is itself") {
  auto d = NetBuilder().chance("r", 2, {}, {0.5, 0.5}).build();
  CHECK(ancestralSet(d, {"r"}) == std::set<std::string>{"r"});
}

TEST_CASE("ancestral set walks a chain to its root") {
  auto d = NetBuilder()
               .chance("x", 2, {}, {0.5, 0.5})
               .chance("y", 2, {"x"}, {0.3, 0.7, 0.8, 0.2})
               .chance("z", 2, {"y"}, {0.6, 0.4, 0.1, 0.9})
               .build();
  CHECK(ancestralSet(d, {"z"}) == std::set<std::string>{"x", "y", "z"});
}

TEST_CASE("ancestral set matches the matrix closure and is monotone and idempotent") {
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    InfluenceDiagram bn = generateBayesNet(seed, 9);
    auto names = bn.names();
    std::set<std::string> a, b;
    for (const auto& n : names) {
      if (rng() & 1) a.insert(n);
      if (a.count(n) || (rng() & 1)) b.insert(n);  // a subset of b
    }
    auto anA = ancestralSet(bn, a);
    CHECK(anA == testsupport::ancestralClosure(bn, a));
    auto anB = ancestralSet(bn, b);
    for (const auto& n : anA) CHECK(anB.count(n) == 1);   // monotone
    CHECK(ancestralSet(bn, anA) == anA);                  // idempotent
  }
}

TEST_CASE("the tail decision node is the last decision on the path") {
  auto lone = NetBuilder().decision("d", 2, {}).value("v", {"d"}, {1, 5}).build();
  CHECK(tailDecisionNode(lone) == "d");

  auto two = NetBuilder()
                 .decision("d1", 2, {})
                 .decision("d2", 2, {"d1"})
                 .value("v", {"d2"}, {0, 1})
                 .build();
  CHECK(tailDecisionNode(two) == "d2");

  auto none = NetBuilder().chance("a", 2, {}, {0.5, 0.5}).build();
  CHECK_THROWS_AS(tailDecisionNode(none), std::invalid_argument);

  auto irregular = NetBuilder()
                       .decision("d1", 2, {})
                       .decision("d2", 2, {})
                       .build();
  CHECK_THROWS_AS(tailDecisionNode(irregular), std::invalid_argument);
}

TEST_CASE("the tail decision descends from every other decision on random diagrams") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    InfluenceDiagram d = generateDiagram(seed);
    REQUIRE(validate(d).ok());
    const std::string tail = tailDecisionNode(d);
    for (const auto& other : d.kindNames(NodeKind::Decision)) {
      if (other == tail) continue;
      CHECK(d.descendantsOf(other).count(tail) == 1);
    }
  }
}

TEST_CASE("pruning removes a barren chain but keeps the prior") {
  auto d = NetBuilder()
               .chance("x", 2, {}, {0.4, 0.6})
               .chance("y", 2, {"x"}, {0.3, 0.7, 0.8, 0.2})
               .build();
  InfluenceDiagram pruned = pruneBarren(d);
  CHECK(pruned.nodes().size() == 1);
  CHECK(pruned.node("x").table.values() == std::vector<double>{0.4, 0.6});

  auto keep = NetBuilder()
                  .chance("x", 2, {}, {0.4, 0.6})
                  .value("v", {"x"}, {0, 1})
                  .build();
  CHECK(pruneBarren(keep).nodes().size() == 2);  // no barren nodes: identity
}

TEST_CASE("pruning preserves marginals over the survivors") {
  for (std::uint64_t seed = 30; seed <= 42; ++seed) {
    InfluenceDiagram bn = generateBayesNet(seed, 9, 2);
    InfluenceDiagram pruned = pruneBarren(bn);
    std::vector<std::string> survivors = pruned.names();
    if (survivors.empty()) continue;
    auto before = testsupport::jointMarginal(bn, survivors);
    auto after = testsupport::jointMarginal(pruned, survivors);
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i)
      CHECK(std::abs(before[i] - after[i]) <= 1e-9);
  }
}
