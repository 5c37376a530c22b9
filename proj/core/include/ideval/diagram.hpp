#ifndef IDEVAL_DIAGRAM_HPP
#define IDEVAL_DIAGRAM_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ideval/factor.hpp"
#include "ideval/variable.hpp"

namespace ideval {

enum class NodeKind { Random, Decision, Value };

// Bookkeeping attached to a random node that encodes a utility function as a
// binary variable: P(v=1 | parents) = (utility + shift) / scale. `utility`
// keeps the original signed table so downstream consumers can recover exact
// utility units: utility = P(v=1|parents) * scale - shift.
struct UtilityEncoding {
  double scale = 0.0;   // max of the shifted table; 0 for a constant-zero table
  double shift = 0.0;   // amount added to make the table nonnegative (>= 0)
  Factor utility;       // original table over the parent scope
};

// One node of an influence diagram. Random nodes carry a CPT over
// {parents, self}; value nodes carry a signed utility table over their
// parents and have no frame of their own; decision nodes carry no table.
struct Node {
  std::string name;
  NodeKind kind = NodeKind::Random;
  int cardinality = 0;  // 0 for value nodes
  std::vector<std::string> labels;
  std::vector<std::string> parents;  // ordered
  Factor table;
  std::optional<UtilityEncoding> encoding;  // set on utility-encoding randoms

  bool hasFrame() const { return kind != NodeKind::Value; }
  Variable variable() const;  // throws for value nodes
};

struct Violation {
  std::string code;  // "cycle", "value-child", "not-regular", "no-forgetting",
                     // "unnormalized-cpt"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// An influence diagram: a DAG over random, decision, and value nodes. A
// Bayesian network is a diagram with only random nodes and a value network
// is one without decisions, so a single type serves all three roles.
// Diagrams are immutable once constructed; the decomposition operations
// build new diagrams rather than editing in place.
class InfluenceDiagram {
 public:
  InfluenceDiagram() = default;
  // Checks names, parent references, label counts, and table shapes; graph
  // properties (acyclicity, regularity, ...) are the validator's job.
  explicit InfluenceDiagram(std::vector<Node> nodes);

  const std::vector<Node>& nodes() const { return nodes_; }
  bool has(const std::string& name) const { return index_.count(name) > 0; }
  const Node& node(const std::string& name) const;

  const std::vector<std::string>& childrenOf(const std::string& name) const;

  std::vector<std::string> names() const;            // insertion order
  std::vector<std::string> kindNames(NodeKind k) const;
  bool isBayesNet() const;       // only random nodes
  bool isValueNetwork() const;   // no decision nodes
  int decisionCount() const;

  bool isAcyclic() const;
  // Topological order (insertion order among incomparables); throws on cycles.
  std::vector<std::string> topologicalOrder() const;
  // Decisions ordered by the DAG's reachability relation; requires a valid
  // total order (regularity).
  std::vector<std::string> decisionOrder() const;

  std::set<std::string> descendantsOf(const std::string& name) const;

 private:
  std::vector<Node> nodes_;
  std::map<std::string, int> index_;
  std::map<std::string, std::vector<std::string>> children_;
};

// Undirected adjacency obtained by marrying co-parents and dropping arc
// directions.
struct MoralGraph {
  std::map<std::string, std::set<std::string>> adjacency;
  bool hasEdge(const std::string& a, const std::string& b) const;
};

// Reports every violated diagram constraint; an empty report means valid.
ValidationReport validate(const InfluenceDiagram& diagram);

MoralGraph moralGraph(const InfluenceDiagram& diagram);

// True iff every moral-graph path between x and y meets S.
bool mSeparated(const InfluenceDiagram& diagram, const std::set<std::string>& s,
                const std::string& x, const std::string& y);

// Nodes reachable from `from` in the moral graph without passing through
// `blocked`; blocked nodes themselves are not expanded or returned. `from`
// is included.
std::set<std::string> moralReachable(const InfluenceDiagram& diagram,
                                     const std::string& from,
                                     const std::set<std::string>& blocked);

// Smallest superset of A closed under adding parents.
std::set<std::string> ancestralSet(const InfluenceDiagram& diagram,
                                   const std::set<std::string>& a);

// The decision node that no other decision descends from; unique in a
// regular diagram. Throws when there are no decisions or no unique last one.
std::string tailDecisionNode(const InfluenceDiagram& diagram);

// Repeatedly removes random nodes with no children. Marginals over the
// surviving nodes are unchanged.
InfluenceDiagram pruneBarren(const InfluenceDiagram& network);

}  // namespace ideval

#endif  // IDEVAL_DIAGRAM_HPP
