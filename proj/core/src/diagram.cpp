#include "ideval/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace ideval {

namespace {

std::string joinNames(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

}  // namespace

Variable Node::variable() const {
  if (!hasFrame())
    throw std::logic_error("value node '" + name + "' has no frame");
  return Variable{name, cardinality, labels};
}

InfluenceDiagram::InfluenceDiagram(std::vector<Node> nodes)
    : nodes_(std::move(nodes)) {
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
    const Node& n = nodes_[i];
    if (n.name.empty()) throw std::invalid_argument("node with empty name");
    if (!index_.emplace(n.name, i).second)
      throw std::invalid_argument("duplicate node name '" + n.name + "'");
  }
  for (const Node& n : nodes_) {
    if (n.hasFrame()) {
      if (n.cardinality < 1)
        throw std::invalid_argument("node '" + n.name + "' has cardinality < 1");
      if (!n.labels.empty()) {
        if (static_cast<int>(n.labels.size()) != n.cardinality)
          throw std::invalid_argument("node '" + n.name +
                                      "' has a label count that does not match its cardinality");
        std::set<std::string> distinct(n.labels.begin(), n.labels.end());
        if (static_cast<int>(distinct.size()) != n.cardinality)
          throw std::invalid_argument("node '" + n.name + "' has duplicate labels");
      }
    }
    std::set<std::string> seen;
    for (const auto& p : n.parents) {
      if (!index_.count(p))
        throw std::invalid_argument("node '" + n.name + "' references unknown parent '" + p + "'");
      if (!seen.insert(p).second)
        throw std::invalid_argument("node '" + n.name + "' lists parent '" + p + "' twice");
      if (p == n.name)
        throw std::invalid_argument("node '" + n.name + "' lists itself as parent");
    }
    children_[n.name];  // ensure an entry for every node
  }
  for (const Node& n : nodes_)
    for (const auto& p : n.parents) children_[p].push_back(n.name);

  // Table shapes. A framed parent is required wherever a table spans the
  // parent set; decisions are table-free so a value parent is representable
  // (and reported by the validator as a value-with-child violation).
  for (const Node& n : nodes_) {
    if (n.kind == NodeKind::Decision) continue;
    std::size_t expect = 1;
    for (const auto& p : n.parents) {
      const Node& pn = nodes_[index_.at(p)];
      if (!pn.hasFrame())
        throw std::invalid_argument("node '" + n.name +
                                    "' carries a table over value-node parent '" + p + "'");
      expect *= static_cast<std::size_t>(pn.cardinality);
    }
    if (n.kind == NodeKind::Random)
      expect *= static_cast<std::size_t>(n.cardinality);
    if (n.table.size() != expect)
      throw std::invalid_argument("node '" + n.name + "' has a table of length " +
                                  std::to_string(n.table.size()) + ", expected " +
                                  std::to_string(expect));
  }
}

const Node& InfluenceDiagram::node(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw std::invalid_argument("unknown node '" + name + "'");
  return nodes_[it->second];
}

const std::vector<std::string>& InfluenceDiagram::childrenOf(
    const std::string& name) const {
  auto it = children_.find(name);
  if (it == children_.end())
    throw std::invalid_argument("unknown node '" + name + "'");
  return it->second;
}

std::vector<std::string> InfluenceDiagram::names() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.name);
  return out;
}

std::vector<std::string> InfluenceDiagram::kindNames(NodeKind k) const {
  std::vector<std::string> out;
  for (const auto& n : nodes_)
    if (n.kind == k) out.push_back(n.name);
  return out;
}

bool InfluenceDiagram::isBayesNet() const {
  for (const auto& n : nodes_)
    if (n.kind != NodeKind::Random) return false;
  return true;
}

bool InfluenceDiagram::isValueNetwork() const { return decisionCount() == 0; }

int InfluenceDiagram::decisionCount() const {
  int k = 0;
  for (const auto& n : nodes_)
    if (n.kind == NodeKind::Decision) ++k;
  return k;
}

bool InfluenceDiagram::isAcyclic() const {
  std::map<std::string, int> inDegree;
  for (const auto& n : nodes_) inDegree[n.name] = static_cast<int>(n.parents.size());
  std::deque<std::string> ready;
  for (const auto& n : nodes_)
    if (inDegree[n.name] == 0) ready.push_back(n.name);
  std::size_t seen = 0;
  while (!ready.empty()) {
    std::string cur = ready.front();
    ready.pop_front();
    ++seen;
    for (const auto& c : childrenOf(cur))
      if (--inDegree[c] == 0) ready.push_back(c);
  }
  return seen == nodes_.size();
}

std::vector<std::string> InfluenceDiagram::topologicalOrder() const {
  std::map<std::string, int> inDegree;
  for (const auto& n : nodes_) inDegree[n.name] = static_cast<int>(n.parents.size());
  std::deque<std::string> ready;
  for (const auto& n : nodes_)
    if (inDegree[n.name] == 0) ready.push_back(n.name);
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string cur = ready.front();
    ready.pop_front();
    order.push_back(cur);
    for (const auto& c : childrenOf(cur))
      if (--inDegree[c] == 0) ready.push_back(c);
  }
  if (order.size() != nodes_.size())
    throw std::logic_error("topological order requested for a cyclic diagram");
  return order;
}

std::set<std::string> InfluenceDiagram::descendantsOf(const std::string& name) const {
  std::set<std::string> out;
  std::deque<std::string> queue(1, name);
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    for (const auto& c : childrenOf(cur))
      if (out.insert(c).second) queue.push_back(c);
  }
  return out;
}

std::vector<std::string> InfluenceDiagram::decisionOrder() const {
  std::vector<std::string> decisions = kindNames(NodeKind::Decision);
  std::vector<std::string> order = topologicalOrder();
  std::map<std::string, int> pos;
  for (int i = 0; i < static_cast<int>(order.size()); ++i) pos[order[i]] = i;
  std::sort(decisions.begin(), decisions.end(),
            [&](const std::string& a, const std::string& b) { return pos[a] < pos[b]; });
  return decisions;
}

bool MoralGraph::hasEdge(const std::string& a, const std::string& b) const {
  auto it = adjacency.find(a);
  return it != adjacency.end() && it->second.count(b) > 0;
}

MoralGraph moralGraph(const InfluenceDiagram& diagram) {
  MoralGraph g;
  for (const auto& n : diagram.nodes()) g.adjacency[n.name];
  auto link = [&](const std::string& a, const std::string& b) {
    if (a == b) return;
    g.adjacency[a].insert(b);
    g.adjacency[b].insert(a);
  };
  for (const auto& n : diagram.nodes()) {
    for (const auto& p : n.parents) link(p, n.name);
    for (std::size_t i = 0; i < n.parents.size(); ++i)
      for (std::size_t j = i + 1; j < n.parents.size(); ++j)
        link(n.parents[i], n.parents[j]);
  }
  return g;
}

std::set<std::string> moralReachable(const InfluenceDiagram& diagram,
                                     const std::string& from,
                                     const std::set<std::string>& blocked) {
  MoralGraph g = moralGraph(diagram);
  std::set<std::string> visited{from};
  std::deque<std::string> queue(1, from);
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    for (const auto& nb : g.adjacency.at(cur)) {
      if (visited.count(nb) || blocked.count(nb)) continue;
      visited.insert(nb);
      queue.push_back(nb);
    }
  }
  return visited;
}

bool mSeparated(const InfluenceDiagram& diagram, const std::set<std::string>& s,
                const std::string& x, const std::string& y) {
  if (x == y) throw std::invalid_argument("mSeparated requires distinct nodes");
  if (s.count(x) || s.count(y))
    throw std::invalid_argument("separating set must not contain the endpoints");
  return moralReachable(diagram, x, s).count(y) == 0;
}

std::set<std::string> ancestralSet(const InfluenceDiagram& diagram,
                                   const std::set<std::string>& a) {
  std::set<std::string> out;
  std::deque<std::string> queue;
  for (const auto& name : a) {
    diagram.node(name);  // existence check
    out.insert(name);
    queue.push_back(name);
  }
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    for (const auto& p : diagram.node(cur).parents)
      if (out.insert(p).second) queue.push_back(p);
  }
  return out;
}

std::string tailDecisionNode(const InfluenceDiagram& diagram) {
  std::vector<std::string> decisions = diagram.kindNames(NodeKind::Decision);
  if (decisions.empty())
    throw std::invalid_argument("diagram has no decision nodes");
  if (!diagram.isAcyclic())
    throw std::invalid_argument("diagram is cyclic");
  std::vector<std::string> last;
  for (const auto& d : decisions) {
    std::set<std::string> desc = diagram.descendantsOf(d);
    bool hasDecisionDescendant = false;
    for (const auto& other : decisions)
      if (other != d && desc.count(other)) hasDecisionDescendant = true;
    if (!hasDecisionDescendant) last.push_back(d);
  }
  if (last.size() != 1)
    throw std::invalid_argument("diagram is not regular: no unique last decision");
  return last.front();
}

ValidationReport validate(const InfluenceDiagram& diagram) {
  ValidationReport report;
  const bool acyclic = diagram.isAcyclic();
  if (!acyclic) report.violations.push_back({"cycle", "diagram contains a directed cycle"});

  for (const auto& n : diagram.nodes()) {
    if (n.kind != NodeKind::Value) continue;
    for (const auto& c : diagram.childrenOf(n.name))
      report.violations.push_back(
          {"value-child", "value node has child " + n.name + "->" + c});
  }

  // CPT rows must sum to one over the node's own frame.
  for (const auto& n : diagram.nodes()) {
    if (n.kind != NodeKind::Random) continue;
    Factor rowSums = sumOut(n.table, n.variable());
    bool bad = false;
    for (double s : rowSums.values())
      if (std::abs(s - 1.0) > 1e-9) bad = true;
    if (bad)
      report.violations.push_back(
          {"unnormalized-cpt", "CPT of node " + n.name + " does not sum to 1"});
  }

  if (acyclic) {
    // Regularity: the reachability relation totally orders the decisions.
    std::vector<std::string> decisions = diagram.kindNames(NodeKind::Decision);
    std::map<std::string, std::set<std::string>> desc;
    for (const auto& d : decisions) desc[d] = diagram.descendantsOf(d);
    bool regular = true;
    for (std::size_t i = 0; i < decisions.size(); ++i)
      for (std::size_t j = i + 1; j < decisions.size(); ++j) {
        const auto& a = decisions[i];
        const auto& b = decisions[j];
        if (!desc[a].count(b) && !desc[b].count(a)) {
          report.violations.push_back(
              {"not-regular", "not regular: no directed path covers decisions " +
                                  a + " and " + b});
          regular = false;
        }
      }

    if (regular && decisions.size() > 1) {
      std::vector<std::string> order = diagram.decisionOrder();
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
          const Node& di = diagram.node(order[i]);
          const Node& dj = diagram.node(order[j]);
          std::set<std::string> later(dj.parents.begin(), dj.parents.end());
          std::vector<std::string> missing;
          if (!later.count(di.name)) missing.push_back(di.name);
          for (const auto& p : di.parents)
            if (!later.count(p)) missing.push_back(p);
          if (!missing.empty())
            report.violations.push_back(
                {"no-forgetting", "decision " + order[j] +
                                      " forgets {" + joinNames(missing) +
                                      "} known at " + order[i]});
        }
      }
    }
  }
  return report;
}

InfluenceDiagram pruneBarren(const InfluenceDiagram& network) {
  // A barren node is a childless random node hanging off the graph; removing
  // it leaves every other marginal intact because its table sums to one.
  // Isolated priors (no parents either) are left alone.
  std::set<std::string> removed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& n : network.nodes()) {
      if (n.kind != NodeKind::Random || removed.count(n.name)) continue;
      if (n.parents.empty()) continue;
      bool barren = true;
      for (const auto& c : network.childrenOf(n.name))
        if (!removed.count(c)) barren = false;
      if (barren) {
        removed.insert(n.name);
        changed = true;
      }
    }
  }
  if (removed.empty()) return network;
  std::vector<Node> kept;
  for (const auto& n : network.nodes())
    if (!removed.count(n.name)) kept.push_back(n);
  return InfluenceDiagram(std::move(kept));
}

}  // namespace ideval
