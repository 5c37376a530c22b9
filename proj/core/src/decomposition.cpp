#include "ideval/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ideval {

namespace {

Factor uniformPrior(const Variable& v) {
  std::vector<double> vals(static_cast<std::size_t>(v.cardinality),
                           1.0 / v.cardinality);
  return Factor({v}, std::move(vals));
}

std::string freshName(const InfluenceDiagram& diagram, std::string base) {
  while (diagram.has(base)) base += "_";
  return base;
}

}  // namespace

TailDecomposition decompose(const InfluenceDiagram& diagram, const std::string& d) {
  if (tailDecisionNode(diagram) != d)
    throw std::invalid_argument("'" + d + "' is not the tail decision node");
  TailDecomposition out;
  out.decision = d;
  const Node& dn = diagram.node(d);
  std::set<std::string> pa(dn.parents.begin(), dn.parents.end());

  std::set<std::string> reach = moralReachable(diagram, d, pa);
  for (const auto& name : diagram.names()) {
    if (pa.count(name)) continue;
    if (reach.count(name))
      out.downstream.insert(name);
    else
      out.upstream.insert(name);
  }

  for (const auto& p : pa) {
    bool downstreamParent = false;
    for (const auto& q : diagram.node(p).parents)
      if (out.downstream.count(q)) downstreamParent = true;
    if (downstreamParent)
      out.parents2.insert(p);
    else
      out.parents1.insert(p);
  }

  for (const auto& p : out.parents1) {
    bool relevant = false;
    for (const auto& c : diagram.childrenOf(p)) {
      if (c == d) continue;
      if (out.parents2.count(c) || out.downstream.count(c)) relevant = true;
    }
    if (!relevant) out.irrelevantParents.insert(p);
  }
  for (const auto& p : pa)
    if (!out.irrelevantParents.count(p)) out.relevantParents.insert(p);

  for (const auto& name : out.downstream)
    if (diagram.node(name).kind == NodeKind::Value) out.tailValues.insert(name);

  // parents2 ordered so no member is an ancestor of an earlier one;
  // lexicographic among incomparables.
  std::map<std::string, std::set<std::string>> strictAncestors;
  for (const auto& c : out.parents2) {
    std::set<std::string> anc = ancestralSet(diagram, {c});
    anc.erase(c);
    std::set<std::string> inSet;
    for (const auto& a : anc)
      if (out.parents2.count(a)) inSet.insert(a);
    strictAncestors[c] = std::move(inSet);
  }
  std::set<std::string> pending = out.parents2;
  while (!pending.empty()) {
    std::string pick;
    for (const auto& c : pending) {  // lexicographic scan
      bool ready = true;
      for (const auto& a : strictAncestors[c])
        if (pending.count(a)) ready = false;
      if (ready) {
        pick = c;
        break;
      }
    }
    out.parents2Order.push_back(pick);
    pending.erase(pick);
  }
  return out;
}

Node cooperTransform(const Node& valueNode) {
  if (valueNode.kind != NodeKind::Value)
    throw std::invalid_argument("cooperTransform expects a value node");
  const Factor& f = valueNode.table;
  const double lowest = f.size() ? f.minValue() : 0.0;
  const double shift = lowest < 0.0 ? -lowest : 0.0;

  std::vector<double> shifted = f.values();
  for (double& v : shifted) v += shift;
  double m = 0.0;
  for (double v : shifted) m = std::max(m, v);

  Variable self{valueNode.name, 2, {}};
  std::vector<Variable> scope = f.scope();
  scope.push_back(self);
  std::vector<double> cpt(shifted.size() * 2);
  for (std::size_t i = 0; i < shifted.size(); ++i) {
    const double p1 = m > 0.0 ? shifted[i] / m : 0.0;
    cpt[2 * i] = 1.0 - p1;
    cpt[2 * i + 1] = p1;
  }

  Node out;
  out.name = valueNode.name;
  out.kind = NodeKind::Random;
  out.cardinality = 2;
  out.parents = valueNode.parents;
  out.table = Factor(std::move(scope), std::move(cpt));
  out.encoding = UtilityEncoding{m, shift, f};
  return out;
}

InfluenceDiagram tail(const InfluenceDiagram& diagram, const TailDecomposition& decomp) {
  std::vector<Node> out;
  std::set<std::string> uniformed = decomp.parents1;
  uniformed.insert(decomp.decision);
  for (const auto& n : diagram.nodes()) {
    if (decomp.upstream.count(n.name)) continue;
    if (uniformed.count(n.name)) {
      Node t;
      t.name = n.name;
      t.kind = NodeKind::Random;
      t.cardinality = n.cardinality;
      t.labels = n.labels;
      t.table = uniformPrior(n.variable());
      out.push_back(std::move(t));
    } else if (n.kind == NodeKind::Value) {
      out.push_back(cooperTransform(n));
    } else {
      out.push_back(n);  // parents2 and downstream randoms keep their tables
    }
  }
  return InfluenceDiagram(std::move(out));
}

InfluenceDiagram reducedTail(const InfluenceDiagram& diagram,
                             const TailDecomposition& decomp) {
  InfluenceDiagram full = tail(diagram, decomp);
  if (decomp.irrelevantParents.empty()) return full;
  std::vector<Node> kept;
  for (const auto& n : full.nodes())
    if (!decomp.irrelevantParents.count(n.name)) kept.push_back(n);
  return InfluenceDiagram(std::move(kept));
}

InfluenceDiagram body(const InfluenceDiagram& diagram, const TailDecomposition& decomp) {
  std::set<std::string> keptDownstream;
  if (!decomp.parents2.empty()) {
    std::set<std::string> anc = ancestralSet(diagram, decomp.parents2);
    for (const auto& name : decomp.downstream)
      if (anc.count(name)) keptDownstream.insert(name);
  }
  std::vector<Node> out;
  for (const auto& n : diagram.nodes()) {
    if (decomp.downstream.count(n.name) && !keptDownstream.count(n.name)) continue;
    out.push_back(n);
  }
  return InfluenceDiagram(std::move(out));
}

InfluenceDiagram augmentedBody(const InfluenceDiagram& diagram,
                               const TailDecomposition& decomp,
                               const Factor& functional) {
  std::set<std::string> expect = decomp.relevantParents;
  expect.insert(decomp.decision);
  std::set<std::string> got;
  for (const auto& v : functional.scope()) got.insert(v.name);
  if (got != expect)
    throw std::invalid_argument(
        "functional scope must be the relevant parents plus the decision");

  InfluenceDiagram b = body(diagram, decomp);
  auto [utility, rule] = maxOut(functional, diagram.node(decomp.decision).variable());
  (void)rule;

  Node u;
  u.name = freshName(b, "u_" + decomp.decision);
  u.kind = NodeKind::Value;
  u.parents.assign(decomp.relevantParents.begin(), decomp.relevantParents.end());
  u.table = std::move(utility);

  std::vector<Node> nodes = b.nodes();
  nodes.push_back(std::move(u));
  return InfluenceDiagram(std::move(nodes));
}

InfluenceDiagram reducedBody(const InfluenceDiagram& augBody,
                             const Factor& relevantMarginal,
                             const InfluenceDiagram& tailNetwork,
                             const TailDecomposition& decomp) {
  if (decomp.parents2.empty())
    throw std::invalid_argument("reducedBody requires a nonempty parents2 set");
  std::set<std::string> got;
  for (const auto& v : relevantMarginal.scope()) got.insert(v.name);
  if (got != decomp.relevantParents)
    throw std::invalid_argument("marginal scope must equal the relevant parents");

  // Z: relevant parents outside parents2. Z_i: members that are ancestors,
  // in the tail, of one of the first i entries of parents2Order.
  std::set<std::string> z;
  for (const auto& p : decomp.relevantParents)
    if (decomp.parents1.count(p)) z.insert(p);
  std::map<std::string, std::set<std::string>> tailDescendants;
  for (const auto& zn : z) tailDescendants[zn] = tailNetwork.descendantsOf(zn);

  const auto& order = decomp.parents2Order;
  std::map<std::string, Node> rebuilt;
  std::set<std::string> zPrefix;  // Z_i, grows with i
  std::vector<std::string> cPrefix;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::string& ci = order[i];
    for (const auto& zn : z)
      if (tailDescendants[zn].count(ci)) zPrefix.insert(zn);

    // Sum the later parents2 members and Z \ Z_i out of the marginal.
    Factor num = relevantMarginal;
    for (std::size_t j = i + 1; j < order.size(); ++j)
      num = sumOut(num, tailNetwork.node(order[j]).variable());
    for (const auto& zn : z)
      if (!zPrefix.count(zn)) num = sumOut(num, tailNetwork.node(zn).variable());
    Factor den = sumOut(num, tailNetwork.node(ci).variable());

    Node n = augBody.node(ci);
    n.parents.clear();
    for (const auto& c : cPrefix) n.parents.push_back(c);
    for (const auto& zn : zPrefix) n.parents.push_back(zn);
    std::sort(n.parents.begin(), n.parents.end());
    n.table = divide(num, den);
    rebuilt[ci] = std::move(n);
    cPrefix.push_back(ci);
  }

  std::vector<Node> out;
  for (const auto& n : augBody.nodes()) {
    if (decomp.downstream.count(n.name)) continue;
    auto it = rebuilt.find(n.name);
    out.push_back(it != rebuilt.end() ? it->second : n);
  }
  return InfluenceDiagram(std::move(out));
}

}  // namespace ideval
