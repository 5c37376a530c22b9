#include "ideval/inference.hpp"

#include <algorithm>
#include <stdexcept>

namespace ideval {

InfluenceDiagram relevancePrune(const InfluenceDiagram& bn,
                                const std::set<std::string>& targets) {
  for (const auto& t : targets)
    if (!bn.has(t)) throw std::invalid_argument("unknown target '" + t + "'");
  std::set<std::string> keep = ancestralSet(bn, targets);
  if (keep.size() == bn.nodes().size()) return bn;
  std::vector<Node> kept;
  for (const auto& n : bn.nodes())
    if (keep.count(n.name)) kept.push_back(n);
  return InfluenceDiagram(std::move(kept));
}

EliminationOrder minFillOrder(const InfluenceDiagram& bn,
                              const std::set<std::string>& keep) {
  MoralGraph g = moralGraph(bn);
  std::set<std::string> pending;
  for (const auto& n : bn.nodes())
    if (!keep.count(n.name)) pending.insert(n.name);

  EliminationOrder order;
  while (!pending.empty()) {
    std::string best;
    long bestFill = -1;
    for (const auto& cand : pending) {  // set iteration = lexicographic ties
      const auto& nbrs = g.adjacency.at(cand);
      long fill = 0;
      for (auto it = nbrs.begin(); it != nbrs.end(); ++it) {
        auto jt = it;
        for (++jt; jt != nbrs.end(); ++jt)
          if (!g.adjacency.at(*it).count(*jt)) ++fill;
      }
      if (bestFill < 0 || fill < bestFill) {
        bestFill = fill;
        best = cand;
      }
    }
    // Connect the eliminated node's neighbours, then drop it.
    const std::set<std::string> nbrs = g.adjacency.at(best);
    for (auto it = nbrs.begin(); it != nbrs.end(); ++it) {
      auto jt = it;
      for (++jt; jt != nbrs.end(); ++jt) {
        g.adjacency.at(*it).insert(*jt);
        g.adjacency.at(*jt).insert(*it);
      }
      g.adjacency.at(*it).erase(best);
    }
    g.adjacency.erase(best);
    pending.erase(best);
    order.sequence.push_back(best);
  }
  return order;
}

InferenceResult infer(const InfluenceDiagram& bn,
                      const std::set<std::string>& query,
                      const std::map<std::string, int>& evidence,
                      const std::optional<EliminationOrder>& order) {
  if (!bn.isBayesNet())
    throw std::invalid_argument("inference requires a network of random nodes only");
  for (const auto& q : query)
    if (!bn.has(q)) throw std::invalid_argument("query variable '" + q + "' absent from network");
  for (const auto& [name, value] : evidence) {
    if (!bn.has(name))
      throw std::invalid_argument("evidence variable '" + name + "' absent from network");
    const Node& n = bn.node(name);
    if (value < 0 || value >= n.cardinality)
      throw std::invalid_argument("evidence value out of range for '" + name + "'");
  }

  std::set<std::string> retained = query;
  for (const auto& [name, value] : evidence) retained.insert(name);

  EliminationOrder rho;
  if (order) {
    rho = *order;
    std::set<std::string> expect;
    for (const auto& n : bn.nodes())
      if (!retained.count(n.name)) expect.insert(n.name);
    std::set<std::string> got(rho.sequence.begin(), rho.sequence.end());
    if (got != expect || rho.sequence.size() != got.size())
      throw std::invalid_argument("elimination order does not cover the eliminable set");
  } else {
    rho = minFillOrder(bn, retained);
  }

  InferenceResult result;
  InferenceStats& stats = result.stats;
  result.networkSize = static_cast<int>(bn.nodes().size());

  // Restrict every CPT on the evidence up front; evidence variables then
  // never appear in any factor.
  std::vector<Factor> factors;
  factors.reserve(bn.nodes().size());
  for (const auto& n : bn.nodes()) {
    Factor f = n.table;
    for (const auto& [name, value] : evidence)
      if (f.inScope(name)) f = restrict(f, bn.node(name).variable(), value);
    stats.noteFactor(f.scope().size());
    factors.push_back(std::move(f));
  }

  for (const auto& x : rho.sequence) {
    const Variable xv = bn.node(x).variable();
    std::vector<Factor> involved;
    std::vector<Factor> rest;
    for (auto& f : factors) {
      if (f.inScope(x))
        involved.push_back(std::move(f));
      else
        rest.push_back(std::move(f));
    }
    factors = std::move(rest);
    if (involved.empty()) continue;
    Factor prod = productAll(involved, &stats);
    if (involved.size() == 1) stats.noteFactor(prod.scope().size());
    factors.push_back(sumOut(prod, xv, &stats));
  }
  stats.eliminationMultiplications = stats.multiplications;

  result.marginal = productAll(factors, &stats);
  stats.noteFactor(result.marginal.scope().size());
  return result;
}

}  // namespace ideval
