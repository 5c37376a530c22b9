#include "ideval/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ideval {

namespace {

// Thin wrappers so generated structures do not depend on the standard
// library's distribution implementations.
int rndInt(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double rndReal(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

std::vector<int> sampleDistinct(std::mt19937_64& rng, int upper, int count) {
  std::vector<int> pool(upper);
  for (int i = 0; i < upper; ++i) pool[i] = i;
  std::vector<int> out;
  for (int i = 0; i < count; ++i) {
    const int j = rndInt(rng, 0, static_cast<int>(pool.size()) - 1);
    out.push_back(pool[j]);
    pool.erase(pool.begin() + j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Factor randomCpt(std::mt19937_64& rng, const std::vector<Variable>& parents,
                 const Variable& self) {
  std::vector<Variable> scope = parents;
  scope.push_back(self);
  std::size_t rows = 1;
  for (const auto& p : parents) rows *= static_cast<std::size_t>(p.cardinality);
  const int card = self.cardinality;
  std::vector<double> vals(rows * static_cast<std::size_t>(card));
  const int style = rndInt(rng, 0, 9);  // 0-6 smooth, 7-8 sparse, 9 deterministic
  for (std::size_t r = 0; r < rows; ++r) {
    if (style == 9) {
      const int hot = rndInt(rng, 0, card - 1);
      for (int a = 0; a < card; ++a)
        vals[r * card + a] = a == hot ? 1.0 : 0.0;
      continue;
    }
    double total = 0.0;
    for (int a = 0; a < card; ++a) {
      double w = rndReal(rng, 0.05, 1.0);
      if (style >= 7 && rndInt(rng, 0, 2) == 0) w = 0.0;
      vals[r * card + a] = w;
      total += w;
    }
    if (total == 0.0) {
      vals[r * card] = 1.0;
      total = 1.0;
    }
    for (int a = 0; a < card; ++a) vals[r * card + a] /= total;
  }
  return Factor(std::move(scope), std::move(vals));
}

Factor randomUtility(std::mt19937_64& rng, const std::vector<Variable>& parents) {
  std::size_t n = 1;
  for (const auto& p : parents) n *= static_cast<std::size_t>(p.cardinality);
  std::vector<double> vals(n);
  const int style = rndInt(rng, 0, 19);  // 0 constant, 1-2 nonnegative, rest signed
  if (style == 0) {
    const double c = rndReal(rng, -5.0, 10.0);
    for (auto& v : vals) v = c;
  } else if (style <= 2) {
    for (auto& v : vals) v = rndReal(rng, 0.0, 10.0);
  } else {
    for (auto& v : vals) v = rndReal(rng, -8.0, 12.0);
  }
  return Factor(parents, std::move(vals));
}

struct Draft {
  std::vector<Node> nodes;
  long double policyCount = 1;
  long double jointCount = 1;
};

Draft drawDiagram(std::mt19937_64& rng, const GeneratorConfig& cfg, int shrink) {
  const int maxD = std::max(cfg.minDecisions, cfg.maxDecisions - shrink);
  const int kD = rndInt(rng, cfg.minDecisions, maxD);
  const int kC = rndInt(rng, cfg.minChance, std::max(cfg.minChance, cfg.maxChance - shrink));
  const int kV = rndInt(rng, cfg.minValue, cfg.maxValue);

  struct Framed {
    std::string name;
    bool decision;
    Variable var;
    std::vector<std::string> parents;
  };
  const int n = kD + kC;
  std::vector<int> decisionPos = sampleDistinct(rng, n, kD);
  std::vector<Framed> seq(n);
  int di = 0, ci = 0;
  for (int i = 0; i < n; ++i) {
    const bool isDecision =
        di < kD && decisionPos[static_cast<std::size_t>(di)] == i;
    Framed f;
    f.decision = isDecision;
    if (isDecision) {
      f.name = "d" + std::to_string(++di);
      const int card = kD >= 3 ? 2 : rndInt(rng, 2, cfg.maxCardinality);
      f.var = Variable{f.name, card, {}};
    } else {
      f.name = "c" + std::to_string(++ci);
      f.var = Variable{f.name, rndInt(rng, 2, cfg.maxCardinality), {}};
    }
    seq[i] = std::move(f);
  }

  // Parents: chance nodes draw freely among predecessors; decisions carry
  // the previous decision and its parents forward plus a few chance extras.
  int lastDecision = -1;
  for (int i = 0; i < n; ++i) {
    Framed& f = seq[i];
    if (f.decision) {
      std::set<std::string> forced;
      if (lastDecision >= 0) {
        forced.insert(seq[lastDecision].name);
        for (const auto& p : seq[lastDecision].parents) forced.insert(p);
      }
      std::vector<int> chancePool;
      for (int j = 0; j < i; ++j)
        if (!seq[j].decision && !forced.count(seq[j].name)) chancePool.push_back(j);
      const int extraMax = kD >= 3 ? (rndInt(rng, 0, 3) == 0 ? 1 : 0)
                                   : rndInt(rng, 0, 2);
      const int extras =
          std::min<int>(extraMax, static_cast<int>(chancePool.size()));
      for (int idx : sampleDistinct(rng, static_cast<int>(chancePool.size()), extras))
        forced.insert(seq[chancePool[static_cast<std::size_t>(idx)]].name);
      f.parents.assign(forced.begin(), forced.end());
      lastDecision = i;
    } else if (i > 0) {
      const int count = rndInt(rng, 0, std::min(cfg.maxParents, i));
      for (int idx : sampleDistinct(rng, i, count))
        f.parents.push_back(seq[idx].name);
    }
  }

  // Occasionally wire a parent of the last decision to have a downstream
  // parent, so the body-reduction path gets exercised.
  bool inject = lastDecision >= 0 && kC + 3 <= cfg.maxChance &&
                kV + 1 <= cfg.maxValue && rndInt(rng, 0, 99) < 35;
  std::vector<Framed> extraSeq;
  if (inject) {
    const std::string dLast = seq[lastDecision].name;
    Framed q{"c" + std::to_string(++ci), false,
             Variable{"", rndInt(rng, 2, cfg.maxCardinality), {}}, {}};
    q.var.name = q.name;
    Framed c{"c" + std::to_string(++ci), false,
             Variable{"", rndInt(rng, 2, cfg.maxCardinality), {}}, {q.name}};
    c.var.name = c.name;
    Framed w{"c" + std::to_string(++ci), false,
             Variable{"", rndInt(rng, 2, cfg.maxCardinality), {}}, {q.name, dLast}};
    w.var.name = w.name;
    seq[lastDecision].parents.push_back(c.name);
    std::sort(seq[lastDecision].parents.begin(), seq[lastDecision].parents.end());
    extraSeq.push_back(std::move(q));
    extraSeq.push_back(std::move(c));
    extraSeq.push_back(std::move(w));
  }

  std::map<std::string, Variable> frames;
  std::vector<Framed> all;
  for (auto& f : seq) all.push_back(f);
  for (auto& f : extraSeq) all.push_back(f);
  for (const auto& f : all) frames[f.name] = f.var;

  Draft draft;
  for (const auto& f : all) {
    Node node;
    node.name = f.name;
    node.cardinality = f.var.cardinality;
    node.parents = f.parents;
    if (f.decision) {
      node.kind = NodeKind::Decision;
      std::size_t cells = 1;
      for (const auto& p : f.parents)
        cells *= static_cast<std::size_t>(frames.at(p).cardinality);
      draft.policyCount *= std::pow(static_cast<long double>(f.var.cardinality),
                                    static_cast<long double>(cells));
    } else {
      node.kind = NodeKind::Random;
      std::vector<Variable> parents;
      for (const auto& p : f.parents) parents.push_back(frames.at(p));
      node.table = randomCpt(rng, parents, f.var);
      draft.jointCount *= f.var.cardinality;
    }
    draft.nodes.push_back(std::move(node));
  }

  // Value nodes: the injected chain keeps its own sink so it survives
  // barren pruning; the rest attach to random framed nodes.
  const int totalValues = kV + (inject ? 1 : 0);
  for (int v = 0; v < totalValues; ++v) {
    Node node;
    node.name = "v" + std::to_string(v + 1);
    node.kind = NodeKind::Value;
    std::vector<std::string> parentNames;
    if (inject && v == totalValues - 1) {
      parentNames.push_back(all.back().name);  // the downstream chance node w
    } else {
      const int count = std::min<int>(rndInt(rng, 1, cfg.maxParents),
                                      static_cast<int>(all.size()));
      for (int idx : sampleDistinct(rng, static_cast<int>(all.size()), count))
        parentNames.push_back(all[static_cast<std::size_t>(idx)].name);
    }
    node.parents = parentNames;
    std::vector<Variable> parents;
    for (const auto& p : parentNames) parents.push_back(frames.at(p));
    node.table = randomUtility(rng, parents);
    draft.nodes.push_back(std::move(node));
  }
  return draft;
}

}  // namespace

InfluenceDiagram generateDiagram(std::uint64_t seed, const GeneratorConfig& cfg) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  for (int attempt = 0; attempt < 500; ++attempt) {
    const int shrink = attempt < 40 ? 0 : (attempt < 120 ? 1 : 2);
    Draft draft = drawDiagram(rng, cfg, shrink);
    if (draft.policyCount > cfg.policyCap) continue;
    if (draft.jointCount > cfg.jointCap) continue;
    if (draft.policyCount * draft.jointCount > cfg.costCap) continue;
    InfluenceDiagram diagram(std::move(draft.nodes));
    if (!validate(diagram).ok()) continue;  // belt and braces; not expected
    return diagram;
  }
  throw std::logic_error("generateDiagram failed to draw a feasible diagram");
}

InfluenceDiagram generateBayesNet(std::uint64_t seed, int maxNodes,
                                  int maxCardinality, int maxParents) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x853c49e6748fea9bULL);
  const int n = rndInt(rng, 1, maxNodes);
  std::vector<Variable> vars;
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) {
    Variable v{"x" + std::to_string(i + 1), rndInt(rng, 2, maxCardinality), {}};
    Node node;
    node.name = v.name;
    node.kind = NodeKind::Random;
    node.cardinality = v.cardinality;
    const int count = rndInt(rng, 0, std::min(maxParents, i));
    std::vector<Variable> parents;
    for (int idx : sampleDistinct(rng, i, count)) {
      node.parents.push_back(vars[static_cast<std::size_t>(idx)].name);
      parents.push_back(vars[static_cast<std::size_t>(idx)]);
    }
    node.table = randomCpt(rng, parents, v);
    vars.push_back(v);
    nodes.push_back(std::move(node));
  }
  return InfluenceDiagram(std::move(nodes));
}

InfluenceDiagram generateValueNetwork(std::uint64_t seed, int maxNodes,
                                      int maxCardinality, int maxValues) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0xda3e39cb94b95bdbULL);
  InfluenceDiagram bn = generateBayesNet(rng(), maxNodes, maxCardinality);
  std::vector<Node> nodes = bn.nodes();
  const int kV = rndInt(rng, 1, maxValues);
  const int n = static_cast<int>(nodes.size());
  for (int v = 0; v < kV; ++v) {
    Node node;
    node.name = "v" + std::to_string(v + 1);
    node.kind = NodeKind::Value;
    const int count = std::min(rndInt(rng, 1, 3), n);
    std::vector<Variable> parents;
    for (int idx : sampleDistinct(rng, n, count)) {
      node.parents.push_back(nodes[static_cast<std::size_t>(idx)].name);
      parents.push_back(nodes[static_cast<std::size_t>(idx)].variable());
    }
    node.table = randomUtility(rng, parents);
    nodes.push_back(std::move(node));
  }
  return InfluenceDiagram(std::move(nodes));
}

}  // namespace ideval
