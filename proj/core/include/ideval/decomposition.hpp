#ifndef IDEVAL_DECOMPOSITION_HPP
#define IDEVAL_DECOMPOSITION_HPP

#include <set>
#include <string>
#include <vector>

#include "ideval/diagram.hpp"

namespace ideval {

// The partition of a diagram around its tail decision node d.
//
//   upstream   nodes outside pa(d) separated from d by pa(d) in the moral graph
//   downstream the rest of the non-parent nodes; d itself is downstream
//   parents2   parents of d with at least one downstream parent
//   parents1   the remaining parents of d
//   irrelevantParents  members of parents1 with no child in
//                      (parents2 or downstream) other than d itself
//   relevantParents    pa(d) minus irrelevantParents
//   tailValues value nodes in the downstream set
//
// upstream, pa(d), and downstream partition the node set, and the optimal
// rule for d turns out to depend on relevantParents only.
struct TailDecomposition {
  std::string decision;
  std::set<std::string> upstream;
  std::set<std::string> downstream;
  std::set<std::string> parents1;
  std::set<std::string> parents2;
  std::set<std::string> irrelevantParents;
  std::set<std::string> relevantParents;
  std::set<std::string> tailValues;
  // parents2 in a topological order of the original diagram (no member is an
  // ancestor of an earlier one), lexicographic among incomparables.
  std::vector<std::string> parents2Order;
};

// Computes the partition; d must be the tail decision node.
TailDecomposition decompose(const InfluenceDiagram& diagram, const std::string& d);

// Encodes a utility table as a binary random node: the table is shifted up
// to be nonnegative when needed, then divided by its maximum M so that
// P(v=1 | parents) = (utility + shift) / M. The returned node remembers
// (M, shift, original table). A constant-zero table after shifting yields a
// degenerate node with P(v=1) = 0 and scale 0.
Node cooperTransform(const Node& valueNode);

// The tail: upstream nodes pruned; d and parents1 stripped of parents and
// given uniform priors; downstream value nodes encoded as binary randoms.
// The result is a Bayesian network over pa(d) and the downstream set.
InfluenceDiagram tail(const InfluenceDiagram& diagram, const TailDecomposition& decomp);

// The tail minus irrelevantParents (which are isolated there); node set is
// relevantParents plus the downstream set.
InfluenceDiagram reducedTail(const InfluenceDiagram& diagram,
                             const TailDecomposition& decomp);

// The body: the diagram minus the downstream nodes that are not ancestors of
// parents2. Every other decision keeps its parent set.
InfluenceDiagram body(const InfluenceDiagram& diagram, const TailDecomposition& decomp);

// The body plus a fresh value node whose parents are relevantParents and
// whose utility is max over d of `functional`, which must be a factor over
// relevantParents and d.
InfluenceDiagram augmentedBody(const InfluenceDiagram& diagram,
                               const TailDecomposition& decomp,
                               const Factor& functional);

// Prunes the remaining downstream nodes from the augmented body and rebuilds
// the parents2 members as chance nodes conditioned on their predecessors in
// parents2Order plus the relevant upstream parents that are their ancestors
// in the tail. The new tables are ratios of marginals of `relevantMarginal`
// (a factor over relevantParents), with 0/0 taken as 0. Callers skip this
// step when parents2 is empty.
InfluenceDiagram reducedBody(const InfluenceDiagram& augBody,
                             const Factor& relevantMarginal,
                             const InfluenceDiagram& tailNetwork,
                             const TailDecomposition& decomp);

}  // namespace ideval

#endif  // IDEVAL_DECOMPOSITION_HPP
