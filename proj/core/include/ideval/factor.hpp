#ifndef IDEVAL_FACTOR_HPP
#define IDEVAL_FACTOR_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ideval/variable.hpp"

namespace ideval {

// Running tally of the scalar work done by table operations. Drivers thread
// one counter through a whole query; `maxFactorSize` records the largest
// scope (number of variables) seen among the factors noted into the counter.
// `eliminationMultiplications` is managed by the inference/fusion drivers:
// it freezes the multiplication count accumulated during the elimination
// loop proper, before the final assembly products.
struct InferenceStats {
  long long multiplications = 0;
  long long additions = 0;
  long long divisions = 0;
  int maxFactorSize = 0;
  long long eliminationMultiplications = 0;

  void noteFactor(std::size_t scopeSize) {
    if (static_cast<int>(scopeSize) > maxFactorSize)
      maxFactorSize = static_cast<int>(scopeSize);
  }
  void merge(const InferenceStats& o) {
    multiplications += o.multiplications;
    additions += o.additions;
    divisions += o.divisions;
    eliminationMultiplications += o.eliminationMultiplications;
    if (o.maxFactorSize > maxFactorSize) maxFactorSize = o.maxFactorSize;
  }
};

// Records, per configuration of `scope`, which value of `maximized` attained
// the maximum when that variable was maxed out of a factor. Ties resolve to
// the smallest index.
struct ArgTable {
  std::vector<Variable> scope;  // sorted by name, row-major
  Variable maximized;
  std::vector<int> choices;

  // Choice at a full configuration given as (variable name -> value) lookup.
  int choiceAt(std::span<const int> config) const;
};

// A dense real-valued table over an ordered set of distinct variables.
// The scope is sorted by variable name at construction and the table is
// stored row-major in that order (the last scope variable varies fastest).
// A factor with empty scope is a scalar. Probability factors are
// nonnegative; utility factors may carry any sign. Factors are immutable
// values: every operation returns a new factor.
class Factor {
 public:
  Factor() : values_(1, 1.0) {}  // scalar 1, the empty product
  explicit Factor(double scalar) : values_(1, scalar) {}
  // `values` are given row-major in the order of `scope` as passed in;
  // the constructor sorts the scope by name and permutes the table to match.
  Factor(std::vector<Variable> scope, std::vector<double> values);

  const std::vector<Variable>& scope() const { return scope_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool isScalar() const { return scope_.empty(); }
  double scalarValue() const;

  bool inScope(const std::string& name) const;
  int scopeIndex(const std::string& name) const;  // -1 when absent

  // Entry at a configuration given in scope order.
  double at(std::span<const int> config) const;
  std::size_t linearIndex(std::span<const int> config) const;

  // Strides of each scope variable in the row-major layout.
  const std::vector<std::size_t>& strides() const { return strides_; }

  double sum() const;
  double maxValue() const;
  double minValue() const;

 private:
  std::vector<Variable> scope_;
  std::vector<std::size_t> strides_;
  std::vector<double> values_;

  void initStrides();
  friend Factor makeCanonical(std::vector<Variable> scope,
                              std::vector<double> values);
};

// Entrywise product over the union of scopes. Shared variables must agree on
// cardinality. Counts one multiplication per entry of the result.
Factor product(const Factor& f, const Factor& g, InferenceStats* stats = nullptr);

// Marginalizes x out of f. x must be in scope.
Factor sumOut(const Factor& f, const Variable& x, InferenceStats* stats = nullptr);

// Maximizes x out of f; the ArgTable holds the smallest maximizing index per
// remaining configuration.
std::pair<Factor, ArgTable> maxOut(const Factor& f, const Variable& x);

// Entrywise quotient f/g with scope(g) contained in scope(f). 0/0 is taken
// to be 0; any other division by zero throws.
Factor divide(const Factor& f, const Factor& g, InferenceStats* stats = nullptr);

// Slice of f at x = value; x leaves the scope.
Factor restrict(const Factor& f, const Variable& x, int value);

// Entrywise sum over the union of scopes (broadcasting as in product).
Factor add(const Factor& f, const Factor& g, InferenceStats* stats = nullptr);

// f scaled by a constant. Counts one multiplication per entry.
Factor scale(const Factor& f, double c, InferenceStats* stats = nullptr);

// Broadcast copy of f onto a larger scope; pure data movement, not counted.
Factor expandTo(const Factor& f, const std::vector<Variable>& scope);

// Fold of a list of factors; an empty list yields scalar 1.
Factor productAll(const std::vector<Factor>& fs, InferenceStats* stats = nullptr);
Factor addAll(const std::vector<Factor>& fs, InferenceStats* stats = nullptr);

}  // namespace ideval

#endif  // IDEVAL_FACTOR_HPP
