#include "ideval/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ideval {

namespace {

std::size_t tableSize(const std::vector<Variable>& scope) {
  std::size_t n = 1;
  for (const auto& v : scope) {
    if (v.cardinality < 1)
      throw std::invalid_argument("variable '" + v.name +
                                  "' has cardinality < 1");
    n *= static_cast<std::size_t>(v.cardinality);
  }
  return n;
}

// Merge two sorted scopes; shared names must agree on cardinality.
std::vector<Variable> mergeScopes(const std::vector<Variable>& a,
                                  const std::vector<Variable>& b) {
  std::vector<Variable> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].name < b[j].name) {
      out.push_back(a[i++]);
    } else if (b[j].name < a[i].name) {
      out.push_back(b[j++]);
    } else {
      if (a[i].cardinality != b[j].cardinality)
        throw std::invalid_argument("variable '" + a[i].name +
                                    "' has conflicting cardinalities");
      out.push_back(a[i++]);
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

// Stride of each `result` variable inside `operand`, 0 when absent.
std::vector<std::size_t> operandStrides(const std::vector<Variable>& result,
                                        const Factor& operand) {
  std::vector<std::size_t> strides(result.size(), 0);
  for (std::size_t k = 0; k < result.size(); ++k) {
    int idx = operand.scopeIndex(result[k].name);
    if (idx >= 0) strides[k] = operand.strides()[idx];
  }
  return strides;
}

// Iterates all configurations of `scope` row-major, keeping running offsets
// into two operand tables.
template <typename Fn>
void forEachAligned(const std::vector<Variable>& scope,
                    const std::vector<std::size_t>& fStride,
                    const std::vector<std::size_t>& gStride, Fn&& fn) {
  const std::size_t n = scope.size();
  std::vector<int> config(n, 0);
  std::size_t offF = 0, offG = 0;
  const std::size_t total = tableSize(scope);
  for (std::size_t idx = 0;;) {
    fn(idx, offF, offG);
    if (++idx == total) break;
    for (std::size_t j = n; j-- > 0;) {
      ++config[j];
      offF += fStride[j];
      offG += gStride[j];
      if (config[j] < scope[j].cardinality) break;
      offF -= fStride[j] * static_cast<std::size_t>(scope[j].cardinality);
      offG -= gStride[j] * static_cast<std::size_t>(scope[j].cardinality);
      config[j] = 0;
    }
  }
}

}  // namespace

void Factor::initStrides() {
  strides_.assign(scope_.size(), 1);
  for (std::size_t i = scope_.size(); i-- > 1;)
    strides_[i - 1] =
        strides_[i] * static_cast<std::size_t>(scope_[i].cardinality);
}

Factor::Factor(std::vector<Variable> scope, std::vector<double> values) {
  const std::size_t expect = tableSize(scope);
  if (values.size() != expect)
    throw std::invalid_argument("table has " + std::to_string(values.size()) +
                                " entries, scope requires " +
                                std::to_string(expect));
  for (std::size_t i = 1; i < scope.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (scope[i].name == scope[j].name)
        throw std::invalid_argument("duplicate variable '" + scope[i].name +
                                    "' in factor scope");
  // Sort the scope by name, permuting the table to match.
  std::vector<std::size_t> perm(scope.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return scope[a].name < scope[b].name;
  });
  bool identity = true;
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != i) identity = false;

  scope_.reserve(scope.size());
  for (std::size_t i : perm) scope_.push_back(scope[i]);
  initStrides();

  if (identity) {
    values_ = std::move(values);
    return;
  }
  // Given-order strides, then walk the sorted layout reading from the
  // original table.
  std::vector<std::size_t> givenStrides(scope.size(), 1);
  for (std::size_t i = scope.size(); i-- > 1;)
    givenStrides[i - 1] =
        givenStrides[i] * static_cast<std::size_t>(scope[i].cardinality);
  std::vector<std::size_t> srcStride(scope.size());
  for (std::size_t k = 0; k < perm.size(); ++k) srcStride[k] = givenStrides[perm[k]];

  values_.resize(values.size());
  std::vector<int> config(scope_.size(), 0);
  std::size_t src = 0;
  for (std::size_t dst = 0;;) {
    values_[dst] = values[src];
    if (++dst == values_.size()) break;
    for (std::size_t j = scope_.size(); j-- > 0;) {
      ++config[j];
      src += srcStride[j];
      if (config[j] < scope_[j].cardinality) break;
      src -= srcStride[j] * static_cast<std::size_t>(scope_[j].cardinality);
      config[j] = 0;
    }
  }
}

double Factor::scalarValue() const {
  if (!scope_.empty())
    throw std::logic_error("scalarValue() on a non-scalar factor");
  return values_[0];
}

bool Factor::inScope(const std::string& name) const {
  return scopeIndex(name) >= 0;
}

int Factor::scopeIndex(const std::string& name) const {
  auto it = std::lower_bound(
      scope_.begin(), scope_.end(), name,
      [](const Variable& v, const std::string& n) { return v.name < n; });
  if (it != scope_.end() && it->name == name)
    return static_cast<int>(it - scope_.begin());
  return -1;
}

std::size_t Factor::linearIndex(std::span<const int> config) const {
  if (config.size() != scope_.size())
    throw std::invalid_argument("configuration length does not match scope");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (config[i] < 0 || config[i] >= scope_[i].cardinality)
      throw std::out_of_range("value out of range for variable '" +
                              scope_[i].name + "'");
    idx += strides_[i] * static_cast<std::size_t>(config[i]);
  }
  return idx;
}

double Factor::at(std::span<const int> config) const {
  return values_[linearIndex(config)];
}

double Factor::sum() const {
  double s = 0;
  for (double v : values_) s += v;
  return s;
}

double Factor::maxValue() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::max(m, v);
  return m;
}

double Factor::minValue() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::min(m, v);
  return m;
}

int ArgTable::choiceAt(std::span<const int> config) const {
  if (config.size() != scope.size())
    throw std::invalid_argument("configuration length does not match scope");
  std::size_t idx = 0, stride = 1;
  for (std::size_t i = scope.size(); i-- > 0;) {
    idx += stride * static_cast<std::size_t>(config[i]);
    stride *= static_cast<std::size_t>(scope[i].cardinality);
  }
  return choices[idx];
}

Factor product(const Factor& f, const Factor& g, InferenceStats* stats) {
  std::vector<Variable> scope = mergeScopes(f.scope(), g.scope());
  std::vector<double> out(tableSize(scope));
  const auto fs = operandStrides(scope, f);
  const auto gs = operandStrides(scope, g);
  const auto& fv = f.values();
  const auto& gv = g.values();
  forEachAligned(scope, fs, gs, [&](std::size_t idx, std::size_t a, std::size_t b) {
    out[idx] = fv[a] * gv[b];
  });
  if (stats) {
    stats->multiplications += static_cast<long long>(out.size());
    stats->noteFactor(scope.size());
  }
  return Factor(std::move(scope), std::move(out));
}

Factor add(const Factor& f, const Factor& g, InferenceStats* stats) {
  std::vector<Variable> scope = mergeScopes(f.scope(), g.scope());
  std::vector<double> out(tableSize(scope));
  const auto fs = operandStrides(scope, f);
  const auto gs = operandStrides(scope, g);
  const auto& fv = f.values();
  const auto& gv = g.values();
  forEachAligned(scope, fs, gs, [&](std::size_t idx, std::size_t a, std::size_t b) {
    out[idx] = fv[a] + gv[b];
  });
  if (stats) {
    stats->additions += static_cast<long long>(out.size());
    stats->noteFactor(scope.size());
  }
  return Factor(std::move(scope), std::move(out));
}

Factor divide(const Factor& f, const Factor& g, InferenceStats* stats) {
  for (const auto& v : g.scope())
    if (!f.inScope(v.name))
      throw std::invalid_argument("divisor scope is not contained in dividend scope");
  std::vector<Variable> scope = f.scope();
  std::vector<double> out(f.size());
  const auto fs = operandStrides(scope, f);
  const auto gs = operandStrides(scope, g);
  const auto& fv = f.values();
  const auto& gv = g.values();
  forEachAligned(scope, fs, gs, [&](std::size_t idx, std::size_t a, std::size_t b) {
    const double num = fv[a], den = gv[b];
    if (den == 0.0) {
      if (num != 0.0)
        throw std::domain_error("division of a nonzero entry by zero");
      out[idx] = 0.0;  // 0/0 := 0
    } else {
      out[idx] = num / den;
    }
  });
  if (stats) {
    stats->divisions += static_cast<long long>(out.size());
    stats->noteFactor(scope.size());
  }
  return Factor(std::move(scope), std::move(out));
}

Factor sumOut(const Factor& f, const Variable& x, InferenceStats* stats) {
  const int pos = f.scopeIndex(x.name);
  if (pos < 0)
    throw std::invalid_argument("variable '" + x.name + "' not in factor scope");
  const int card = f.scope()[pos].cardinality;
  const std::size_t xStride = f.strides()[pos];

  std::vector<Variable> scope;
  for (std::size_t i = 0; i < f.scope().size(); ++i)
    if (static_cast<int>(i) != pos) scope.push_back(f.scope()[i]);
  std::vector<double> out(tableSize(scope));

  std::vector<std::size_t> fStride(scope.size());
  for (std::size_t k = 0; k < scope.size(); ++k)
    fStride[k] = f.strides()[f.scopeIndex(scope[k].name)];
  const auto& fv = f.values();
  forEachAligned(scope, fStride, fStride,
                 [&](std::size_t idx, std::size_t base, std::size_t) {
                   double acc = fv[base];
                   for (int a = 1; a < card; ++a)
                     acc += fv[base + xStride * static_cast<std::size_t>(a)];
                   out[idx] = acc;
                 });
  if (stats) {
    stats->additions +=
        static_cast<long long>(out.size()) * static_cast<long long>(card - 1);
    stats->noteFactor(scope.size());
  }
  return Factor(std::move(scope), std::move(out));
}

std::pair<Factor, ArgTable> maxOut(const Factor& f, const Variable& x) {
  const int pos = f.scopeIndex(x.name);
  if (pos < 0)
    throw std::invalid_argument("variable '" + x.name + "' not in factor scope");
  const int card = f.scope()[pos].cardinality;
  const std::size_t xStride = f.strides()[pos];

  std::vector<Variable> scope;
  for (std::size_t i = 0; i < f.scope().size(); ++i)
    if (static_cast<int>(i) != pos) scope.push_back(f.scope()[i]);
  std::vector<double> out(tableSize(scope));
  std::vector<int> choice(out.size(), 0);

  std::vector<std::size_t> fStride(scope.size());
  for (std::size_t k = 0; k < scope.size(); ++k)
    fStride[k] = f.strides()[f.scopeIndex(scope[k].name)];
  const auto& fv = f.values();
  forEachAligned(scope, fStride, fStride,
                 [&](std::size_t idx, std::size_t base, std::size_t) {
                   double best = fv[base];
                   int bestA = 0;
                   for (int a = 1; a < card; ++a) {
                     const double v = fv[base + xStride * static_cast<std::size_t>(a)];
                     if (v > best) {
                       best = v;
                       bestA = a;
                     }
                   }
                   out[idx] = best;
                   choice[idx] = bestA;
                 });
  ArgTable table;
  table.scope = scope;
  table.maximized = f.scope()[pos];
  table.choices = std::move(choice);
  return {Factor(std::move(scope), std::move(out)), std::move(table)};
}

Factor restrict(const Factor& f, const Variable& x, int value) {
  const int pos = f.scopeIndex(x.name);
  if (pos < 0)
    throw std::invalid_argument("variable '" + x.name + "' not in factor scope");
  if (value < 0 || value >= f.scope()[pos].cardinality)
    throw std::out_of_range("value " + std::to_string(value) +
                            " out of range for variable '" + x.name + "'");
  const std::size_t xStride = f.strides()[pos];

  std::vector<Variable> scope;
  for (std::size_t i = 0; i < f.scope().size(); ++i)
    if (static_cast<int>(i) != pos) scope.push_back(f.scope()[i]);
  std::vector<double> out(tableSize(scope));

  std::vector<std::size_t> fStride(scope.size());
  for (std::size_t k = 0; k < scope.size(); ++k)
    fStride[k] = f.strides()[f.scopeIndex(scope[k].name)];
  const std::size_t offset = xStride * static_cast<std::size_t>(value);
  const auto& fv = f.values();
  forEachAligned(scope, fStride, fStride,
                 [&](std::size_t idx, std::size_t base, std::size_t) {
                   out[idx] = fv[base + offset];
                 });
  return Factor(std::move(scope), std::move(out));
}

Factor scale(const Factor& f, double c, InferenceStats* stats) {
  std::vector<double> out(f.values());
  for (double& v : out) v *= c;
  if (stats) {
    stats->multiplications += static_cast<long long>(out.size());
    stats->noteFactor(f.scope().size());
  }
  return Factor(f.scope(), std::move(out));
}

Factor expandTo(const Factor& f, const std::vector<Variable>& scope) {
  std::vector<Variable> sorted = scope;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& v : f.scope())
    if (!std::binary_search(sorted.begin(), sorted.end(), v))
      throw std::invalid_argument("expandTo target must contain the factor scope");
  std::vector<double> out(tableSize(sorted));
  const auto fs = operandStrides(sorted, f);
  const auto& fv = f.values();
  forEachAligned(sorted, fs, fs,
                 [&](std::size_t idx, std::size_t a, std::size_t) {
                   out[idx] = fv[a];
                 });
  return Factor(std::move(sorted), std::move(out));
}

Factor productAll(const std::vector<Factor>& fs, InferenceStats* stats) {
  Factor acc;  // scalar 1
  bool first = true;
  for (const auto& f : fs) {
    acc = first ? f : product(acc, f, stats);
    first = false;
  }
  return acc;
}

Factor addAll(const std::vector<Factor>& fs, InferenceStats* stats) {
  if (fs.empty()) return Factor(0.0);
  Factor acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = add(acc, fs[i], stats);
  return acc;
}

}  // namespace ideval
