#ifndef IDEVAL_IO_HPP
#define IDEVAL_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "ideval/evaluator.hpp"

namespace ideval {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

// Network text format, version 1. Lines are whitespace-separated tokens;
// '#' starts a comment. The first directive must be `idnet 1`. Every random
// or decision node needs a `variable` line; value nodes must not have one.
// Tables are flat and row-major with scope "parents in listed order, then
// the node itself", the last position varying fastest.
//
//   idnet 1
//   variable <name> <cardinality> [<label> ...]
//   random   <name> [<parent> ...] : <p> ...
//   decision <name> [<parent> ...]
//   value    <name> [<parent> ...] : <u> ...
InfluenceDiagram parseNetwork(const std::string& text);
InfluenceDiagram loadNetwork(const std::string& path);
std::string serializeNetwork(const InfluenceDiagram& diagram);
void saveNetwork(const InfluenceDiagram& diagram, const std::string& path);

struct PolicyEntry {
  std::string decision;
  std::vector<std::string> scope;
  std::vector<int> table;
  friend bool operator==(const PolicyEntry&, const PolicyEntry&) = default;
};

struct StatsEntry {
  std::string stage;
  int queries = 0;
  long long multiplications = 0;
  long long additions = 0;
  long long divisions = 0;
  int maxFactorSize = 0;
  friend bool operator==(const StatsEntry&, const StatsEntry&) = default;
};

// The serializable view of an evaluation: JSON on disk, reals written with
// 17 significant digits so round trips are lossless.
struct ResultDocument {
  std::string method;
  double expectedValue = 0.0;
  std::vector<PolicyEntry> policy;
  std::vector<StatsEntry> stats;
  friend bool operator==(const ResultDocument&, const ResultDocument&) = default;
};

ResultDocument toDocument(const EvaluationResult& result);
std::string serializeResult(const ResultDocument& doc);
ResultDocument parseResult(const std::string& json);

// Canonical 17-significant-digit rendering used by every serializer.
std::string formatReal(double v);

}  // namespace ideval

#endif  // IDEVAL_IO_HPP
