#ifndef IDEVAL_VARIABLE_HPP
#define IDEVAL_VARIABLE_HPP

#include <string>
#include <vector>

namespace ideval {

// A named discrete variable with a finite frame. The frame is the set of
// values {0, ..., cardinality-1}; labels, when present, name those values.
// Variables are compared by name: within one network a name identifies a
// single variable, and mixing two variables that share a name but disagree
// on cardinality is an error surfaced by the table operations.
struct Variable {
  std::string name;
  int cardinality = 0;
  std::vector<std::string> labels;  // empty, or exactly `cardinality` entries

  friend bool operator==(const Variable& a, const Variable& b) {
    return a.name == b.name && a.cardinality == b.cardinality;
  }
  friend bool operator<(const Variable& a, const Variable& b) {
    return a.name < b.name;
  }
};

}  // namespace ideval

#endif  // IDEVAL_VARIABLE_HPP
