#pragma once

#include <stdexcept>
#include <string>

#include "dioph/interval.hpp"
#include "dioph/rational.hpp"

namespace dioph {

// A finite expansion ran out before the requested index; the number is rational.
class RationalCase : public std::runtime_error {
 public:
  RationalCase(const Rational& value, std::size_t last_index)
      : std::runtime_error("expansion is finite: value " + to_string(value)),
        value(value),
        last_index(last_index) {}
  Rational value;
  std::size_t last_index;
};

// Refinement stopped at a budget; `best` still encloses the target.
class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit(const std::string& what, const Interval& best)
      : std::runtime_error(what), best(best) {}
  Interval best;
};

class UnsupportedDegree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoWitness : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dioph
