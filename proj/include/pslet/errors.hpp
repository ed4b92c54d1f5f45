#pragma once

#include <stdexcept>
#include <string>

namespace pslet {

/// Argument outside the mathematical domain of an operation (q <= 0, negative discriminant, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The minimum condition for q_o has no root on the search interval.
class NoClassicalMinimum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The root was found but the fluctuation frequency is not real (w^2 <= 0).
class UnstableWell : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateRecursion : public std::runtime_error {
 public:
  DegenerateRecursion(int order, const std::string& what)
      : std::runtime_error("degenerate recursion at order " + std::to_string(order) + ": " + what),
        order_(order) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pslet
