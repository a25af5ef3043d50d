#pragma once

#include <stdexcept>
#include <string>

namespace tbgeo {

/// Chart-domain violation: a point was evaluated outside the declared open box.
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Vector/matrix size does not match the manifold dimension.
class DimensionError : public std::invalid_argument {
public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Metric weights violate the admissibility conditions.
class AdmissibilityError : public std::invalid_argument {
public:
  AdmissibilityError(const std::string& what, std::string condition)
      : std::invalid_argument(what), failed_condition(std::move(condition)) {}

  /// The inequality that failed, e.g. "m1*m3 - m2^2 > 0".
  std::string failed_condition;
};

/// Non-finite derivative estimates, singular metric matrices and the like.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tbgeo
