#pragma once

#include <stdexcept>
#include <string>

namespace infoflow {

/// Shapes or lengths of operands do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a map or mesh, e.g. x not in [0, 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input failed probability validation (negative mass, bad normalization).
class DistributionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Conditioning on a z-slice with zero mass.
class EmptySliceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Derivative requested at a breakpoint of a piecewise map.
class UndefinedDerivativeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A result violated an invariant that must hold for valid inputs
/// (for example a KL sum below -1e-12).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Composite alphabet larger than the configured budget.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Named series or node not present.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Invalid experiment configuration or command line.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace infoflow
