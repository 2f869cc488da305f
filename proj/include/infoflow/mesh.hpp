#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "infoflow/errors.hpp"

namespace infoflow {

/// Uniform partition of [0, 1) into cells [i/L, (i+1)/L), i = 0..L-1.
class Mesh {
 public:
  explicit Mesh(std::size_t cells) : cells_(cells) {
    if (cells_ == 0) throw DomainError("Mesh: cell count must be positive");
  }

  std::size_t cells() const { return cells_; }
  double width() const { return 1.0 / static_cast<double>(cells_); }
  double left(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(cells_); }
  double midpoint(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(cells_);
  }

  friend bool operator==(const Mesh&, const Mesh&) = default;

 private:
  std::size_t cells_;
};

/// Index of the cell containing x: floor(x L), clamped to L-1.
inline std::size_t bin(const Mesh& mesh, double x) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw DomainError("bin: x = " + std::to_string(x) + " is outside [0, 1)");
  }
  const auto i = static_cast<std::size_t>(std::floor(x * static_cast<double>(mesh.cells())));
  return i < mesh.cells() ? i : mesh.cells() - 1;
}

}  // namespace infoflow
