#pragma once

// Uniform-mesh discretization of paired samples into joint histograms, plus
// the exact cell joint of a Bernoulli map under uniform input.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "infoflow/dynamics.hpp"
#include "infoflow/errors.hpp"
#include "infoflow/mesh.hpp"
#include "infoflow/prob_core.hpp"

namespace infoflow {

/// Cell indices of paired observations (X^D, Y^D).
struct PairedSeries {
  std::vector<std::size_t> x_indices;
  std::vector<std::size_t> y_indices;
};

/// Unnormalized 2-D cell counts, laid out like JointDist2. Partial tables from
/// sample shards merge by addition.
class CountTable2 {
 public:
  CountTable2(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny), counts_(nx * ny, 0) {}

  void add(std::size_t i, std::size_t j) { ++counts_[i * ny_ + j]; }

  CountTable2& operator+=(const CountTable2& other) {
    if (other.nx_ != nx_ || other.ny_ != ny_) throw DimensionError("CountTable2: dims differ");
    for (std::size_t a = 0; a < counts_.size(); ++a) counts_[a] += other.counts_[a];
    return *this;
  }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::uint64_t at(std::size_t i, std::size_t j) const { return counts_[i * ny_ + j]; }
  std::span<const std::uint64_t> counts() const { return counts_; }

  JointDist2 normalized() const { return JointDist2::from_counts(nx_, ny_, counts_); }

 private:
  std::size_t nx_;
  std::size_t ny_;
  std::vector<std::uint64_t> counts_;
};

inline std::vector<std::size_t> bin_samples(const Mesh& mesh, std::span<const double> samples) {
  std::vector<std::size_t> out(samples.size());
  for (std::size_t t = 0; t < samples.size(); ++t) out[t] = bin(mesh, samples[t]);
  return out;
}

inline PairedSeries pair_indices(const Mesh& mesh, std::span<const double> y_samples,
                                 std::span<const double> x_samples) {
  if (x_samples.size() != y_samples.size()) {
    throw DimensionError("pair_indices: series lengths differ");
  }
  return {bin_samples(mesh, x_samples), bin_samples(mesh, y_samples)};
}

inline CountTable2 count_pairs(const PairedSeries& pairs, std::size_t cells) {
  if (pairs.x_indices.size() != pairs.y_indices.size()) {
    throw DimensionError("count_pairs: index series lengths differ");
  }
  CountTable2 table(cells, cells);
  for (std::size_t t = 0; t < pairs.x_indices.size(); ++t) {
    table.add(pairs.x_indices[t], pairs.y_indices[t]);
  }
  return table;
}

/// Normalized 2-D histogram with X on the first axis and Y on the second.
inline JointDist2 joint_from_samples(const Mesh& mesh, std::span<const double> y_samples,
                                     std::span<const double> x_samples) {
  if (x_samples.size() != y_samples.size()) {
    throw DimensionError("joint_from_samples: series lengths differ");
  }
  if (x_samples.empty()) throw DimensionError("joint_from_samples: no samples");
  return count_pairs(pair_indices(mesh, y_samples, x_samples), mesh.cells()).normalized();
}

/// Joint of consecutive pairs (Y, X) = (x_t, x_{t+1}) along a trajectory.
inline JointDist2 joint_from_trajectory(const Mesh& mesh, std::span<const double> samples) {
  if (samples.size() < 2) throw DimensionError("joint_from_trajectory: need >= 2 samples");
  return joint_from_samples(mesh, samples.first(samples.size() - 1), samples.subspan(1));
}

/// Images x_i = T(y_i).
inline std::vector<double> pairs_from_map(const MapSpec& map, std::span<const double> y_samples) {
  std::vector<double> x(y_samples.size());
  for (std::size_t i = 0; i < y_samples.size(); ++i) x[i] = evaluate(map, y_samples[i]);
  return x;
}

/// Cell joint of (E_d(Y), Y) for uniform Y: uniform mass over the support
/// {(d i + r mod L, i) : i < L, r < d}. For d < L this is dL cells of mass
/// 1/(dL); for L <= d the support is every cell and the mass is 1/L^2.
inline JointDist2 exact_bernoulli_joint(std::size_t cells, std::size_t d) {
  if (cells == 0) throw DomainError("exact_bernoulli_joint: L must be >= 1");
  if (d < 2) throw DomainError("exact_bernoulli_joint: d must be >= 2");
  std::vector<char> charged(cells * cells, 0);
  std::size_t support = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    for (std::size_t r = 0; r < d; ++r) {
      const std::size_t x = (d * i + r) % cells;
      char& c = charged[x * cells + i];
      if (!c) {
        c = 1;
        ++support;
      }
    }
  }
  std::vector<double> mass(cells * cells, 0.0);
  const double each = 1.0 / static_cast<double>(support);
  for (std::size_t a = 0; a < mass.size(); ++a) {
    if (charged[a]) mass[a] = each;
  }
  return JointDist2(cells, cells, std::move(mass));
}

/// Exact cell pushforward of uniform Y under E_d: each of the d sub-intervals
/// of width 1/(dL) in a Y cell maps onto one whole X cell, so cells are charged
/// with multiplicity. Agrees with exact_bernoulli_joint when d < L or L | d.
inline JointDist2 bernoulli_pushforward_joint(std::size_t cells, std::size_t d) {
  if (cells == 0 || d < 1) throw DomainError("bernoulli_pushforward_joint: bad L or d");
  std::vector<double> mass(cells * cells, 0.0);
  const double piece = 1.0 / static_cast<double>(d * cells);
  for (std::size_t i = 0; i < cells; ++i) {
    for (std::size_t r = 0; r < d; ++r) mass[((d * i + r) % cells) * cells + i] += piece;
  }
  return JointDist2(cells, cells, std::move(mass));
}

}  // namespace infoflow
