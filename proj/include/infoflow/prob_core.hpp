#pragma once

// Exact finite-alphabet information quantities. All values are in nats.
//
// Joint layouts are dense and row-major:
//   JointDist2  mass[i * ny + j]              (i: X symbol, j: Y symbol)
//   JointDist3  mass[(i * ny + j) * nz + k]   (k: Z symbol)

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infoflow/errors.hpp"

namespace infoflow {

/// Allowed deviation of total mass from one.
inline constexpr double kMassTolerance = 1e-12;
/// Divergence sums in [-kClampTolerance, 0) are reported as exactly zero.
inline constexpr double kClampTolerance = 1e-12;

/// An information quantity in nats, or a flag marking it infinite.
struct InfoValue {
  double value = 0.0;
  bool is_infinite = false;

  static InfoValue finite(double v) { return {v, false}; }
  static InfoValue infinite() { return {0.0, true}; }

  /// Value as a double; +inf when flagged.
  double nats() const { return is_infinite ? std::numeric_limits<double>::infinity() : value; }
};

namespace detail {

/// Compensated (Neumaier) summation.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double stable_sum(std::span<const double> xs) {
  Accumulator acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

inline void validate_masses(std::span<const double> mass, const char* what) {
  if (mass.empty()) throw DistributionError(std::string(what) + ": empty alphabet");
  for (double m : mass) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw DistributionError(std::string(what) + ": negative or non-finite mass");
    }
  }
  const double total = stable_sum(mass);
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw DistributionError(std::string(what) + ": total mass " + std::to_string(total) +
                            " differs from 1");
  }
}

/// Applies the clamp rule to a finished divergence sum.
inline InfoValue finish_divergence(double sum, bool infinite) {
  if (infinite) return InfoValue::infinite();
  if (sum < 0.0) {
    if (sum < -kClampTolerance) {
      throw ConsistencyError("divergence sum " + std::to_string(sum) + " is negative");
    }
    sum = 0.0;
  }
  return InfoValue::finite(sum);
}

/// Sum of p(a) ln(p(a)/m(a)) over the support of p. Cells with p(a) > 0 and
/// m(a) = 0 mark the result infinite.
template <typename MassAt, typename RefAt>
InfoValue divergence_sum(std::size_t n, MassAt&& p, RefAt&& m) {
  Accumulator acc;
  bool infinite = false;
  for (std::size_t a = 0; a < n; ++a) {
    const double pa = p(a);
    if (pa <= 0.0) continue;
    const double ma = m(a);
    if (ma <= 0.0) {
      infinite = true;
      continue;
    }
    acc.add(pa * std::log(pa / ma));
  }
  return finish_divergence(acc.value(), infinite);
}

template <typename Count>
std::vector<double> normalize_counts(std::span<const Count> counts) {
  std::uint64_t total = 0;
  for (Count c : counts) total += static_cast<std::uint64_t>(c);
  if (total == 0) throw DistributionError("cannot normalize an all-zero count table");
  std::vector<double> mass(counts.size());
  const double inv = 1.0 / static_cast<double>(total);
  for (std::size_t a = 0; a < counts.size(); ++a) {
    mass[a] = static_cast<double>(counts[a]) * inv;
  }
  return mass;
}

}  // namespace detail

/// Probability mass over symbols 0..size()-1. Validated at construction.
class DiscreteDist {
 public:
  explicit DiscreteDist(std::vector<double> mass) : mass_(std::move(mass)) {
    detail::validate_masses(mass_, "DiscreteDist");
  }

  static DiscreteDist uniform(std::size_t n) {
    if (n == 0) throw DistributionError("DiscreteDist: empty alphabet");
    return DiscreteDist(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  static DiscreteDist from_counts(std::span<const std::uint64_t> counts) {
    return DiscreteDist(detail::normalize_counts(counts));
  }

  std::size_t size() const { return mass_.size(); }
  double operator[](std::size_t a) const { return mass_[a]; }
  std::span<const double> masses() const { return mass_; }

 private:
  std::vector<double> mass_;
};

/// Joint mass of a pair (X, Y).
class JointDist2 {
 public:
  JointDist2(std::size_t nx, std::size_t ny, std::vector<double> mass)
      : nx_(nx), ny_(ny), mass_(std::move(mass)) {
    if (nx_ == 0 || ny_ == 0 || mass_.size() != nx_ * ny_) {
      throw DimensionError("JointDist2: mass size does not match dims");
    }
    detail::validate_masses(mass_, "JointDist2");
  }

  static JointDist2 from_counts(std::size_t nx, std::size_t ny,
                                std::span<const std::uint64_t> counts) {
    return JointDist2(nx, ny, detail::normalize_counts(counts));
  }

  /// P(X = i, Y = j) = p(i) q(j).
  static JointDist2 product(const DiscreteDist& p, const DiscreteDist& q) {
    std::vector<double> m(p.size() * q.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) m[i * q.size() + j] = p[i] * q[j];
    }
    return JointDist2(p.size(), q.size(), std::move(m));
  }

  /// Joint of (X, X) for X ~ p.
  static JointDist2 diagonal(const DiscreteDist& p) {
    const std::size_t n = p.size();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = p[i];
    return JointDist2(n, n, std::move(m));
  }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double at(std::size_t i, std::size_t j) const { return mass_[i * ny_ + j]; }
  std::span<const double> masses() const { return mass_; }

  DiscreteDist marginal_x() const {
    std::vector<double> m(nx_, 0.0);
    for (std::size_t i = 0; i < nx_; ++i) {
      m[i] = detail::stable_sum(std::span<const double>(mass_).subspan(i * ny_, ny_));
    }
    return DiscreteDist(std::move(m));
  }

  DiscreteDist marginal_y() const {
    std::vector<detail::Accumulator> acc(ny_);
    for (std::size_t i = 0; i < nx_; ++i) {
      for (std::size_t j = 0; j < ny_; ++j) acc[j].add(mass_[i * ny_ + j]);
    }
    std::vector<double> m(ny_);
    for (std::size_t j = 0; j < ny_; ++j) m[j] = acc[j].value();
    return DiscreteDist(std::move(m));
  }

  /// Joint of (Y, X).
  JointDist2 transposed() const {
    std::vector<double> m(mass_.size());
    for (std::size_t i = 0; i < nx_; ++i) {
      for (std::size_t j = 0; j < ny_; ++j) m[j * nx_ + i] = mass_[i * ny_ + j];
    }
    return JointDist2(ny_, nx_, std::move(m));
  }

 private:
  std::size_t nx_;
  std::size_t ny_;
  std::vector<double> mass_;
};

/// Joint mass of a triple (X, Y, Z).
class JointDist3 {
 public:
  JointDist3(std::size_t nx, std::size_t ny, std::size_t nz, std::vector<double> mass)
      : nx_(nx), ny_(ny), nz_(nz), mass_(std::move(mass)) {
    if (nx_ == 0 || ny_ == 0 || nz_ == 0 || mass_.size() != nx_ * ny_ * nz_) {
      throw DimensionError("JointDist3: mass size does not match dims");
    }
    detail::validate_masses(mass_, "JointDist3");
  }

  static JointDist3 from_counts(std::size_t nx, std::size_t ny, std::size_t nz,
                                std::span<const std::uint64_t> counts) {
    return JointDist3(nx, ny, nz, detail::normalize_counts(counts));
  }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t nz() const { return nz_; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * ny_ + j) * nz_ + k;
  }
  double at(std::size_t i, std::size_t j, std::size_t k) const { return mass_[index(i, j, k)]; }
  std::span<const double> masses() const { return mass_; }

  /// P(X = i, Z = k), laid out [i * nz + k].
  std::vector<double> marginal_xz() const {
    std::vector<detail::Accumulator> acc(nx_ * nz_);
    for (std::size_t i = 0; i < nx_; ++i)
      for (std::size_t j = 0; j < ny_; ++j)
        for (std::size_t k = 0; k < nz_; ++k) acc[i * nz_ + k].add(at(i, j, k));
    return collect(acc);
  }

  /// P(Y = j, Z = k), laid out [j * nz + k].
  std::vector<double> marginal_yz() const {
    std::vector<detail::Accumulator> acc(ny_ * nz_);
    for (std::size_t i = 0; i < nx_; ++i)
      for (std::size_t j = 0; j < ny_; ++j)
        for (std::size_t k = 0; k < nz_; ++k) acc[j * nz_ + k].add(at(i, j, k));
    return collect(acc);
  }

  /// P(Z = k), summed from the (Y, Z) marginal.
  DiscreteDist marginal_z() const { return DiscreteDist(z_masses(marginal_yz())); }

  std::vector<double> z_masses(const std::vector<double>& yz) const {
    std::vector<detail::Accumulator> acc(nz_);
    for (std::size_t j = 0; j < ny_; ++j)
      for (std::size_t k = 0; k < nz_; ++k) acc[k].add(yz[j * nz_ + k]);
    return collect(acc);
  }

 private:
  static std::vector<double> collect(const std::vector<detail::Accumulator>& acc) {
    std::vector<double> out(acc.size());
    for (std::size_t a = 0; a < acc.size(); ++a) out[a] = acc[a].value();
    return out;
  }

  std::size_t nx_;
  std::size_t ny_;
  std::size_t nz_;
  std::vector<double> mass_;
};

/// KL(p || m) = sum over p(a) > 0 of p(a) ln(p(a) / m(a)). Infinite when p is
/// not absolutely continuous with respect to m.
inline InfoValue kl_divergence(const DiscreteDist& p, const DiscreteDist& m) {
  if (p.size() != m.size()) {
    throw DimensionError("kl_divergence: alphabet sizes " + std::to_string(p.size()) + " and " +
                         std::to_string(m.size()) + " differ");
  }
  return detail::divergence_sum(
      p.size(), [&](std::size_t a) { return p[a]; }, [&](std::size_t a) { return m[a]; });
}

/// Shannon entropy -sum p ln p.
inline double shannon_entropy(const DiscreteDist& p) {
  detail::Accumulator acc;
  for (double pa : p.masses()) {
    if (pa > 0.0) acc.add(-pa * std::log(pa));
  }
  return acc.value();
}

/// I(X; Y) = KL(P_XY || P_X (x) P_Y).
inline InfoValue mutual_information(const JointDist2& j) {
  const DiscreteDist px = j.marginal_x();
  const DiscreteDist py = j.marginal_y();
  const std::size_t ny = j.ny();
  const auto mass = j.masses();
  return detail::divergence_sum(
      mass.size(), [&](std::size_t a) { return mass[a]; },
      [&](std::size_t a) { return px[a / ny] * py[a % ny]; });
}

/// Markovization P(X|Z) P(Y|Z) P(Z): same Z marginal and same per-z
/// conditionals as j, with X and Y conditionally independent given Z.
/// Slices with P(Z = k) = 0 stay zero.
inline JointDist3 markovize(const JointDist3& j) {
  const std::size_t nx = j.nx(), ny = j.ny(), nz = j.nz();
  const std::vector<double> xz = j.marginal_xz();
  const std::vector<double> yz = j.marginal_yz();
  const std::vector<double> z = j.z_masses(yz);
  std::vector<double> m(nx * ny * nz, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t jj = 0; jj < ny; ++jj) {
      for (std::size_t k = 0; k < nz; ++k) {
        if (z[k] > 0.0) m[j.index(i, jj, k)] = xz[i * nz + k] * yz[jj * nz + k] / z[k];
      }
    }
  }
  return JointDist3(nx, ny, nz, std::move(m));
}

/// I(X; Y | Z) = KL(P_XYZ || markovize(P_XYZ)).
inline InfoValue conditional_mutual_information(const JointDist3& j) {
  const JointDist3 markov = markovize(j);
  const auto p = j.masses();
  const auto m = markov.masses();
  return detail::divergence_sum(
      p.size(), [&](std::size_t a) { return p[a]; }, [&](std::size_t a) { return m[a]; });
}

/// Conditioned pair (X_z, Y_z): the k-th z-slice renormalized by P(Z = k).
inline JointDist2 disintegrate(const JointDist3& j, std::size_t k) {
  if (k >= j.nz()) throw DimensionError("disintegrate: z index out of range");
  const std::size_t nx = j.nx(), ny = j.ny();
  detail::Accumulator total;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t jj = 0; jj < ny; ++jj) total.add(j.at(i, jj, k));
  const double pz = total.value();
  if (!(pz > 0.0)) {
    throw EmptySliceError("disintegrate: slice " + std::to_string(k) + " has zero mass");
  }
  std::vector<double> m(nx * ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t jj = 0; jj < ny; ++jj) m[i * ny + jj] = j.at(i, jj, k) / pz;
  return JointDist2(nx, ny, std::move(m));
}

/// P_Z-average of I(X_z; Y_z) over slices with positive mass.
inline InfoValue disintegrated_cmi(const JointDist3& j) {
  const DiscreteDist pz = j.marginal_z();
  detail::Accumulator acc;
  for (std::size_t k = 0; k < j.nz(); ++k) {
    if (!(pz[k] > 0.0)) continue;
    const InfoValue slice = mutual_information(disintegrate(j, k));
    if (slice.is_infinite) return InfoValue::infinite();
    acc.add(pz[k] * slice.value);
  }
  return detail::finish_divergence(acc.value(), false);
}

}  // namespace infoflow
