#pragma once

// Deterministic interval maps on [0, 1), trajectories, and trajectory-histogram
// estimates of invariant densities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "infoflow/errors.hpp"
#include "infoflow/mesh.hpp"
#include "infoflow/prob_core.hpp"
#include "infoflow/random.hpp"

namespace infoflow {

/// x - floor(x), with any result >= 1 (representation boundary) sent to 0.
inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

/// x -> d x mod 1.
struct BernoulliMap {
  int d;
};

/// x -> (1 + sin 2 pi n x) / 2, with the peak value 1 sent to 0.
struct SineBoxMap {
  int n;
};

/// x -> x + alpha mod 1.
struct RotationMap {
  double alpha;
};

/// Lift with the given slope on each piece, started at 0 and reduced mod 1:
/// T(x) = offset[p] + slope[p] (x - breakpoint[p]) mod 1 on piece p.
struct PiecewiseLinearMap {
  std::vector<double> breakpoints;  // 0 = b_0 < b_1 < ... < b_m = 1
  std::vector<double> slopes;       // m entries
  std::vector<double> offsets;      // lift value at each b_p
};

/// A piecewise C^1 interval map with an evaluable derivative.
class MapSpec {
 public:
  using Kind = std::variant<BernoulliMap, SineBoxMap, RotationMap, PiecewiseLinearMap>;

  static MapSpec bernoulli(int d) {
    if (d < 2) throw DomainError("bernoulli map requires d >= 2");
    return MapSpec(BernoulliMap{d});
  }

  static MapSpec sine_box(int n) {
    if (n < 1) throw DomainError("sine box map requires n >= 1");
    return MapSpec(SineBoxMap{n});
  }

  static MapSpec rotation(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("rotation requires alpha in [0, 1)");
    return MapSpec(RotationMap{alpha});
  }

  static MapSpec piecewise_linear(std::vector<double> breakpoints, std::vector<double> slopes) {
    if (breakpoints.size() < 2 || slopes.size() + 1 != breakpoints.size()) {
      throw DimensionError("piecewise_linear: need m + 1 breakpoints for m slopes");
    }
    if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0 ||
        !std::is_sorted(breakpoints.begin(), breakpoints.end(), std::less_equal<>())) {
      throw DomainError("piecewise_linear: breakpoints must increase strictly from 0 to 1");
    }
    std::vector<double> offsets(slopes.size());
    double lift = 0.0;
    for (std::size_t p = 0; p < slopes.size(); ++p) {
      offsets[p] = lift;
      lift += slopes[p] * (breakpoints[p + 1] - breakpoints[p]);
    }
    return MapSpec(PiecewiseLinearMap{std::move(breakpoints), std::move(slopes), std::move(offsets)});
  }

  const Kind& kind() const { return kind_; }

  /// Short label used in reports: E3, S4, R0.37, PL.
  std::string name() const {
    return std::visit(
        [](const auto& m) -> std::string {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, BernoulliMap>) return "E" + std::to_string(m.d);
          if constexpr (std::is_same_v<M, SineBoxMap>) return "S" + std::to_string(m.n);
          if constexpr (std::is_same_v<M, RotationMap>) {
            std::ostringstream os;
            os << "R" << m.alpha;
            return os.str();
          }
          return "PL";
        },
        kind_);
  }

  /// Whether Lebesgue measure on [0, 1) is invariant (Bernoulli maps and rotations).
  bool preserves_lebesgue() const {
    return std::holds_alternative<BernoulliMap>(kind_) || std::holds_alternative<RotationMap>(kind_);
  }

 private:
  explicit MapSpec(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

namespace detail {

inline void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw DomainError(std::string(what) + ": x = " + std::to_string(x) + " is outside [0, 1)");
  }
}

inline std::size_t piece_of(const PiecewiseLinearMap& m, double x) {
  const auto it = std::upper_bound(m.breakpoints.begin(), m.breakpoints.end(), x);
  const auto p = static_cast<std::size_t>(it - m.breakpoints.begin()) - 1;
  return std::min(p, m.slopes.size() - 1);
}

}  // namespace detail

/// T(x) reduced to [0, 1).
inline double evaluate(const MapSpec& map, double x) {
  detail::require_unit(x, "evaluate");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return std::visit(
      [x](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BernoulliMap>) {
          return wrap_unit(static_cast<double>(m.d) * x);
        } else if constexpr (std::is_same_v<M, SineBoxMap>) {
          return wrap_unit((1.0 + std::sin(two_pi * static_cast<double>(m.n) * x)) / 2.0);
        } else if constexpr (std::is_same_v<M, RotationMap>) {
          return wrap_unit(x + m.alpha);
        } else {
          const std::size_t p = detail::piece_of(m, x);
          return wrap_unit(m.offsets[p] + m.slopes[p] * (x - m.breakpoints[p]));
        }
      },
      map.kind());
}

/// T'(x). Bernoulli maps and rotations are smooth as circle maps; only the
/// interior breakpoints of a piecewise-linear map are excluded.
inline double derivative(const MapSpec& map, double x) {
  detail::require_unit(x, "derivative");
  return std::visit(
      [x](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BernoulliMap>) {
          return static_cast<double>(m.d);
        } else if constexpr (std::is_same_v<M, SineBoxMap>) {
          const double n = static_cast<double>(m.n);
          return std::numbers::pi * n * std::cos(2.0 * std::numbers::pi * n * x);
        } else if constexpr (std::is_same_v<M, RotationMap>) {
          return 1.0;
        } else {
          for (std::size_t p = 1; p + 1 < m.breakpoints.size(); ++p) {
            if (x == m.breakpoints[p]) {
              throw UndefinedDerivativeError("derivative: x = " + std::to_string(x) +
                                             " is a breakpoint");
            }
          }
          return m.slopes[detail::piece_of(m, x)];
        }
      },
      map.kind());
}

/// Orbit segment x_{t0}, ..., x_{t0 + length - 1} of a seed point.
struct Trajectory {
  std::vector<double> samples;
  double seed_state = 0.0;
  std::size_t discarded = 0;

  std::size_t length() const { return samples.size(); }
};

/// Iterates the map from x0, drops the first `transients` points, keeps `length`.
inline Trajectory generate_trajectory(const MapSpec& map, double x0, std::size_t transients,
                                      std::size_t length) {
  if (length == 0) throw DomainError("generate_trajectory: length must be >= 1");
  detail::require_unit(x0, "generate_trajectory");
  double x = x0;
  for (std::size_t t = 0; t < transients; ++t) x = evaluate(map, x);
  Trajectory traj{{}, x0, transients};
  traj.samples.reserve(length);
  for (std::size_t t = 0; t < length; ++t) {
    traj.samples.push_back(x);
    if (t + 1 < length) x = evaluate(map, x);
  }
  return traj;
}

/// Histogram approximation of a probability density on [0, 1).
struct DensityEstimate {
  Mesh mesh;
  DiscreteDist weights;

  static DensityEstimate uniform(const Mesh& mesh) {
    return {mesh, DiscreteDist::uniform(mesh.cells())};
  }
};

/// Normalized histogram of samples over the mesh.
inline DensityEstimate density_from_samples(const Mesh& mesh, std::span<const double> samples) {
  std::vector<std::uint64_t> counts(mesh.cells(), 0);
  for (double x : samples) ++counts[bin(mesh, x)];
  return {mesh, DiscreteDist::from_counts(counts)};
}

/// Trajectory histogram as an estimate of the absolutely continuous invariant density.
inline DensityEstimate estimate_acip(const MapSpec& map, const Mesh& mesh, double x0,
                                     std::size_t transients, std::size_t length) {
  const Trajectory traj = generate_trajectory(map, x0, transients, length);
  return density_from_samples(mesh, traj.samples);
}

struct UniformDist {};

/// Gaussian restricted to [0, 1); parameterized by mean and variance.
struct TruncatedGaussianDist {
  double mean = 0.3;
  double variance = 0.02;
};

/// Invariant distribution of a map, represented by a stored trajectory.
struct AcipDist {
  MapSpec map;
  double x0 = 0.5;
  std::size_t transients = 1000;
  std::size_t length = 1'000'000;
};

using DistSpec = std::variant<UniformDist, TruncatedGaussianDist, AcipDist>;

/// `count` draws in [0, 1), reproducible from `seed`. Truncated Gaussians use
/// rejection from the untruncated law; acip draws resample the stored
/// trajectory uniformly with replacement.
inline std::vector<double> sample_distribution(const DistSpec& dist, std::size_t count,
                                               std::uint64_t seed) {
  if (count == 0) throw DomainError("sample_distribution: count must be >= 1");
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(count);
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, UniformDist>) {
          for (std::size_t i = 0; i < count; ++i) out.push_back(rng.uniform01());
        } else if constexpr (std::is_same_v<D, TruncatedGaussianDist>) {
          if (!(d.variance > 0.0)) throw DomainError("truncated gaussian: variance must be > 0");
          const double sd = std::sqrt(d.variance);
          while (out.size() < count) {
            const double y = rng.normal(d.mean, sd);
            if (y >= 0.0 && y < 1.0) out.push_back(y);
          }
        } else {
          const Trajectory traj = generate_trajectory(d.map, d.x0, d.transients, d.length);
          for (std::size_t i = 0; i < count; ++i) out.push_back(traj.samples[rng.index(traj.length())]);
        }
      },
      dist);
  return out;
}

}  // namespace infoflow
