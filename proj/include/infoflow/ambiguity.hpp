#pragma once

// Differential entropy, the Lyapunov-type integral of ln|T'|, and the
// predicted discretized mutual information
//   I(X^D; Y^D) ~ ln L + H(X) - int ln|T'| f_Y dy.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "infoflow/discretization.hpp"
#include "infoflow/dynamics.hpp"
#include "infoflow/prob_core.hpp"

namespace infoflow {

/// Floor on |T'| inside the log; cells hitting it are reported as clipped.
inline constexpr double kMinAbsDerivative = 1e-8;

/// Histogram plug-in differential entropy: H(weights) + ln(cell width).
inline double differential_entropy(const DensityEstimate& density) {
  return shannon_entropy(density.weights) + std::log(density.mesh.width());
}

struct LyapunovIntegral {
  double value = 0.0;
  /// Total density weight of cells where ln|T'| was clipped.
  double clipped_weight = 0.0;
};

/// Midpoint Riemann sum of ln|T'| against the density weights. A midpoint
/// landing on a breakpoint is evaluated a quarter cell to the right.
inline LyapunovIntegral lyapunov_integral(const MapSpec& map, const DensityEstimate& density) {
  const Mesh& mesh = density.mesh;
  const double floor_log = std::log(kMinAbsDerivative);
  detail::Accumulator acc;
  detail::Accumulator clipped;
  for (std::size_t i = 0; i < mesh.cells(); ++i) {
    const double w = density.weights[i];
    if (w == 0.0) continue;
    double slope;
    try {
      slope = derivative(map, mesh.midpoint(i));
    } catch (const UndefinedDerivativeError&) {
      slope = derivative(map, mesh.midpoint(i) + 0.25 * mesh.width());
    }
    double log_slope = std::log(std::abs(slope));
    if (!(log_slope >= floor_log)) {
      log_slope = floor_log;
      clipped.add(w);
    }
    acc.add(w * log_slope);
  }
  return {acc.value(), clipped.value()};
}

struct AmbiguityReport {
  std::size_t cells = 0;
  double diff_entropy_x = 0.0;      ///< H(X)
  double lyap_integral = 0.0;       ///< int ln|T'| f_Y dy
  double relative_ambiguity = 0.0;  ///< lyap_integral - diff_entropy_x
  double predicted_mi = 0.0;        ///< ln L - relative_ambiguity
  double clipped_weight = 0.0;
};

/// Prediction from the Y density (for the derivative integral) and the
/// histogram of X = T(Y). Both densities must share one mesh.
inline AmbiguityReport conjecture_prediction(const MapSpec& map, const DensityEstimate& y_density,
                                             const DensityEstimate& x_density) {
  if (!(y_density.mesh == x_density.mesh)) {
    throw DimensionError("conjecture_prediction: X and Y densities use different meshes");
  }
  const LyapunovIntegral lyap = lyapunov_integral(map, y_density);
  AmbiguityReport r;
  r.cells = y_density.mesh.cells();
  r.diff_entropy_x = differential_entropy(x_density);
  r.lyap_integral = lyap.value;
  r.relative_ambiguity = r.lyap_integral - r.diff_entropy_x;
  r.predicted_mi = std::log(static_cast<double>(r.cells)) - r.relative_ambiguity;
  r.clipped_weight = lyap.clipped_weight;
  return r;
}

/// Same, with both densities histogrammed from Y samples and their images.
inline AmbiguityReport conjecture_prediction(const MapSpec& map, std::span<const double> y_samples,
                                             const Mesh& mesh) {
  const std::vector<double> x_samples = pairs_from_map(map, y_samples);
  return conjecture_prediction(map, density_from_samples(mesh, y_samples),
                               density_from_samples(mesh, x_samples));
}

}  // namespace infoflow
