#pragma once

// Deterministic maps blurred by additive uniform noise, and the comparison of
// the resulting discretized MI with ln(1/epsilon).

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "infoflow/discretization.hpp"
#include "infoflow/dynamics.hpp"
#include "infoflow/prob_core.hpp"
#include "infoflow/random.hpp"
#include "infoflow/report.hpp"

namespace infoflow {

/// Minimum L * epsilon for the analytic ln(1/epsilon) comparison.
inline constexpr double kMinCellsPerNoiseWidth = 20.0;

/// Base map plus noise uniform on [-epsilon/2, epsilon/2], applied mod 1.
struct NoiseSpec {
  double epsilon;
  MapSpec base_map;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("NoiseSpec: epsilon must be in (0, 1]");
  }
};

/// x_i = T0(z_i) + xi_i mod 1, xi_i iid uniform on [-eps/2, eps/2].
inline std::vector<double> blur_samples(const NoiseSpec& spec, std::span<const double> z_samples,
                                        std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::vector<double> x(z_samples.size());
  for (std::size_t i = 0; i < z_samples.size(); ++i) {
    const double xi = (rng.uniform01() - 0.5) * spec.epsilon;
    x[i] = wrap_unit(evaluate(spec.base_map, z_samples[i]) + xi);
  }
  return x;
}

/// Plug-in I(X^D; Z^D) for uniform Z and blurred X, against ln(1/epsilon).
/// The analytic column is omitted when the base map does not preserve
/// Lebesgue measure or when the mesh does not resolve the noise width.
inline ExperimentReport noise_experiment(const NoiseSpec& spec, const Mesh& mesh, std::size_t samples,
                                         std::uint64_t seed) {
  spec.validate();
  const std::vector<double> z = sample_distribution(UniformDist{}, samples, derive_seed(seed, 0));
  const std::vector<double> x = blur_samples(spec, z, derive_seed(seed, 1));

  ReportRow row;
  row.param = format_number(spec.epsilon);
  row.series = spec.base_map.name();
  row.empirical = mutual_information(joint_from_samples(mesh, z, x));
  const bool resolved = static_cast<double>(mesh.cells()) * spec.epsilon >= kMinCellsPerNoiseWidth;
  if (!spec.base_map.preserves_lebesgue()) {
    row.flags.push_back("analytic=n/a(non-lebesgue-base)");
  } else if (!resolved) {
    row.flags.push_back("analytic=n/a(mesh-coarser-than-noise)");
  } else {
    row.predicted = std::log(1.0 / spec.epsilon);
  }

  ExperimentReport report;
  report.experiment = "noise";
  report.rows.push_back(std::move(row));
  report.seed = seed;
  report.samples = samples;
  report.cells = mesh.cells();
  return report;
}

}  // namespace infoflow
