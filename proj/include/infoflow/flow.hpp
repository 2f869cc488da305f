#pragma once

// Transfer entropy and causation entropy as plug-in conditional mutual
// information over mesh cells, and a simulator for coupled interval maps.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infoflow/discretization.hpp"
#include "infoflow/dynamics.hpp"
#include "infoflow/errors.hpp"
#include "infoflow/mesh.hpp"
#include "infoflow/prob_core.hpp"
#include "infoflow/random.hpp"

namespace infoflow {

inline constexpr std::size_t kDefaultAlphabetBudget = 1'000'000;

/// Equal-length named series in [0, 1), discretized on one mesh.
class SeriesBundle {
 public:
  /// `own_lag` is the target history length k, `source_lag` the source history length l.
  explicit SeriesBundle(Mesh mesh, std::size_t own_lag = 1, std::size_t source_lag = 1,
                        std::size_t alphabet_budget = kDefaultAlphabetBudget)
      : mesh_(mesh), own_lag_(own_lag), source_lag_(source_lag), budget_(alphabet_budget) {
    if (own_lag_ < 1 || source_lag_ < 1) throw DomainError("SeriesBundle: lags must be >= 1");
  }

  void add(std::string name, std::vector<double> values) {
    if (!series_.empty() && values.size() != length()) {
      throw DimensionError("SeriesBundle: series '" + name + "' has a different length");
    }
    for (double v : values) {
      if (!(v >= 0.0 && v < 1.0)) throw DomainError("SeriesBundle: value outside [0, 1)");
    }
    cells_[name] = bin_samples(mesh_, values);
    series_.insert_or_assign(std::move(name), std::move(values));
  }

  const std::vector<double>& series(const std::string& name) const {
    const auto it = series_.find(name);
    if (it == series_.end()) throw LookupError("SeriesBundle: no series named '" + name + "'");
    return it->second;
  }

  const std::vector<std::size_t>& cells(const std::string& name) const {
    const auto it = cells_.find(name);
    if (it == cells_.end()) throw LookupError("SeriesBundle: no series named '" + name + "'");
    return it->second;
  }

  std::size_t length() const { return series_.empty() ? 0 : series_.begin()->second.size(); }
  const Mesh& mesh() const { return mesh_; }
  std::size_t own_lag() const { return own_lag_; }
  std::size_t source_lag() const { return source_lag_; }
  std::size_t alphabet_budget() const { return budget_; }

 private:
  Mesh mesh_;
  std::size_t own_lag_;
  std::size_t source_lag_;
  std::size_t budget_;
  std::map<std::string, std::vector<double>> series_;
  std::map<std::string, std::vector<std::size_t>> cells_;
};

namespace detail {

/// L^n, or nullopt past the budget.
inline std::optional<std::size_t> checked_power(std::size_t base, std::size_t n, std::size_t budget) {
  std::size_t r = 1;
  for (std::size_t e = 0; e < n; ++e) {
    if (r > budget / base) return std::nullopt;
    r *= base;
  }
  return r;
}

inline std::size_t block_alphabet(std::size_t cells, std::size_t width, std::size_t budget) {
  const auto size = checked_power(cells, width, budget);
  if (!size) throw CapacityError("composite alphabet exceeds the budget; coarsen the mesh");
  return *size;
}

/// A block of (series, time offset) components, encoded mixed-radix.
struct BlockSpec {
  std::vector<std::pair<const std::vector<std::size_t>*, std::size_t>> parts;

  std::size_t encode(std::size_t t, std::size_t cells) const {
    std::size_t code = 0;
    for (const auto& [series, back] : parts) code = code * cells + (*series)[t - back];
    return code;
  }
};

inline JointDist3 block_joint(const BlockSpec& next, const BlockSpec& source, const BlockSpec& cond,
                              std::size_t first_t, std::size_t last_t, std::size_t cells,
                              std::size_t budget) {
  const std::size_t nx = block_alphabet(cells, next.parts.size(), budget);
  const std::size_t ny = block_alphabet(cells, source.parts.size(), budget);
  const std::size_t nz = block_alphabet(cells, cond.parts.size(), budget);
  if (ny > budget / nx || nz > budget / (nx * ny)) {
    throw CapacityError("joint alphabet " + std::to_string(nx) + " x " + std::to_string(ny) +
                        " x " + std::to_string(nz) + " exceeds the budget of " +
                        std::to_string(budget) + "; coarsen the mesh");
  }
  std::vector<std::uint64_t> counts(nx * ny * nz, 0);
  for (std::size_t t = first_t; t <= last_t; ++t) {
    const std::size_t i = next.encode(t + 1, cells);
    const std::size_t j = source.encode(t, cells);
    const std::size_t k = cond.encode(t, cells);
    ++counts[(i * ny + j) * nz + k];
  }
  return JointDist3::from_counts(nx, ny, nz, counts);
}

}  // namespace detail

/// Empirical joint of (target_{t+1}, source history, target history) used by
/// transfer_entropy; history blocks are flattened mixed-radix.
inline JointDist3 transfer_entropy_joint(const SeriesBundle& bundle, const std::string& source,
                                         const std::string& target) {
  const auto& src = bundle.cells(source);
  const auto& tgt = bundle.cells(target);
  const std::size_t k = bundle.own_lag(), l = bundle.source_lag();
  const std::size_t h = std::max(k, l);
  if (bundle.length() <= h + 1) {
    throw DimensionError("transfer_entropy: series of length " + std::to_string(bundle.length()) +
                         " too short for lags " + std::to_string(k) + ", " + std::to_string(l));
  }
  detail::BlockSpec next{{{&tgt, 0}}};
  detail::BlockSpec src_block;
  for (std::size_t b = 0; b < l; ++b) src_block.parts.emplace_back(&src, b);
  detail::BlockSpec tgt_block;
  for (std::size_t b = 0; b < k; ++b) tgt_block.parts.emplace_back(&tgt, b);
  return detail::block_joint(next, src_block, tgt_block, h - 1, bundle.length() - 2,
                             bundle.mesh().cells(), bundle.alphabet_budget());
}

/// T_{source -> target} = I(target_{t+1}; source^{(l)}_t | target^{(k)}_t), time-averaged.
inline InfoValue transfer_entropy(const SeriesBundle& bundle, const std::string& source,
                                  const std::string& target) {
  return conditional_mutual_information(transfer_entropy_joint(bundle, source, target));
}

/// Empirical joint of (X^{(I)}_{t+1}, X^{(J)}_t, X^{(K)}_t) with unit lags. An
/// empty conditioning set gives a single z symbol.
inline JointDist3 causation_entropy_joint(const SeriesBundle& bundle,
                                          const std::vector<std::string>& targets,
                                          const std::vector<std::string>& sources,
                                          const std::vector<std::string>& conditions) {
  if (targets.empty() || sources.empty()) {
    throw DimensionError("causation_entropy: target and source sets must be nonempty");
  }
  if (bundle.length() < 2) throw DimensionError("causation_entropy: series too short");
  auto block = [&](const std::vector<std::string>& names) {
    detail::BlockSpec spec;
    for (const auto& n : names) spec.parts.emplace_back(&bundle.cells(n), 0);
    return spec;
  };
  return detail::block_joint(block(targets), block(sources), block(conditions), 0,
                             bundle.length() - 2, bundle.mesh().cells(), bundle.alphabet_budget());
}

/// C_{J -> I | K} = I(X^{(I)}_{t+1}; X^{(J)}_t | X^{(K)}_t).
inline InfoValue causation_entropy(const SeriesBundle& bundle, const std::vector<std::string>& targets,
                                   const std::vector<std::string>& sources,
                                   const std::vector<std::string>& conditions) {
  return conditional_mutual_information(
      causation_entropy_joint(bundle, targets, sources, conditions));
}

struct Coupling {
  std::size_t source;
  double weight;
};

struct NetworkNode {
  MapSpec map;
  std::vector<Coupling> inputs;
};

/// Coupled interval maps. Node i updates as
///   x_i' = (1 - sum_j w_ij) T_i(x_i) + sum_j w_ij x_j   (mod 1).
struct NetworkSpec {
  std::vector<NetworkNode> nodes;
  /// Optional explicit initial state; drawn from the seed when empty.
  std::vector<double> initial_state;

  static std::string node_name(std::size_t i) { return "x" + std::to_string(i + 1); }

  void validate() const {
    if (nodes.empty()) throw DimensionError("NetworkSpec: no nodes");
    for (const auto& node : nodes) {
      for (const auto& c : node.inputs) {
        if (c.source >= nodes.size()) throw LookupError("NetworkSpec: coupling to missing node");
      }
    }
    if (!initial_state.empty() && initial_state.size() != nodes.size()) {
      throw DimensionError("NetworkSpec: initial state size does not match node count");
    }
  }
};

/// Per-node trajectories of `steps` retained states after `transients` dropped.
inline std::vector<std::vector<double>> simulate_network(const NetworkSpec& spec, std::size_t steps,
                                                         std::size_t transients,
                                                         std::uint64_t seed) {
  spec.validate();
  const std::size_t n = spec.nodes.size();
  std::vector<double> state = spec.initial_state;
  if (state.empty()) {
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) state.push_back(rng.uniform01());
  }
  std::vector<std::vector<double>> out(n);
  for (auto& s : out) s.reserve(steps);
  std::vector<double> next(n);
  for (std::size_t t = 0; t < transients + steps; ++t) {
    if (t >= transients) {
      for (std::size_t i = 0; i < n; ++i) out[i].push_back(state[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const NetworkNode& node = spec.nodes[i];
      double self_weight = 1.0;
      double drive = 0.0;
      for (const auto& c : node.inputs) {
        self_weight -= c.weight;
        drive += c.weight * state[c.source];
      }
      next[i] = wrap_unit(self_weight * evaluate(node.map, state[i]) + drive);
    }
    state.swap(next);
  }
  return out;
}

/// Bundle of simulated node series named x1, x2, ...
inline SeriesBundle network_bundle(const std::vector<std::vector<double>>& series, const Mesh& mesh,
                                   std::size_t own_lag = 1, std::size_t source_lag = 1,
                                   std::size_t budget = kDefaultAlphabetBudget) {
  SeriesBundle bundle(mesh, own_lag, source_lag, budget);
  for (std::size_t i = 0; i < series.size(); ++i) bundle.add(NetworkSpec::node_name(i), series[i]);
  return bundle;
}

}  // namespace infoflow
