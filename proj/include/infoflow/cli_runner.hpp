#pragma once

// Experiment configuration, orchestration and result emission for the
// `infoflow` command line tool.
//
// Configuration comes from a flat JSON object (keys below), then the
// INFOFLOW_OUT_DIR environment variable (output directory), then command-line
// flags, each layer overriding the previous one.

#include <atomic>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "infoflow/ambiguity.hpp"
#include "infoflow/discretization.hpp"
#include "infoflow/dynamics.hpp"
#include "infoflow/errors.hpp"
#include "infoflow/flow.hpp"
#include "infoflow/noise_lab.hpp"
#include "infoflow/prob_core.hpp"
#include "infoflow/random.hpp"
#include "infoflow/report.hpp"

namespace infoflow {

inline constexpr const char* kOutDirEnv = "INFOFLOW_OUT_DIR";

enum class ExperimentKind { bernoulli, sinebox, noise, te, ce, cmi_check };

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::bernoulli: return "bernoulli";
    case ExperimentKind::sinebox: return "sinebox";
    case ExperimentKind::noise: return "noise";
    case ExperimentKind::te: return "te";
    case ExperimentKind::ce: return "ce";
    case ExperimentKind::cmi_check: return "cmi-check";
  }
  return "?";
}

struct IntRange {
  long lo;
  long hi;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::bernoulli;
  std::size_t cells = 300;                  // delta_inv
  std::size_t samples = 1'000'000;
  std::size_t transients = 1000;
  std::uint64_t seed = 0;
  double x0 = 0.5;
  std::vector<std::string> dists{"uniform"};
  IntRange d_range{2, 30};
  IntRange n_range{1, 10};
  std::vector<double> epsilons{0.1, 0.02};
  std::vector<std::size_t> cells_list{4, 8, 16, 32};  // l_list
  std::vector<std::string> maps{"E2", "E10", "R0.37"};
  std::vector<double> couplings{0.2, 0.4, 0.6, 0.8};
  std::size_t dims = 4;
  std::size_t trials = 1000;
  std::string out = "results";
  bool plot = false;
  std::size_t threads = 0;  // 0: hardware concurrency

  void validate() const;
};

/// Keys accepted in config files; flags are the kebab-case mirrors.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "experiment", "delta_inv", "samples", "transients", "seed", "x0",    "dist",
      "d_range",    "n_range",   "epsilon", "l_list",     "maps", "coupling", "dims",
      "trials",     "out",       "plot",    "threads"};
  return keys;
}

inline std::string valid_keys_message() {
  std::string s = "valid keys:";
  for (const auto& k : config_keys()) s += " " + k;
  return s;
}

/// --help was requested; carries the usage text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  T value{};
  const char* first = t.data();
  const char* last = t.data() + t.size();
  std::from_chars_result res{};
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is unavailable on some standard libraries; strtod
    // with a full-consumption check is equivalent here.
    char* end = nullptr;
    value = std::strtod(first, &end);
    res.ptr = end;
    res.ec = (end == first || !std::isfinite(value)) ? std::errc::invalid_argument : std::errc{};
  } else {
    res = std::from_chars(first, last, value);
  }
  if (t.empty() || res.ec != std::errc{} || res.ptr != last) {
    throw UsageError("malformed number for key '" + key + "': '" + text + "'");
  }
  return value;
}

inline IntRange parse_range(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  const auto dots = t.find("..");
  if (dots == std::string::npos) {
    const long v = parse_number<long>(key, t);
    return {v, v};
  }
  return {parse_number<long>(key, t.substr(0, dots)), parse_number<long>(key, t.substr(dots + 2))};
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw UsageError("malformed boolean for key '" + key + "': '" + text + "'");
}

inline ExperimentKind parse_kind(const std::string& text) {
  for (auto k : {ExperimentKind::bernoulli, ExperimentKind::sinebox, ExperimentKind::noise,
                 ExperimentKind::te, ExperimentKind::ce, ExperimentKind::cmi_check}) {
    if (text == to_string(k)) return k;
  }
  throw UsageError("unknown experiment '" + text +
                   "'; expected one of bernoulli, sinebox, noise, te, ce, cmi-check");
}

/// Distribution lists are separated by ';' or whitespace-free '+', since the
/// gaussian spec itself contains a comma.
inline std::vector<std::string> split_dists(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ';' || c == '+') {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

/// Applies one key from either source. Text values use the flag grammar.
inline void apply_text(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    cfg.experiment = parse_kind(trim(value));
  } else if (key == "delta_inv") {
    cfg.cells = parse_number<std::size_t>(key, value);
  } else if (key == "samples") {
    cfg.samples = parse_number<std::size_t>(key, value);
  } else if (key == "transients") {
    cfg.transients = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "x0") {
    cfg.x0 = parse_number<double>(key, value);
  } else if (key == "dist") {
    cfg.dists = split_dists(value);
  } else if (key == "d_range") {
    cfg.d_range = parse_range(key, value);
  } else if (key == "n_range") {
    cfg.n_range = parse_range(key, value);
  } else if (key == "epsilon") {
    cfg.epsilons.clear();
    for (const auto& p : split(value, ',')) cfg.epsilons.push_back(parse_number<double>(key, p));
  } else if (key == "l_list") {
    cfg.cells_list.clear();
    for (const auto& p : split(value, ',')) cfg.cells_list.push_back(parse_number<std::size_t>(key, p));
  } else if (key == "maps") {
    cfg.maps = split(value, ',');
  } else if (key == "coupling") {
    cfg.couplings.clear();
    for (const auto& p : split(value, ',')) cfg.couplings.push_back(parse_number<double>(key, p));
  } else if (key == "dims") {
    cfg.dims = parse_number<std::size_t>(key, value);
  } else if (key == "trials") {
    cfg.trials = parse_number<std::size_t>(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "plot") {
    cfg.plot = parse_bool(key, value);
  } else if (key == "threads") {
    cfg.threads = parse_number<std::size_t>(key, value);
  } else {
    throw UsageError("unknown key '" + key + "'; " + valid_keys_message());
  }
}

/// JSON scalar or array rendered in the flag grammar.
inline std::string json_to_text(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  if (v.is_array()) {
    const bool is_range = key == "d_range" || key == "n_range";
    const char sep = key == "dist" ? ';' : ',';
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += is_range ? std::string("..") : std::string(1, sep);
      out += json_to_text(key, v[i]);
    }
    return out;
  }
  throw UsageError("unsupported value for key '" + key + "'");
}

}  // namespace detail

/// Applies a flat JSON object (file contents) on top of `cfg`.
inline void apply_config_json(ExperimentConfig& cfg, const std::string& text) {
  if (detail::trim(text).empty()) return;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a flat JSON object");
  for (const auto& [key, value] : doc.items()) {
    detail::apply_text(cfg, key, detail::json_to_text(key, value));
  }
}

inline void ExperimentConfig::validate() const {
  if (cells == 0) throw UsageError("delta_inv must be positive");
  if (samples == 0) throw UsageError("samples must be positive");
  if (trials == 0 || dims == 0) throw UsageError("trials and dims must be positive");
  if (!(x0 >= 0.0 && x0 < 1.0)) throw UsageError("x0 must lie in [0, 1)");
  if (dists.empty()) throw UsageError("dist list is empty");
  if (d_range.lo < 2 || d_range.hi < d_range.lo) throw UsageError("d_range must be lo..hi with 2 <= lo <= hi");
  if (n_range.lo < 1 || n_range.hi < n_range.lo) throw UsageError("n_range must be lo..hi with 1 <= lo <= hi");
  if (epsilons.empty()) throw UsageError("epsilon list is empty");
  for (double e : epsilons) {
    if (!(e > 0.0 && e <= 1.0)) throw UsageError("epsilon values must lie in (0, 1]");
  }
  if (cells_list.empty()) throw UsageError("l_list is empty");
  for (auto l : cells_list) {
    if (l == 0) throw UsageError("l_list entries must be positive");
  }
  if (maps.empty()) throw UsageError("maps list is empty");
  if (couplings.empty()) throw UsageError("coupling list is empty");
}

/// Builds a config from command-line arguments (without the program name).
/// An optional leading positional names the experiment; `--config FILE`
/// loads a JSON file that the remaining flags override.
inline ExperimentConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"infoflow: information flow experiments for interval maps", "infoflow"};
  std::optional<std::string> config_path;
  std::optional<std::string> positional;
  app.add_option("--config", config_path, "flat JSON config file");
  app.add_option("experiment_name", positional, "bernoulli | sinebox | noise | te | ce | cmi-check");

  struct Flag {
    const char* key;
    const char* flag;
    const char* help;
  };
  static const Flag flags[] = {
      {"experiment", "--experiment", "bernoulli | sinebox | noise | te | ce | cmi-check"},
      {"delta_inv", "--delta-inv", "cells L = 1/Delta (default 300)"},
      {"samples", "--samples", "sample count / trajectory length N (default 1e6)"},
      {"transients", "--transients", "discarded transient iterates (default 1000)"},
      {"seed", "--seed", "64-bit seed (default 0)"},
      {"x0", "--x0", "trajectory seed point (default 0.5)"},
      {"dist", "--dist", "uniform | gaussian:MEAN,VAR | acip; ';'-separated list"},
      {"d_range", "--d-range", "Bernoulli rates, e.g. 2..30"},
      {"n_range", "--n-range", "sine box indices, e.g. 1..10"},
      {"epsilon", "--epsilon", "noise amplitudes, e.g. 0.1,0.02"},
      {"l_list", "--l-list", "mesh sizes for te sweeps, or per-epsilon meshes for noise"},
      {"maps", "--maps", "noise base maps, e.g. E2,E10,R0.37"},
      {"coupling", "--coupling", "coupling strengths for ce"},
      {"dims", "--dims", "alphabet size per axis for cmi-check"},
      {"trials", "--trials", "random joints for cmi-check"},
      {"out", "--out", "output directory"},
      {"plot", "--plot", "also write an SVG plot (true/false)"},
      {"threads", "--threads", "worker threads for sweeps (0 = all cores)"},
  };
  std::map<std::string, std::optional<std::string>> values;
  for (const auto& f : flags) values[f.key];
  for (const auto& f : flags) app.add_option(f.flag, values[f.key], f.help);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "; " + valid_keys_message());
  }

  ExperimentConfig cfg;
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw UsageError("cannot read config file '" + *config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    apply_config_json(cfg, buf.str());
  }
  if (const char* env = std::getenv(kOutDirEnv); env && *env) cfg.out = env;
  if (positional) detail::apply_text(cfg, "experiment", *positional);
  for (const auto& [key, value] : values) {
    if (value) detail::apply_text(cfg, key, *value);
  }
  cfg.validate();
  return cfg;
}

/// Map label grammar: E<d>, S<n>, R<alpha>, or bernoulli:<d>, sine:<n>, rotation:<alpha>.
inline MapSpec parse_map(const std::string& text) {
  const std::string t = detail::trim(text);
  auto tail = [&](std::size_t skip) { return t.substr(skip); };
  if (t.rfind("bernoulli:", 0) == 0) return MapSpec::bernoulli(detail::parse_number<int>("maps", tail(10)));
  if (t.rfind("sine:", 0) == 0) return MapSpec::sine_box(detail::parse_number<int>("maps", tail(5)));
  if (t.rfind("rotation:", 0) == 0) return MapSpec::rotation(detail::parse_number<double>("maps", tail(9)));
  if (!t.empty() && t[0] == 'E') return MapSpec::bernoulli(detail::parse_number<int>("maps", tail(1)));
  if (!t.empty() && t[0] == 'S') return MapSpec::sine_box(detail::parse_number<int>("maps", tail(1)));
  if (!t.empty() && t[0] == 'R') return MapSpec::rotation(detail::parse_number<double>("maps", tail(1)));
  throw UsageError("unknown map '" + text + "'");
}

/// `uniform`, `gaussian:MEAN,VAR`, or `acip` (invariant law of `map`).
inline DistSpec parse_dist(const std::string& text, const std::optional<MapSpec>& map,
                           const ExperimentConfig& cfg) {
  const std::string t = detail::trim(text);
  if (t == "uniform") return UniformDist{};
  if (t.rfind("gaussian:", 0) == 0) {
    const auto parts = detail::split(t.substr(9), ',');
    if (parts.size() != 2) throw UsageError("gaussian spec must be gaussian:MEAN,VAR");
    TruncatedGaussianDist g{detail::parse_number<double>("dist", parts[0]),
                            detail::parse_number<double>("dist", parts[1])};
    if (!(g.variance > 0.0)) throw UsageError("gaussian variance must be positive");
    return g;
  }
  if (t == "acip") {
    if (!map) throw UsageError("acip distribution needs a map");
    return AcipDist{*map, cfg.x0, cfg.transients, cfg.samples + 1};
  }
  throw UsageError("unknown distribution '" + text + "'; expected uniform, gaussian:MEAN,VAR or acip");
}

namespace detail {

/// Runs fn(0..n-1) on a small worker pool; results keep index order.
template <typename Fn>
auto parallel_map(std::size_t n, std::size_t threads, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::size_t workers = threads ? threads : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) slots[i].emplace(fn(i));
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::future<void>> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.push_back(std::async(std::launch::async, work));
    for (auto& f : pool) f.get();
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

template <typename T>
std::vector<T> flatten(std::vector<std::vector<T>> nested) {
  std::vector<T> out;
  for (auto& v : nested) {
    for (auto& x : v) out.push_back(std::move(x));
  }
  return out;
}

struct SweepPoint {
  std::size_t series_index;
  std::string series;
  long param;
};

inline std::vector<ReportRow> map_sweep(const ExperimentConfig& cfg, bool sine) {
  const IntRange range = sine ? cfg.n_range : cfg.d_range;
  std::vector<SweepPoint> points;
  for (std::size_t s = 0; s < cfg.dists.size(); ++s) {
    for (long p = range.lo; p <= range.hi; ++p) points.push_back({s, cfg.dists[s], p});
  }
  const Mesh mesh(cfg.cells);
  return parallel_map(points.size(), cfg.threads, [&](std::size_t idx) {
    const SweepPoint& pt = points[idx];
    const MapSpec map = sine ? MapSpec::sine_box(static_cast<int>(pt.param))
                             : MapSpec::bernoulli(static_cast<int>(pt.param));
    const DistSpec dist = parse_dist(pt.series, map, cfg);
    std::vector<double> y;
    std::vector<double> x;
    if (std::holds_alternative<AcipDist>(dist)) {
      // Consecutive trajectory pairs (x_t, x_{t+1}).
      Trajectory traj = generate_trajectory(map, cfg.x0, cfg.transients, cfg.samples + 1);
      y.assign(traj.samples.begin(), traj.samples.end() - 1);
      x.assign(traj.samples.begin() + 1, traj.samples.end());
    } else {
      y = sample_distribution(dist, cfg.samples, derive_seed(cfg.seed, idx));
      x = pairs_from_map(map, y);
    }
    const AmbiguityReport amb = conjecture_prediction(map, density_from_samples(mesh, y),
                                                      density_from_samples(mesh, x));
    ReportRow row;
    row.param = std::to_string(pt.param);
    row.series = pt.series;
    row.empirical = mutual_information(joint_from_samples(mesh, y, x));
    row.predicted = amb.predicted_mi;
    row.flags.push_back("ambiguity=" + format_number(amb.relative_ambiguity));
    if (amb.clipped_weight > 0.0) row.flags.push_back("clipped_weight=" + format_number(amb.clipped_weight));
    return row;
  });
}

inline std::vector<ReportRow> noise_sweep(const ExperimentConfig& cfg) {
  struct Point {
    std::string map;
    double eps;
    std::size_t cells;
  };
  std::vector<Point> points;
  for (const auto& m : cfg.maps) {
    for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
      const std::size_t cells =
          cfg.cells_list.size() == cfg.epsilons.size() ? cfg.cells_list[e] : cfg.cells;
      points.push_back({m, cfg.epsilons[e], cells});
    }
  }
  return parallel_map(points.size(), cfg.threads, [&](std::size_t idx) {
    const Point& pt = points[idx];
    ExperimentReport r = noise_experiment(NoiseSpec{pt.eps, parse_map(pt.map)}, Mesh(pt.cells),
                                          cfg.samples, derive_seed(cfg.seed, idx));
    ReportRow row = std::move(r.rows.front());
    row.flags.push_back("L=" + std::to_string(pt.cells));
    return row;
  });
}

/// V_{t+1} = U_t + V_t mod 1 with iid uniform U: the cell-level transfer
/// entropy U -> V is ln L - ln 2 for L >= 2, and V -> U is zero.
inline std::vector<ReportRow> te_sweep(const ExperimentConfig& cfg) {
  return flatten(parallel_map(cfg.cells_list.size(), cfg.threads, [&](std::size_t idx) {
    const std::size_t cells = cfg.cells_list[idx];
    Rng rng(derive_seed(cfg.seed, idx));
    std::vector<double> u(cfg.samples), v(cfg.samples);
    double state = rng.uniform01();
    for (std::size_t t = 0; t < cfg.samples; ++t) {
      u[t] = rng.uniform01();
      v[t] = state;
      state = wrap_unit(u[t] + state);
    }
    SeriesBundle bundle{Mesh(cells)};
    bundle.add("U", std::move(u));
    bundle.add("V", std::move(v));
    std::vector<ReportRow> rows(2);
    rows[0].param = rows[1].param = std::to_string(cells);
    rows[0].series = "U->V";
    rows[0].empirical = transfer_entropy(bundle, "U", "V");
    rows[0].predicted = cells >= 2 ? std::log(static_cast<double>(cells)) - std::log(2.0) : 0.0;
    rows[1].series = "V->U";
    rows[1].empirical = transfer_entropy(bundle, "V", "U");
    rows[1].predicted = 0.0;
    return rows;
  }));
}

/// Chain x1 -> x2 -> x3: an E_3 root drives two E_2 nodes through diffusive coupling.
inline NetworkSpec chain_network(double coupling) {
  NetworkSpec spec;
  spec.nodes.push_back({MapSpec::bernoulli(3), {}});
  spec.nodes.push_back({MapSpec::bernoulli(2), {{0, coupling}}});
  spec.nodes.push_back({MapSpec::bernoulli(2), {{1, coupling}}});
  return spec;
}

inline std::vector<ReportRow> ce_sweep(const ExperimentConfig& cfg) {
  return flatten(parallel_map(cfg.couplings.size(), cfg.threads, [&](std::size_t idx) {
    const double c = cfg.couplings[idx];
    const auto series = simulate_network(chain_network(c), cfg.samples, cfg.transients,
                                         derive_seed(cfg.seed, idx));
    const SeriesBundle bundle = network_bundle(series, Mesh(cfg.cells));
    std::vector<ReportRow> rows(2);
    rows[0].param = rows[1].param = format_number(c);
    rows[0].series = "direct C(x1->x2)";
    rows[0].empirical = causation_entropy(bundle, {"x2"}, {"x1"}, {});
    rows[1].series = "indirect C(x1->x3|x2)";
    rows[1].empirical = causation_entropy(bundle, {"x3"}, {"x1"}, {"x2"});
    rows[1].predicted = 0.0;
    return rows;
  }));
}

/// Random joint with a sprinkling of exact zeros.
inline JointDist3 random_joint3(Rng& rng, std::size_t nx, std::size_t ny, std::size_t nz) {
  std::vector<double> m(nx * ny * nz);
  for (;;) {
    double total = 0.0;
    for (auto& v : m) {
      v = rng.uniform01() < 0.15 ? 0.0 : -std::log(1.0 - rng.uniform01());
      total += v;
    }
    if (total > 0.0) {
      for (auto& v : m) v /= total;
      return JointDist3(nx, ny, nz, std::move(m));
    }
  }
}

inline std::vector<ReportRow> cmi_check(const ExperimentConfig& cfg) {
  Rng rng(cfg.seed);
  double worst = 0.0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const JointDist3 j = random_joint3(rng, cfg.dims, cfg.dims, cfg.dims);
    const double direct = conditional_mutual_information(j).value;
    const double split = disintegrated_cmi(j).value;
    worst = std::max(worst, std::abs(direct - split));
  }
  ReportRow row;
  row.param = std::to_string(cfg.trials);
  row.series = "max|cmi-disintegrated|";
  row.empirical = InfoValue::finite(worst);
  row.predicted = 0.0;
  const std::string d = std::to_string(cfg.dims);
  row.flags.push_back("dims=" + d + "x" + d + "x" + d);
  return {row};
}

}  // namespace detail

/// Computes the report for a validated config. Deterministic given the seed.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.experiment = to_string(cfg.experiment);
  report.seed = cfg.seed;
  report.samples = cfg.samples;
  report.cells = cfg.cells;
  switch (cfg.experiment) {
    case ExperimentKind::bernoulli:
      for (const auto& d : cfg.dists) {
        if (d == "acip") throw UsageError("bernoulli experiment: use uniform (the E_d-invariant law) instead of acip");
      }
      report.rows = detail::map_sweep(cfg, false);
      break;
    case ExperimentKind::sinebox: report.rows = detail::map_sweep(cfg, true); break;
    case ExperimentKind::noise: report.rows = detail::noise_sweep(cfg); break;
    case ExperimentKind::te: report.rows = detail::te_sweep(cfg); break;
    case ExperimentKind::ce: report.rows = detail::ce_sweep(cfg); break;
    case ExperimentKind::cmi_check: report.rows = detail::cmi_check(cfg); break;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline std::string sweep_label(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::bernoulli: return "expansion rate d";
    case ExperimentKind::sinebox: return "sine box index n";
    case ExperimentKind::noise: return "noise amplitude epsilon";
    case ExperimentKind::te: return "cells L";
    case ExperimentKind::ce: return "coupling strength";
    case ExperimentKind::cmi_check: return "trials";
  }
  return "";
}

/// Writes <out>/<experiment>.csv, <experiment>.json (metadata) and, when
/// plotting is enabled, <experiment>.svg. Returns the written paths.
inline std::vector<std::filesystem::path> emit(const ExperimentReport& report, const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  std::vector<fs::path> written;
  auto write = [&](const fs::path& p, const std::string& body) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << body;
    written.push_back(p);
  };
  write(dir / (report.experiment + ".csv"), to_csv(report));
  nlohmann::json meta{{"experiment", report.experiment},
                      {"seed", report.seed},
                      {"samples", report.samples},
                      {"delta_inv", report.cells},
                      {"rows", report.rows.size()},
                      {"wall_seconds", report.wall_seconds}};
  write(dir / (report.experiment + ".json"), meta.dump(2) + "\n");
  if (cfg.plot) write(dir / (report.experiment + ".svg"), to_svg(report, sweep_label(cfg.experiment)));
  return written;
}

/// run = run_experiment + emit.
inline ExperimentReport run(const ExperimentConfig& cfg) {
  ExperimentReport report = run_experiment(cfg);
  emit(report, cfg);
  return report;
}

/// Command-line entry point. Exit codes: 0 success, 1 usage or capacity
/// error, 2 internal-consistency failure.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  try {
    const ExperimentConfig cfg = parse_config(args);
    const ExperimentReport report = run(cfg);
    out << to_csv(report);
    err << "wrote " << (std::filesystem::path(cfg.out) / (report.experiment + ".csv")).string() << " ("
        << report.rows.size() << " rows, " << report.wall_seconds << " s)\n";
    return 0;
  } catch (const HelpRequested& help) {
    out << help.what();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return 1;
  } catch (const ConsistencyError& e) {
    err << "internal consistency failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace infoflow
