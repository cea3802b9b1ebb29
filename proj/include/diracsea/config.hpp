#pragma once

// Run configuration (JSON, "schema": 1). Parsing is strict: unknown keys and
// out-of-range values raise InvalidInput naming the offending field.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diracsea/kernel3p1.hpp"
#include "diracsea/lattice.hpp"
#include "diracsea/observables.hpp"

namespace diracsea::config {

inline constexpr int kSchemaVersion = 1;

struct CurrentPoint {
  double t = 0.0;
  double x = 0.0;
};

struct Tolerances {
  double unitarity = 1e-10;
  double max_condition = 1e6;
  double doubling_ratio = 1.2;
  double current_rel = 0.05;
  double current_abs = 1e-9;
};

struct SweepSettings {
  std::string experiment;  // inner experiment
  std::string axis;
  std::vector<double> values;
};

struct RunConfig {
  int schema = kSchemaVersion;
  std::string experiment;

  lattice::LatticeConfig lattice;
  std::vector<lattice::GaussianPulse> a0_pulses, a1_pulses, gamma_pulses;

  kernel3p1::Potential3p1 kernel;
  std::optional<kernel3p1::Potential3p1> kernel_b;  // second potential, tangential probe
  std::vector<double> cutoffs{5.0, 10.0, 20.0, 40.0};
  kernel3p1::SamplerSpec sampler;
  kernel3p1::ProbeThresholds thresholds;

  int max_pairs = 1;
  int channel_cap = observables::kTwoPairChannelCap;
  observables::PhaseFunctional phase;
  std::vector<CurrentPoint> current_points{{0.0, 0.0}};
  int current_mu = 0;
  double current_epsilon = 1e-3;

  int lambda_sign = 1;
  std::optional<double> probe_time;  // class-probe surface, default t1
  std::vector<int> probe_n;          // class-probe lattice sizes, default {N}

  Tolerances tolerances;
  std::optional<SweepSettings> sweep;

  lattice::Potential1p1 potential() const;
  /// Canonical JSON of the effective configuration (sorted keys).
  std::string canonical_json() const;
};

RunConfig parse(const std::string& json_text);
RunConfig load(const std::string& path);

/// Names accepted by "experiment".
const std::vector<std::string>& experiment_names();

/// Returns a copy with one sweep axis set to `value`. Axes: N, e, amplitude,
/// Lambda (alias Λ).
RunConfig with_axis_value(const RunConfig& cfg, const std::string& axis, double value);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& data);

}  // namespace diracsea::config
