#pragma once

// Sweep configuration: flat "key = value" text, '#' starts a comment.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "otmss/spectrum.hpp"
#include "otmss/squeeze_dynamics.hpp"

namespace otmss::pipeline {

/// Mpc^-1 expressed in reduced Planck units.
inline constexpr double kPhysicalUnitScale = 2.62586e-57;

struct SweepConfig {
  double k_min = 1.0e-4; ///< Mpc^-1
  double k_max = 1.0;
  int k_points = 200;
  double x_start = 100.0;
  double x_end = 0.01;
  double init_r = 1.0e-6;
  double init_phi = 0.78539816339744830962;
  RhsForm form = RhsForm::conformal;
  CouplingPower coupling_power = CouplingPower::literal;
  EvalPoint eval_point = EvalPoint::super_horizon;
  PlanckAnchors anchors;
  Tolerances tolerances;
  double unit_scale = kPhysicalUnitScale;
  BackgroundParams background;
  double mu2_rate = 0.0;
  double r_cap = 30.0;
  AngleTreatment angle_treatment = AngleTreatment::automatic;
  double slaving_threshold = 1.0e6;
  SpectrumMode spectrum_mode = SpectrumMode::anchored;
  IntegratorKind integrator = IntegratorKind::adaptive;
  double fixed_step = 1.0e-3;
  int samples_per_decade = 10;
  int threads = 1;
  bool zero_coupling = false;
  bool debug_flip_beta_sign = false;

  /// Throws ConfigError naming the offending field(s).
  void validate() const;

  DynamicsConfig dynamics() const;
  SpectrumSettings spectrum() const;

  bool operator==(const SweepConfig&) const = default;
};

/// Recognised keys, in echo order.
const std::vector<std::string>& config_keys();

/// Applies "key = value" lines on top of `base`. The result is validated.
SweepConfig parse_config(const std::string& text, SweepConfig base = {},
                         const std::string& source = "<config>");

/// Defaults when `path` is empty.
SweepConfig load_config(const std::optional<std::filesystem::path>& path);

/// Single-key assignment (same parsing rules as a file line), no validation.
void set_config_value(SweepConfig& config, const std::string& key, const std::string& value);

/// Every key with a round-trippable value (%.17g for reals).
std::string echo_config(const SweepConfig& config);

/// FNV-1a over the echo.
std::uint64_t config_hash(const SweepConfig& config);

} // namespace otmss::pipeline
