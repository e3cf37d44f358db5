#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otmss/pipeline/config.hpp"
#include "otmss/spectrum.hpp"

namespace otmss::pipeline {

inline constexpr const char* kVersion = "0.1.0";

struct FailedPoint {
  double k = 0.0;
  std::string reason;
};

struct SummaryStats {
  double max_gamma_deviation = 0.0; ///< max |gamma - 1|
  double max_wronskian_residual = 0.0;
  double max_occupation = 0.0;
  bool fit_valid = false;
  double fitted_amplitude = 0.0;
  double fitted_tilt = 0.0;
  double fit_rms_residual = 0.0;
  double r_min = 0.0, r_max = 0.0;
  double phi_min = 0.0, phi_max = 0.0;
  double r_variation = 0.0;   ///< (max - min) / max |r|
  double phi_variation = 0.0; ///< (max - min) / max |phi|
  bool pivot_on_grid = false;
  double pivot_gamma = 0.0;
  double pivot_power = 0.0;
  std::size_t slaved_steps = 0;
  std::size_t mode_switches = 0;
  std::size_t capped = 0;
  std::vector<FailedPoint> failures;
};

struct Provenance {
  std::string version = kVersion;
  std::string timestamp; ///< ISO-8601 UTC
  std::uint64_t config_hash = 0;
};

struct RunReport {
  SweepConfig config;
  std::string config_echo;
  std::vector<SpectrumRecord> records; ///< ordered by k, failures omitted
  SummaryStats summary;
  Provenance provenance;
  double elapsed_seconds = 0.0;
};

/// Log-spaced labels k_min..k_max; the interior node nearest k_pivot is
/// replaced by k_pivot when the pivot lies inside the window.
std::vector<double> k_grid(const SweepConfig& config);

/// Relative spread (max - min) / max |v|; 0 for an empty or all-zero set.
double relative_variation(const std::vector<double>& values);

RunReport run_sweep(const SweepConfig& config);

} // namespace otmss::pipeline
