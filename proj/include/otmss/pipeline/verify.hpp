#pragma once

// Built-in oracle suite behind `otmss verify`.

#include <string>
#include <vector>

#include "otmss/pipeline/config.hpp"

namespace otmss::pipeline {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool degraded = false; ///< passed only under a loosened bound
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Non-stiff scenario used to cross-check the two integrators: conformal
/// form, hamiltonian-consistent coupling, dynamic angle, r0 = 0.5,
/// phi0 = pi/4, x from 100 to 0.1. Labels are mapped with kValidationUnitScale.
inline constexpr double kValidationUnitScale = 1.0e5;
inline constexpr double kValidationFixedStep = 0.0125;
DynamicsConfig validation_dynamics(const Tolerances& tolerances = {});

/// n log-spaced labels over [1e-4, 1], already multiplied by kValidationUnitScale.
std::vector<double> validation_wavenumbers(std::size_t n);

struct ConvergenceStudy {
  std::vector<double> steps;
  std::vector<double> differences; ///< |y(h_i) - y(h_{i+1})|, max norm over (r, phi)
  double exponent = 0.0;           ///< least-squares slope of log difference vs log h
};

/// Self-convergence of the fixed-step integrator on the validation scenario
/// (steps halving successively).
ConvergenceStudy rk4_convergence(double k, const std::vector<double>& steps);

/// Max over k and over (r, phi) of the endpoint difference between the
/// adaptive and fixed-step integrators on the validation scenario.
double dual_integrator_gap(const std::vector<double>& ks, const Tolerances& tolerances,
                           double fixed_step = kValidationFixedStep);

VerifyReport run_verify(const SweepConfig& config);

} // namespace otmss::pipeline
