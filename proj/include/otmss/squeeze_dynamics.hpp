#pragma once

// Evolution of the squeezing amplitude r_k and rotation angle phi_k.
//
// The right-hand sides are implemented in conformal time as printed, and the
// integrator runs in the dimensionless variable x = -k eta (dx = -k deta), so
// horizon crossing is x = 1 for every mode.
//
// Every angle equation here has the structure
//     dphi/deta = -drive + (1/2) sin(2 phi) * bracket,
// with bracket ~ M_P coth r. For small k/M_P the angle relaxes onto the root
// sin(2 phi) = 2 drive / bracket on a time scale far shorter than any other
// in the problem. When that scale separation exceeds a threshold the angle is
// slaved to this root and only r is integrated (see AngleTreatment).

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "otmss/background.hpp"

namespace otmss {

enum class RhsForm { conformal, transformed, closed_reference };
enum class CouplingPower { literal, hamiltonian_consistent };
enum class AngleTreatment { automatic, dynamic, slaved };
enum class IntegratorKind { adaptive, fixed_step };
enum class EvalPoint { super_horizon, horizon_crossing };

struct SqueezeState {
  double r = 0.0;   ///< squeeze amplitude, >= 0
  double phi = 0.0; ///< squeeze angle, unwrapped
  double x = 0.0;   ///< -k eta > 0

  /// phi mapped to (-pi, pi].
  double wrapped_phi() const;
};

/// Mode-specific inputs to the right-hand sides.
struct ModeContext {
  double k = 1.0; ///< internal (Planck-unit) wavenumber
  BackgroundParams background;
  CouplingPower power = CouplingPower::literal;
  std::function<double(double eta, double k)> mu2_rate; ///< empty: 0
  bool zero_coupling = false;

  CouplingCoefficients couplings_at(double x) const;
  /// M_P |1 - mu1^2| (literal) or lambda (hamiltonian-consistent).
  double closed_factor(const CouplingCoefficients& c) const;
};

struct Rates {
  double dr = 0.0;
  double dphi = 0.0;
};

/// coth r with the Laurent series 1/r + r/3 - r^3/45 below r = 1e-4.
/// Returns 0 at r == 0 (pole dropped: the angle is undefined at the origin).
double coth_regularized(double r);

/// d/deta of (r, phi), printed conformal form.
Rates rhs_conformal(const SqueezeState& state, const ModeContext& ctx);
/// d/dtau of (r, phi), printed transformed form with tau identified with eta.
Rates rhs_transformed(const SqueezeState& state, const ModeContext& ctx);
/// mu2 -> 0 limit taken analytically.
Rates rhs_closed_reference(const SqueezeState& state, const ModeContext& ctx);

Rates rhs_eta(RhsForm form, const SqueezeState& state, const ModeContext& ctx);
/// d/dx of (r, phi), x = -k eta.
Rates rhs_x(RhsForm form, const SqueezeState& state, const ModeContext& ctx);

/// Angle equation split as dphi/deta = -drive + (1/2) sin(2 phi) bracket.
struct AngleBalance {
  double drive = 0.0;   ///< M_P mu2 (0 for closed_reference)
  double bracket = 0.0; ///< +inf at r == 0

  /// 2 drive / bracket = sin(2 phi*) on the slow manifold.
  double manifold_sine() const;
  /// Relaxation rate onto the manifold times |eta|; infinite at r == 0.
  double separation(double abs_eta) const;
};

AngleBalance angle_balance(RhsForm form, double r, double x, const ModeContext& ctx);

/// Stable root of the angle equation in the basin containing phi_hint, or
/// nullopt when no root exists (bracket < 2 drive).
std::optional<double> slaved_angle(RhsForm form, double r, double x, const ModeContext& ctx,
                                   double phi_hint);

struct Tolerances {
  double abs = 1.0e-10;
  double rel = 1.0e-10;

  bool operator==(const Tolerances&) const = default;
};

struct DynamicsConfig {
  RhsForm form = RhsForm::conformal;
  CouplingPower power = CouplingPower::literal;
  double x_start = 100.0;
  double x_end = 0.01;
  double init_r = 1.0e-6;
  double init_phi = 0.78539816339744830962; // pi/4
  Tolerances tolerances;
  IntegratorKind integrator = IntegratorKind::adaptive;
  double fixed_step = 1.0e-3;   ///< RK4 step in x
  int samples_per_decade = 10;  ///< log-x output stride
  double r_cap = 30.0;
  AngleTreatment angle = AngleTreatment::automatic;
  double slaving_threshold = 1.0e6;
  std::size_t max_steps = 5'000'000;
  EvalPoint eval_point = EvalPoint::super_horizon;
  BackgroundParams background;
  std::function<double(double eta, double k)> mu2_rate;
  bool zero_coupling = false;
  unsigned threads = 1;

  void validate() const;
};

struct IntegratorStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
  std::size_t slaved_steps = 0;
  std::size_t mode_switches = 0;
  std::size_t clamped_steps = 0; ///< steps where r < 0 was clamped to 0
  double max_error_estimate = 0.0; ///< scaled error norm, adaptive only
  double min_separation = 0.0;
  bool capped = false;
};

struct Trajectory {
  std::vector<SqueezeState> samples; ///< strictly decreasing x
  double k = 0.0;
  RhsForm form = RhsForm::conformal;
  IntegratorStats stats;

  const SqueezeState& back() const { return samples.back(); }
  /// Sample recorded at exactly x; throws std::out_of_range when absent.
  const SqueezeState& sample_at(double x) const;
};

class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string& message, SqueezeState last_good)
      : std::runtime_error(message), last_good_(last_good) {}
  const SqueezeState& last_good() const noexcept { return last_good_; }

private:
  SqueezeState last_good_;
};

/// Output abscissae: x_start, log-spaced points, x = 1 and x_end, descending.
std::vector<double> output_grid(double x_start, double x_end, int samples_per_decade);

/// Integrates one mode from x_start down to x_end. `init` overrides the
/// configured (init_r, init_phi) and its x is ignored.
Trajectory integrate(double k, const DynamicsConfig& config,
                     std::optional<SqueezeState> init = std::nullopt);

struct GridPoint {
  double k = 0.0;
  SqueezeState state; ///< at the evaluation point
  bool failed = false;
  std::string error;
  IntegratorStats stats;
};

/// One trajectory per k; failures are recorded per point, never thrown.
/// k_grid must be positive and non-decreasing.
std::vector<GridPoint> evolve_grid(std::span<const double> k_grid, const DynamicsConfig& config);

RhsForm parse_rhs_form(const std::string& text);
CouplingPower parse_coupling_power(const std::string& text);
AngleTreatment parse_angle_treatment(const std::string& text);
IntegratorKind parse_integrator(const std::string& text);
EvalPoint parse_eval_point(const std::string& text);

std::string to_string(RhsForm value);
std::string to_string(CouplingPower value);
std::string to_string(AngleTreatment value);
std::string to_string(IntegratorKind value);
std::string to_string(EvalPoint value);

} // namespace otmss
