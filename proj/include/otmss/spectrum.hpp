#pragma once

// Power-spectrum ratio, mode and curvature spectra, the observational
// reference power law, and a log-log tilt fit.

#include <span>
#include <string>

#include "otmss/background.hpp"
#include "otmss/bogoliubov.hpp"
#include "otmss/squeeze_dynamics.hpp"

namespace otmss {

struct PlanckAnchors {
  double amplitude = 2.196e-9;
  double tilt = 0.9649;
  double pivot = 0.05; ///< Mpc^-1
  double amplitude_sigma = 0.060e-9;
  double tilt_sigma = 0.0042;

  void validate() const;
  bool operator==(const PlanckAnchors&) const = default;
};

enum class SpectrumMode { anchored, first_principles };

struct SpectrumSettings {
  PlanckAnchors anchors;
  SpectrumMode mode = SpectrumMode::anchored;
  double unit_scale = 1.0; ///< internal k per Mpc^-1
  BogoliubovOptions bogoliubov;
};

struct SpectrumRecord {
  double k = 0.0; ///< Mpc^-1 label
  double r = 0.0;
  double phi = 0.0; ///< wrapped to (-pi, pi]
  double occupation = 0.0;
  double gamma = 1.0;
  double power_bd = 0.0;
  double power_otmss = 0.0;
  double wronskian_residual = 0.0;
};

/// cosh 2r + sinh 2r cos phi.
double gamma_closed_form(const SqueezeState& state);

/// Closed form, cross-checked against |alpha - beta|^2 to 1e-12 max(1, gamma).
/// Throws ConsistencyError on mismatch.
double gamma_ratio(const SqueezeState& state, BogoliubovOptions options = {});

/// A_s (k / k_*)^{n_s - 1}.
double bd_reference_power(double k, const PlanckAnchors& anchors);

/// (k^3 / 2 pi^2) |v_BD(eta, k)|^2 gamma.
double mode_power(double eta, double k, const SqueezeState& state,
                  BogoliubovOptions options = {});

/// Curvature spectrum for label wavenumber k (Mpc^-1) at internal conformal
/// time eta. Anchored: reference power law times gamma. First principles:
/// mode power / (2 eps a^2 M_P^2) at internal k = k * unit_scale.
double curvature_power(double k, const SqueezeState& state, const BackgroundParams& params,
                       double eta, const SpectrumSettings& settings);

/// Assembles one record; power_otmss is stored as power_bd * gamma.
SpectrumRecord make_record(double k, const SqueezeState& state, const BackgroundParams& params,
                           double eta, const SpectrumSettings& settings);

struct TiltFit {
  double amplitude = 0.0;
  double tilt = 0.0;
  double rms_residual = 0.0; ///< in ln(power)
};

/// OLS of ln(power_otmss) on ln(k / pivot). Needs >= 3 records with at least
/// two distinct k; throws std::invalid_argument otherwise.
TiltFit fit_tilt(std::span<const SpectrumRecord> records, double pivot);

SpectrumMode parse_spectrum_mode(const std::string& text);
std::string to_string(SpectrumMode mode);

} // namespace otmss
