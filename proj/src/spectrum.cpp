#include "otmss/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "otmss/errors.hpp"

namespace otmss {

void PlanckAnchors::validate() const {
  if (!(amplitude > 0.0)) throw DomainError("anchors: amplitude must be positive");
  if (!(pivot > 0.0)) throw DomainError("anchors: pivot must be positive");
  if (!std::isfinite(tilt)) throw DomainError("anchors: tilt must be finite");
}

double gamma_closed_form(const SqueezeState& state) {
  if (!(state.r >= 0.0)) throw DomainError("gamma: squeeze amplitude must be >= 0");
  // e^{-2r} + 2 sinh 2r cos^2(phi/2): both terms non-negative, so no
  // cancellation near phi = pi where gamma ~ e^{-2r}
  const double c = std::cos(0.5 * state.phi);
  return std::exp(-2.0 * state.r) + 2.0 * std::sinh(2.0 * state.r) * c * c;
}

double gamma_ratio(const SqueezeState& state, BogoliubovOptions options) {
  const double closed = gamma_closed_form(state);
  const auto c = coefficients(state, options);
  const double via_pair = static_cast<double>(std::norm(c.alpha - c.beta));
  if (!(std::abs(closed - via_pair) <= 1.0e-12 * std::max(1.0, closed))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "gamma_ratio: closed form " << closed << " disagrees with |alpha - beta|^2 = "
        << via_pair << " at r = " << state.r << ", phi = " << state.phi;
    throw ConsistencyError(msg.str());
  }
  return closed;
}

double bd_reference_power(double k, const PlanckAnchors& anchors) {
  if (!(k > 0.0)) throw DomainError("bd_reference_power: wavenumber must be positive");
  if (anchors.tilt == 1.0) return anchors.amplitude;
  return anchors.amplitude * std::pow(k / anchors.pivot, anchors.tilt - 1.0);
}

double mode_power(double eta, double k, const SqueezeState& state, BogoliubovOptions options) {
  const double v2 = std::norm(bd_mode(eta, k));
  return k * k * k / (2.0 * std::numbers::pi * std::numbers::pi) * v2 * gamma_ratio(state, options);
}

namespace {

double first_principles_bd(double k_internal, const BackgroundParams& params, double eta) {
  const double a = scale_factor(eta, params);
  const double mp = params.planck_mass;
  return mode_power(eta, k_internal, SqueezeState{}) / (2.0 * params.epsilon * a * a * mp * mp);
}

double reference(double k, const BackgroundParams& params, double eta,
                 const SpectrumSettings& settings) {
  if (settings.mode == SpectrumMode::anchored) return bd_reference_power(k, settings.anchors);
  return first_principles_bd(k * settings.unit_scale, params, eta);
}

} // namespace

double curvature_power(double k, const SqueezeState& state, const BackgroundParams& params,
                       double eta, const SpectrumSettings& settings) {
  return reference(k, params, eta, settings) * gamma_ratio(state, settings.bogoliubov);
}

SpectrumRecord make_record(double k, const SqueezeState& state, const BackgroundParams& params,
                           double eta, const SpectrumSettings& settings) {
  SpectrumRecord rec;
  rec.k = k;
  rec.r = state.r;
  rec.phi = state.wrapped_phi();
  rec.occupation = occupation(state);
  rec.gamma = gamma_ratio(state, settings.bogoliubov);
  rec.wronskian_residual = coefficients(state, settings.bogoliubov).wronskian_residual;
  rec.power_bd = reference(k, params, eta, settings);
  rec.power_otmss = rec.power_bd * rec.gamma;
  return rec;
}

TiltFit fit_tilt(std::span<const SpectrumRecord> records, double pivot) {
  if (records.size() < 3) throw std::invalid_argument("fit_tilt: need at least 3 records");
  if (!(pivot > 0.0)) throw std::invalid_argument("fit_tilt: pivot must be positive");
  const auto [kmin, kmax] = std::minmax_element(
      records.begin(), records.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
  if (kmin->k == kmax->k) throw std::invalid_argument("fit_tilt: degenerate k grid (all k equal)");
  const auto n = static_cast<double>(records.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& rec : records) {
    if (!(rec.k > 0.0 && rec.power_otmss > 0.0)) {
      throw std::invalid_argument("fit_tilt: k and power must be positive");
    }
    mx += std::log(rec.k / pivot);
    my += std::log(rec.power_otmss);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& rec : records) {
    const double dx = std::log(rec.k / pivot) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(rec.power_otmss) - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_tilt: degenerate k grid (all k equal)");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (const auto& rec : records) {
    const double res = std::log(rec.power_otmss) - (intercept + slope * std::log(rec.k / pivot));
    ss += res * res;
  }
  return {std::exp(intercept), 1.0 + slope, std::sqrt(ss / n)};
}

SpectrumMode parse_spectrum_mode(const std::string& text) {
  if (text == "anchored") return SpectrumMode::anchored;
  if (text == "first-principles") return SpectrumMode::first_principles;
  throw std::invalid_argument("unknown spectrum mode '" + text +
                              "' (expected anchored|first-principles)");
}

std::string to_string(SpectrumMode mode) {
  return mode == SpectrumMode::anchored ? "anchored" : "first-principles";
}

} // namespace otmss
