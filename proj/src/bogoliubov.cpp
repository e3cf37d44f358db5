#include "otmss/bogoliubov.hpp"

#include <cmath>

#include "otmss/errors.hpp"

namespace otmss {

namespace {

void require_nonnegative_r(double r, const char* where) {
  if (!(r >= 0.0)) throw DomainError(std::string(where) + ": squeeze amplitude must be >= 0");
}

} // namespace

complex bd_mode(double eta, double k) {
  if (!(eta < 0.0)) throw DomainError("bd_mode: conformal time must be negative");
  if (!(k > 0.0)) throw DomainError("bd_mode: wavenumber must be positive");
  const double keta = k * eta;
  return std::polar(1.0 / std::sqrt(2.0 * k), -keta) * complex(1.0, -1.0 / keta);
}

BogoliubovPair coefficients(const SqueezeState& state, BogoliubovOptions options) {
  require_nonnegative_r(state.r, "coefficients");
  const ext_real r = state.r;
  const ext_real phi = state.phi;
  BogoliubovPair out;
  out.alpha = {std::cosh(r), 0.0L};
  out.beta = -std::polar(std::sinh(r), -phi);
  if (options.flip_beta_sign) out.beta = -out.beta;
  const ext_real w = std::norm(out.alpha) - std::norm(out.beta) - 1.0L;
  out.wronskian_residual = static_cast<double>(std::abs(w));
  return out;
}

complex mode_function(const SqueezeState& state, double eta, double k, BogoliubovOptions options) {
  const complex v = bd_mode(eta, k);
  const auto c = coefficients(state, options);
  const ext_complex ve(v.real(), v.imag());
  const ext_complex out = c.alpha * ve + c.beta * std::conj(ve);
  return {static_cast<double>(out.real()), static_cast<double>(out.imag())};
}

ModeSample sample_bd(double eta, double k) {
  return {eta, k, bd_mode(eta, k), ModeSource::bunch_davies};
}

ModeSample sample_otmss(const SqueezeState& state, double eta, double k) {
  return {eta, k, mode_function(state, eta, k), ModeSource::otmss};
}

double occupation(const SqueezeState& state) {
  require_nonnegative_r(state.r, "occupation");
  const double s = std::sinh(state.r);
  return s * s;
}

complex vacuum_kernel(const SqueezeState& state) {
  require_nonnegative_r(state.r, "vacuum_kernel");
  return -std::polar(std::tanh(state.r), state.phi);
}

OtmssAmplitudes pair_amplitudes(const SqueezeState& state, std::optional<std::size_t> n_max) {
  require_nonnegative_r(state.r, "pair_amplitudes");
  const complex psi0 = 1.0 / std::cosh(state.r);
  return geometric_amplitudes(psi0, -vacuum_kernel(state), n_max, false);
}

} // namespace otmss
