#include "otmss/background.hpp"

#include <cmath>
#include <string>

#include "otmss/errors.hpp"

namespace otmss {

namespace {

void require_negative_eta(double eta, const char* where) {
  if (!(eta < 0.0)) {
    throw DomainError(std::string(where) + ": conformal time must be negative (got eta = " +
                      std::to_string(eta) + "); post-inflation is not modelled");
  }
}

} // namespace

void BackgroundParams::validate() const {
  if (!(hubble_rate > 0.0)) throw DomainError("hubble_rate must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(planck_mass > 0.0)) throw DomainError("planck_mass must be positive");
}

double scale_factor(double eta, const BackgroundParams& params) {
  require_negative_eta(eta, "scale_factor");
  return -1.0 / (params.hubble_rate * eta);
}

double z_rate(double eta, const BackgroundParams&) {
  require_negative_eta(eta, "z_rate");
  return -1.0 / eta;
}

CouplingCoefficients couplings(double eta, double k, const BackgroundParams& params,
                               double mu2_rate) {
  if (!(k > 0.0)) throw DomainError("couplings: wavenumber must be positive");
  CouplingCoefficients out;
  out.mu2 = k / params.planck_mass;
  out.coupling = std::abs(z_rate(eta, params));
  out.mu2_rate = mu2_rate;
  out.planck_mass = params.planck_mass;
  return out;
}

LanczosChain lanczos_chain(std::size_t n_max, double eta, double k,
                           const BackgroundParams& params) {
  const double rate = std::abs(z_rate(eta, params));
  LanczosChain chain;
  chain.b.resize(n_max + 1);
  chain.c_magnitude.resize(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const auto nd = static_cast<double>(n);
    chain.b[n] = nd * rate;
    chain.c_magnitude[n] = (2.0 * nd + 1.0) * k;
  }
  return chain;
}

} // namespace otmss
