#pragma once

// Bogoliubov map from (r, phi) to the coefficients relating the squeezed
// and Bunch-Davies mode bases, with the derived observables.

#include <complex>

#include "otmss/krylov.hpp"
#include "otmss/squeeze_dynamics.hpp"

namespace otmss {

/// Extended precision for the coefficients: cosh^2 r - sinh^2 r loses
/// roughly e^{2r} ulps in binary64, which breaks the 1e-12 Wronskian budget
/// already at r ~ 5.
using ext_real = long double;
using ext_complex = std::complex<ext_real>;

struct BogoliubovPair {
  ext_complex alpha{1.0L, 0.0L};
  ext_complex beta{0.0L, 0.0L};
  double wronskian_residual = 0.0; ///< | |alpha|^2 - |beta|^2 - 1 |
};

struct BogoliubovOptions {
  /// Mutation hook: beta -> -beta.
  bool flip_beta_sign = false;
};

/// e^{-ik eta} / sqrt(2k) (1 - i / (k eta)). Throws DomainError for eta >= 0 or k <= 0.
complex bd_mode(double eta, double k);

/// alpha = cosh r, beta = -e^{-i phi} sinh r. Throws DomainError for r < 0.
BogoliubovPair coefficients(const SqueezeState& state, BogoliubovOptions options = {});

/// alpha v_BD + beta conj(v_BD).
complex mode_function(const SqueezeState& state, double eta, double k,
                      BogoliubovOptions options = {});

enum class ModeSource { bunch_davies, otmss };

struct ModeSample {
  double eta = 0.0;
  double k = 0.0;
  complex value{0.0, 0.0};
  ModeSource source = ModeSource::bunch_davies;
};

ModeSample sample_bd(double eta, double k);
ModeSample sample_otmss(const SqueezeState& state, double eta, double k);

/// sinh^2 r.
double occupation(const SqueezeState& state);

/// conj(beta) / conj(alpha) = -e^{i phi} tanh r.
complex vacuum_kernel(const SqueezeState& state);

/// Pair amplitudes of the constructed vacuum over |n,n>:
/// psi_n = sech r (e^{i phi} tanh r)^n.
OtmssAmplitudes pair_amplitudes(const SqueezeState& state,
                                std::optional<std::size_t> n_max = std::nullopt);

} // namespace otmss
