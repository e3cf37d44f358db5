#pragma once

// Constant-epsilon quasi-de Sitter background and the coupling coefficients
// mu2 = k / M_P and lambda = M_P sqrt|1 - mu1^2| = |z'/z| that drive the
// Lanczos chain and the squeeze equations.

#include <complex>
#include <cstddef>
#include <vector>

namespace otmss {

struct BackgroundParams {
  double hubble_rate = 1.0e-5; ///< H, constant during inflation (Planck units)
  double epsilon = 0.01;       ///< slow-roll parameter, 0 < epsilon < 1
  double planck_mass = 1.0;    ///< mass unit normalization

  /// Throws DomainError when an invariant is violated.
  void validate() const;
  bool operator==(const BackgroundParams&) const = default;
};

struct CouplingCoefficients {
  double mu2 = 0.0;       ///< dissipative coefficient k / M_P
  double coupling = 0.0;  ///< lambda = |z'/z|
  double mu2_rate = 0.0;  ///< d mu2 / d eta
  double planck_mass = 1.0;

  /// |1 - mu1^2| = (lambda / M_P)^2.
  double closed_strength() const {
    const double s = coupling / planck_mass;
    return s * s;
  }
  /// sqrt|1 - mu1^2| = lambda / M_P.
  double closed_amplitude() const { return coupling / planck_mass; }
};

/// a(eta) = -1 / (H eta).
double scale_factor(double eta, const BackgroundParams& params);

/// z'/z = a'/a = -1/eta for constant epsilon.
double z_rate(double eta, const BackgroundParams& params);

CouplingCoefficients couplings(double eta, double k, const BackgroundParams& params,
                               double mu2_rate = 0.0);

/// Lanczos coefficients of the two-mode Hamiltonian in the |n,n> basis.
///
/// b_n = n |z'/z| (closed part) and c_n = i (2n+1) k (open part). The open
/// coefficients are stored as real magnitudes (2n+1) k, which is exactly
/// c~_n = -i c_n entering the Meixner recursion; the imaginary unit only
/// reappears through c().
struct LanczosChain {
  std::vector<double> b;           ///< b_0 .. b_nmax, b_0 = 0
  std::vector<double> c_magnitude; ///< |c_n| = c~_n

  std::size_t size() const { return b.size(); }
  double c_tilde(std::size_t n) const { return c_magnitude.at(n); }
  std::complex<double> c(std::size_t n) const { return {0.0, c_magnitude.at(n)}; }
};

LanczosChain lanczos_chain(std::size_t n_max, double eta, double k,
                           const BackgroundParams& params);

} // namespace otmss
