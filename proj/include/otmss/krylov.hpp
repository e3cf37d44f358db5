#pragma once

// Generalized Lanczos recursion in matrix form, the second-kind Meixner
// polynomials built from the same coefficients, and the pair-amplitude
// series of the open two-mode squeezed state over the Krylov basis |n,n>.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "otmss/background.hpp"

namespace otmss {

using complex = std::complex<double>;

/// Tridiagonal Liouvillian L with L e_n = c~_n e_n + b_{n+1} e_{n+1} + b_n e_{n-1}.
struct TridiagonalLiouvillian {
  std::vector<complex> diagonal;  ///< c~_0 .. c~_{N-1}, c~_n = -i c_n
  std::vector<double> offdiagonal; ///< b_1 .. b_{N-1}, symmetric placement

  std::size_t dimension() const { return diagonal.size(); }

  /// Matrix element (row, col); zero outside the band.
  complex operator()(std::size_t row, std::size_t col) const;

  /// y = L v.
  std::vector<complex> apply(std::span<const complex> v) const;
};

/// Throws std::invalid_argument for N = 0 or a chain shorter than N.
TridiagonalLiouvillian build_liouvillian(const LanczosChain& chain, std::size_t dimension);

/// P_n(x) from P_{n+1} = (x - c~_n) P_n - b_n^2 P_{n-1}, P_0 = 1, P_1 = x - c~_0.
complex meixner_poly(std::size_t n, complex x, const LanczosChain& chain);

/// det(x I - L_n) of the leading n x n block, by the continuant expansion
/// over the stored matrix entries.
complex leading_determinant(const TridiagonalLiouvillian& op, std::size_t n, complex x);

/// |P_n(x) - det(x I - L_n)|.
double characteristic_poly_residual(std::size_t n, complex x, const LanczosChain& chain);

struct OtmssAmplitudes {
  std::vector<complex> coefficients;
  double truncation_tail_bound = 0.0; ///< sum_{n > n_max} |psi_n|^2 (pre-normalization)
  bool normalized = false;
  complex ratio{0.0, 0.0};            ///< psi_{n+1} / psi_n

  std::size_t n_max() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
  /// sum |psi_n|^2 over the stored coefficients (compensated sum).
  double norm_squared() const;
};

/// Default truncation target for the automatic n_max.
inline constexpr double kDefaultTailTolerance = 1.0e-12;

/// Smallest n with |psi_0|^2 rho^{2(n+1)} / (1 - rho^2) < tolerance.
std::size_t auto_truncation(double psi0_abs_sq, double ratio_abs,
                            double tolerance = kDefaultTailTolerance);

/// psi_n = psi0 * ratio^n, n = 0..n_max (n_max chosen automatically when empty).
OtmssAmplitudes geometric_amplitudes(complex psi0, complex ratio,
                                     std::optional<std::size_t> n_max, bool normalize);

/// Open two-mode squeezed state coefficients
///   psi_n = sech r / (1 + mu2 tanh r) * [sqrt|1-mu1^2| (-e^{2i phi} tanh r) / (1 + mu2 tanh r)]^n.
/// Throws DivergenceError when |ratio| >= 1.
OtmssAmplitudes otmss_amplitudes(double r, double phi, const CouplingCoefficients& couplings,
                                 std::optional<std::size_t> n_max = std::nullopt,
                                 bool normalize = false);

/// Closed-system limit psi_n = (-1)^n e^{2 i n phi} tanh^n r / cosh r.
OtmssAmplitudes tmss_amplitudes(double r, double phi,
                                std::optional<std::size_t> n_max = std::nullopt);

} // namespace otmss
