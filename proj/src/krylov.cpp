#include "otmss/krylov.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "otmss/errors.hpp"

namespace otmss {

complex TridiagonalLiouvillian::operator()(std::size_t row, std::size_t col) const {
  if (row >= dimension() || col >= dimension()) {
    throw std::out_of_range("TridiagonalLiouvillian: index outside the Krylov space");
  }
  if (row == col) return diagonal[row];
  if (row + 1 == col) return offdiagonal[row];
  if (col + 1 == row) return offdiagonal[col];
  return {0.0, 0.0};
}

std::vector<complex> TridiagonalLiouvillian::apply(std::span<const complex> v) const {
  const std::size_t n = dimension();
  if (v.size() != n) throw std::invalid_argument("TridiagonalLiouvillian::apply: size mismatch");
  std::vector<complex> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    complex acc = diagonal[i] * v[i];
    if (i > 0) acc += offdiagonal[i - 1] * v[i - 1];
    if (i + 1 < n) acc += offdiagonal[i] * v[i + 1];
    out[i] = acc;
  }
  return out;
}

TridiagonalLiouvillian build_liouvillian(const LanczosChain& chain, std::size_t dimension) {
  if (dimension == 0) throw std::invalid_argument("build_liouvillian: empty Krylov space");
  if (chain.size() < dimension || chain.c_magnitude.size() < dimension) {
    throw std::invalid_argument("build_liouvillian: chain shorter than requested dimension");
  }
  TridiagonalLiouvillian op;
  op.diagonal.resize(dimension);
  op.offdiagonal.resize(dimension - 1);
  for (std::size_t n = 0; n < dimension; ++n) {
    // -i * c_n with c_n = i |c_n|
    op.diagonal[n] = complex(0.0, -1.0) * chain.c(n);
  }
  for (std::size_t n = 1; n < dimension; ++n) op.offdiagonal[n - 1] = chain.b[n];
  return op;
}

complex meixner_poly(std::size_t n, complex x, const LanczosChain& chain) {
  if (n == 0) return {1.0, 0.0};
  if (chain.c_magnitude.size() < n || chain.b.size() < n) {
    throw std::invalid_argument("meixner_poly: chain too short for requested degree");
  }
  complex prev{1.0, 0.0};
  complex cur = x - chain.c_tilde(0);
  for (std::size_t m = 1; m < n; ++m) {
    const double bm = chain.b[m];
    const complex next = (x - chain.c_tilde(m)) * cur - bm * bm * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

complex leading_determinant(const TridiagonalLiouvillian& op, std::size_t n, complex x) {
  if (n > op.dimension()) throw std::invalid_argument("leading_determinant: block exceeds matrix");
  if (n == 0) return {1.0, 0.0};
  complex f_second{1.0, 0.0};
  complex f_first = x - op(0, 0);
  for (std::size_t m = 1; m < n; ++m) {
    const complex f = (x - op(m, m)) * f_first - op(m, m - 1) * op(m - 1, m) * f_second;
    f_second = f_first;
    f_first = f;
  }
  return f_first;
}

double characteristic_poly_residual(std::size_t n, complex x, const LanczosChain& chain) {
  const auto op = build_liouvillian(chain, n == 0 ? 1 : n);
  return std::abs(meixner_poly(n, x, chain) - leading_determinant(op, n, x));
}

double OtmssAmplitudes::norm_squared() const {
  double sum = 0.0;
  double carry = 0.0;
  for (const auto& c : coefficients) {
    const double term = std::norm(c);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      carry += (sum - t) + term;
    } else {
      carry += (term - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

std::size_t auto_truncation(double psi0_abs_sq, double ratio_abs, double tolerance) {
  if (!(ratio_abs < 1.0)) throw DivergenceError("auto_truncation: ratio magnitude must be < 1");
  if (ratio_abs == 0.0 || psi0_abs_sq == 0.0) return 0;
  const double rho2 = ratio_abs * ratio_abs;
  const double prefactor = psi0_abs_sq / (1.0 - rho2);
  auto tail = [&](std::size_t n) {
    return prefactor * std::pow(rho2, static_cast<double>(n + 1));
  };
  // log estimate, then settle on the exact smallest n
  const double estimate = std::log(tolerance / prefactor) / std::log(rho2) - 1.0;
  std::size_t n = estimate > 0.0 ? static_cast<std::size_t>(estimate) : 0;
  while (n > 0 && tail(n - 1) < tolerance) --n;
  while (!(tail(n) < tolerance)) ++n;
  return n;
}

OtmssAmplitudes geometric_amplitudes(complex psi0, complex ratio,
                                     std::optional<std::size_t> n_max, bool normalize) {
  const double rho = std::abs(ratio);
  if (!(rho < 1.0)) throw DivergenceError("geometric_amplitudes: series ratio must satisfy |ratio| < 1");
  const double psi0_sq = std::norm(psi0);
  const std::size_t n_top = n_max ? *n_max : auto_truncation(psi0_sq, rho);

  OtmssAmplitudes out;
  out.ratio = ratio;
  out.coefficients.resize(n_top + 1);
  out.coefficients[0] = psi0;
  // magnitude and phase separately: repeated multiplication drifts by ~n ulp,
  // which is visible in the norm at n ~ 1e4
  const double theta = std::arg(ratio);
  for (std::size_t n = 1; n <= n_top; ++n) {
    const auto nd = static_cast<double>(n);
    out.coefficients[n] = psi0 * std::polar(std::pow(rho, nd), nd * theta);
  }
  const double rho2 = rho * rho;
  out.truncation_tail_bound =
      rho == 0.0 ? 0.0 : psi0_sq * std::pow(rho2, static_cast<double>(n_top + 1)) / (1.0 - rho2);

  if (normalize) {
    const double norm = std::sqrt(out.norm_squared());
    if (norm > 0.0) {
      for (auto& c : out.coefficients) c /= norm;
    }
    out.normalized = true;
  }
  return out;
}

OtmssAmplitudes otmss_amplitudes(double r, double phi, const CouplingCoefficients& couplings,
                                 std::optional<std::size_t> n_max, bool normalize) {
  if (!(r >= 0.0)) throw DomainError("otmss_amplitudes: squeeze amplitude must be >= 0");
  const double t = std::tanh(r);
  const double damping = 1.0 + couplings.mu2 * t;
  const double rho = couplings.closed_amplitude() * t / damping;
  if (!(rho < 1.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "otmss_amplitudes: pair series diverges (ratio " << rho << " >= 1) for r = " << r
        << ", |1-mu1^2| = " << couplings.closed_strength() << ", mu2 = " << couplings.mu2;
    throw DivergenceError(msg.str());
  }
  const complex psi0 = 1.0 / (std::cosh(r) * damping);
  const complex ratio = couplings.closed_amplitude() * (-std::polar(1.0, 2.0 * phi) * t) / damping;
  return geometric_amplitudes(psi0, ratio, n_max, normalize);
}

OtmssAmplitudes tmss_amplitudes(double r, double phi, std::optional<std::size_t> n_max) {
  if (!(r >= 0.0)) throw DomainError("tmss_amplitudes: squeeze amplitude must be >= 0");
  // sech r from the rounded tanh r, so that psi0^2 / (1 - rho^2) = 1 holds for
  // the stored ratio; 1 - t is exact and the total stays at 1 - rho^{2(n+1)}
  const double t = std::tanh(r);
  const complex psi0 = std::sqrt((1.0 - t) * (1.0 + t));
  const complex ratio = -std::polar(t, 2.0 * phi);
  return geometric_amplitudes(psi0, ratio, n_max, false);
}

} // namespace otmss
