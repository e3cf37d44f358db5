// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "otmss/bogoliubov.hpp"
#include "otmss/errors.hpp"
#include "otmss/krylov.hpp"
#include "otmss/pipeline/config.hpp"
#include "otmss/pipeline/outputs.hpp"
#include "otmss/pipeline/sweep.hpp"
#include "otmss/pipeline/verify.hpp"
#include "otmss/spectrum.hpp"

using namespace otmss;
using namespace otmss::pipeline;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0.0 && secs > time_limit) {
    o.passed = false;
    o.detail += "; exceeded time limit";
  }
  if (!o.passed) ++failures;
  std::printf("[%s] %2d %-28s %s (%.3f s", o.passed ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  if (time_limit > 0.0) std::printf(", limit %.0f s", time_limit);
  std::printf(")\n");
  std::fflush(stdout);
}

std::string sci(double v, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// det(x I - L_n) by dense LU with partial pivoting
complex dense_determinant(const TridiagonalLiouvillian& op, std::size_t n, complex x) {
  std::vector<std::vector<complex>> m(n, std::vector<complex>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = (i == j ? x : complex{}) - op(i, j);
  complex det{1.0, 0.0};
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(m[i][c]) > std::abs(m[p][c])) p = i;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    if (m[c][c] == complex{}) return {};
    for (std::size_t i = c + 1; i < n; ++i) {
      const complex f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

} // namespace

int main() {
  std::printf("acceptance suite\n");

  criterion(1, "wronskian-scan", 1.0, [] {
    const auto report = run_sweep(SweepConfig{});
    double worst = report.summary.max_wronskian_residual;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ur(0.0, 5.0), uphi(-std::numbers::pi, std::numbers::pi);
    for (int i = 0; i < 10000; ++i) worst = std::max(worst, coefficients({ur(rng), uphi(rng), 1.0}).wronskian_residual);
    const bool ok = worst < 1e-12 && report.records.size() == 200;
    return Outcome{ok, "max ||alpha|^2-|beta|^2-1| = " + sci(worst) + " over " +
                           std::to_string(report.records.size()) + " sweep records + 1e4 random states"};
  });

  criterion(2, "gamma-identity", 1.0, [] {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ur(0.0, 5.0), uphi(-std::numbers::pi, std::numbers::pi);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const SqueezeState s{ur(rng), uphi(rng), 1.0};
      const auto c = coefficients(s);
      const double closed = gamma_closed_form(s);
      const double pair = static_cast<double>(std::norm(c.alpha - c.beta));
      worst = std::max(worst, std::abs(closed - pair) / std::max(1.0, closed));
      gamma_ratio(s); // throws on mismatch
    }
    return Outcome{worst < 1e-12, "max |closed - |alpha-beta|^2| / max(1, gamma) = " + sci(worst) + " over 1e3 states"};
  });

  criterion(3, "meixner-lanczos", 1.0, [] {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uc(0.1, 3.0);
    std::uniform_real_distribution<double> urad(0.0, 10.0), uang(-std::numbers::pi, std::numbers::pi);
    const LanczosChain ds = lanczos_chain(10, -1.0, 1.0, BackgroundParams{});
    LanczosChain rc;
    for (std::size_t n = 0; n <= 10; ++n) {
      rc.b.push_back(n == 0 ? 0.0 : uc(rng));
      rc.c_magnitude.push_back(uc(rng));
    }
    double worst = 0.0, worst_lu = 0.0;
    for (const LanczosChain* chain : {&ds, static_cast<const LanczosChain*>(&rc)}) {
      for (int t = 0; t < 100; ++t) {
        const complex x = std::polar(urad(rng), uang(rng));
        for (std::size_t n = 1; n <= 10; ++n) {
          const complex p = meixner_poly(n, x, *chain);
          const double scale = std::max(std::abs(p), 1e-300);
          worst = std::max(worst, characteristic_poly_residual(n, x, *chain) / scale);
          const auto op = build_liouvillian(*chain, n);
          worst_lu = std::max(worst_lu, std::abs(p - dense_determinant(op, n, x)) / scale);
        }
      }
    }
    return Outcome{worst < 1e-9 && worst_lu < 1e-9, "max relative residual " + sci(worst) + " vs continuant, " +
                                                      sci(worst_lu) + " vs dense LU (n <= 10, 100 x, two chains)"};
  });

  criterion(4, "otmss-limit", 1.0, [] {
    const double r = 1.0, phi = 0.3;
    const auto t = tmss_amplitudes(r, phi);
    std::vector<double> gaps;
    for (double mu2 : {1e-3, 5e-4, 2.5e-4}) {
      CouplingCoefficients c;
      c.mu2 = mu2;
      c.coupling = 1.0;
      const auto o = otmss_amplitudes(r, phi, c, t.n_max());
      double g = 0.0;
      for (std::size_t n = 0; n <= t.n_max(); ++n) g = std::max(g, std::abs(o.coefficients[n] - t.coefficients[n]));
      gaps.push_back(g);
    }
    const double q1 = gaps[1] / gaps[0], q2 = gaps[2] / gaps[1];
    const bool ok = q1 >= 0.45 && q1 <= 0.55 && q2 >= 0.45 && q2 <= 0.55;
    return Outcome{ok, "successive gap ratios " + sci(q1, 4) + ", " + sci(q2, 4)};
  });

  criterion(5, "tmss-normalization", 1.0, [] {
    double worst = 0.0;
    std::string ns;
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
      const auto a = tmss_amplitudes(r, 0.0);
      worst = std::max(worst, std::abs(a.norm_squared() - 1.0));
      ns += (ns.empty() ? "" : "/") + std::to_string(a.n_max());
    }
    return Outcome{worst < 1e-12, "max |sum|psi_n|^2 - 1| = " + sci(worst) + " (auto n_max " + ns + ")"};
  });

  criterion(6, "integrator-cross-validation", 30.0, [] {
    const auto ks = validation_wavenumbers(20);
    const double gap = dual_integrator_gap(ks, Tolerances{});
    const auto study = rk4_convergence(ks.front(), {0.1, 0.05, 0.025, 0.0125});
    const bool ok = gap <= 1e-6 && study.exponent >= 3.5 && study.exponent <= 4.5;
    return Outcome{ok, "max endpoint gap " + sci(gap) + " over 20 k; RK4 exponent " + sci(study.exponent, 4) +
                           " (validation scenario)"};
  });

  const auto t_sweep = std::chrono::steady_clock::now();
  const auto baseline = run_sweep(SweepConfig{});
  const double sweep_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_sweep).count();

  criterion(7, "figure-1/2-flatness", 0.0, [&] {
    SweepConfig hc;
    hc.coupling_power = CouplingPower::hamiltonian_consistent;
    const auto other = run_sweep(hc);
    const auto& a = baseline.summary;
    const auto& b = other.summary;
    const bool ok = a.failures.empty() && b.failures.empty() && a.r_variation < 0.1 && a.phi_variation < 0.1 &&
                    b.r_variation < 0.1 && b.phi_variation < 0.1;
    return Outcome{ok, "literal: r var " + sci(a.r_variation) + ", phi var " + sci(a.phi_variation) +
                           " (r = " + sci(a.r_max) + "); hamiltonian-consistent: r var " + sci(b.r_variation) +
                           ", phi var " + sci(b.phi_variation) + " (r = " + sci(b.r_max) + ")"};
  });

  criterion(8, "figure-3-occupation", 0.0, [&] {
    const double m = baseline.summary.max_occupation;
    return Outcome{m < 0.1 && baseline.records.size() == 200, "max sinh^2 r = " + sci(m)};
  });

  criterion(9, "figure-4-ratio", 0.0, [&] {
    const double m = baseline.summary.max_gamma_deviation;
    return Outcome{m < 0.05 && baseline.records.size() == 200, "max |gamma - 1| = " + sci(m)};
  });

  criterion(10, "figure-5-spectrum", 10.0, [&] {
    const auto& s = baseline.summary;
    const bool exact = s.pivot_on_grid && s.pivot_power == 2.196e-9 * s.pivot_gamma;
    const double dt = std::abs(s.fitted_tilt - 0.9649);
    const bool ok = exact && s.fit_valid && dt < 0.0042 && sweep_seconds < 10.0;
    return Outcome{ok, std::string("pivot power ") + (exact ? "== " : "!= ") + "2.196e-9 * gamma (" +
                           sci(s.pivot_power, 12) + "); fitted n_s " + sci(s.fitted_tilt, 10) + " (|dn_s| " +
                           sci(dt) + "); sweep " + sci(sweep_seconds) + " s"};
  });

  criterion(11, "unsqueezed-regression", 5.0, [] {
    SweepConfig c;
    c.zero_coupling = true;
    const auto r = run_sweep(c);
    bool ok = r.records.size() == 200;
    for (const auto& rec : r.records) {
      ok = ok && rec.gamma == 1.0 && rec.power_otmss == bd_reference_power(rec.k, c.anchors);
    }
    const double da = std::abs(r.summary.fitted_amplitude / 2.196e-9 - 1.0);
    const double dn = std::abs(r.summary.fitted_tilt - 0.9649);
    ok = ok && da < 1e-12 && dn < 1e-12;
    return Outcome{ok, "gamma == 1 and power == BD at all k; fit |dA_s|/A_s " + sci(da) + ", |dn_s| " + sci(dn)};
  });

  criterion(12, "determinism", 0.0, [] {
    const auto base = std::filesystem::temp_directory_path() / "otmss_acceptance";
    std::filesystem::remove_all(base);
    write_outputs(run_sweep(SweepConfig{}), base / "a");
    write_outputs(run_sweep(SweepConfig{}), base / "b");
    const auto a = slurp(base / "a" / "records.csv");
    const auto b = slurp(base / "b" / "records.csv");
    std::filesystem::remove_all(base);
    return Outcome{!a.empty() && a == b, "records.csv " + std::to_string(a.size()) + " bytes, " +
                                             (a == b ? "byte-identical" : "different")};
  });

  std::printf("\n[INFO] initial-condition sensitivity (default sweep, 40 k points)\n");
  for (auto power : {CouplingPower::literal, CouplingPower::hamiltonian_consistent}) {
    for (double r0 : {1e-8, 1e-6, 1e-4}) {
      for (double phi0 : {0.0, std::numbers::pi / 4.0, 1.2}) {
        SweepConfig c;
        c.k_points = 40;
        c.coupling_power = power;
        c.init_r = r0;
        c.init_phi = phi0;
        const auto rep = run_sweep(c);
        const auto& s = rep.summary;
        std::printf("[INFO]   %-22s r0=%.0e phi0=%.3f: failures %zu, r_end %.6e, max|gamma-1| %.3e, r var %.2e, "
                    "n_s %.6f\n",
                    to_string(power).c_str(), r0, phi0, s.failures.size(), s.r_max, s.max_gamma_deviation,
                    s.r_variation, s.fitted_tilt);
      }
    }
  }

  std::printf("\n%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
