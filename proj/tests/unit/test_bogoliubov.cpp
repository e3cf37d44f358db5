#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "otmss/bogoliubov.hpp"
#include "otmss/errors.hpp"
#include "otmss/spectrum.hpp"

using namespace otmss;

TEST_SUITE("bogoliubov") {

TEST_CASE("Bunch-Davies mode") {
  CHECK(std::norm(bd_mode(-1.0, 1.0)) == doctest::Approx(1.0));
  CHECK(std::norm(bd_mode(-0.5, 2.0)) == doctest::Approx(0.5));
  CHECK(std::norm(bd_mode(-0.1, 1.0)) == doctest::Approx(50.5));
  CHECK(std::norm(bd_mode(-1e6, 3.0)) == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  const complex v = bd_mode(-2.0, 0.7);
  const complex expect = std::exp(complex(0.0, 1.4)) / std::sqrt(1.4) * complex(1.0, 1.0 / 1.4);
  CHECK(std::abs(v - expect) < 1e-15);
  CHECK_THROWS_AS(bd_mode(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(bd_mode(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(bd_mode(-1.0, 0.0), DomainError);
}

TEST_CASE("coefficients") {
  auto c = coefficients({0.0, 1.7, 1.0});
  CHECK(c.alpha == ext_complex(1.0L, 0.0L));
  CHECK(std::abs(c.beta) == 0.0L);

  c = coefficients({std::log(2.0), 0.0, 1.0});
  CHECK(static_cast<double>(c.alpha.real()) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(static_cast<double>(c.beta.real()) == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(c.wronskian_residual < 1e-15);

  c = coefficients({1.0, std::numbers::pi / 2.0, 1.0});
  CHECK(std::abs(static_cast<double>(c.beta.real())) < 1e-15);
  CHECK(static_cast<double>(c.beta.imag()) == doctest::Approx(1.1752011936438014569).epsilon(1e-15));
  CHECK(c.alpha.real() >= 1.0L);

  CHECK_THROWS_AS(coefficients({-1e-3, 0.0, 1.0}), DomainError);
}

TEST_CASE("Wronskian over random states") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ur(0.0, 5.0), uphi(-4.0, 4.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const SqueezeState s{ur(rng), uphi(rng), 1.0};
    const auto c = coefficients(s);
    worst = std::max(worst, c.wronskian_residual);
    CHECK(c.alpha.real() >= 1.0L);
    CHECK(std::abs(vacuum_kernel(s)) < 1.0);
    CHECK(occupation(s) == doctest::Approx(static_cast<double>(std::norm(c.beta))).epsilon(1e-13));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("mode function superposition") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ueta(-50.0, -1e-3), uk(1e-3, 10.0);
  for (int i = 0; i < 50; ++i) {
    const double eta = ueta(rng);
    const double k = uk(rng);
    CHECK(mode_function({0.0, 0.3, 1.0}, eta, k) == bd_mode(eta, k));
  }
  const SqueezeState s{0.3, 0.7, 0.01};
  const double ratio = std::norm(mode_function(s, -0.01, 1.0)) / std::norm(bd_mode(-0.01, 1.0));
  CHECK(ratio == doctest::Approx(gamma_ratio(s)).epsilon(1e-4));

  const auto bd = sample_bd(-0.2, 1.5);
  CHECK(bd.source == ModeSource::bunch_davies);
  CHECK(bd.value == bd_mode(-0.2, 1.5));
  const auto sq = sample_otmss(s, -0.2, 1.5);
  CHECK(sq.source == ModeSource::otmss);
  CHECK(sq.value == mode_function(s, -0.2, 1.5));
}

TEST_CASE("occupation and kernel") {
  CHECK(occupation({0.0, 0.0, 1.0}) == 0.0);
  CHECK(occupation({std::log(2.0), 1.0, 1.0}) == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(vacuum_kernel({0.0, 2.0, 1.0}) == complex(-0.0, -0.0));
  const complex k = vacuum_kernel({std::log(2.0), 0.0, 1.0});
  CHECK(k.real() == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(std::abs(vacuum_kernel({5.0, 0.3, 1.0})) == doctest::Approx(std::tanh(5.0)));
  CHECK(std::abs(vacuum_kernel({5.0, 0.3, 1.0})) < 1.0);

  const SqueezeState s{0.9, 0.4, 1.0};
  const auto c = coefficients(s);
  const ext_complex via = std::conj(c.beta) / std::conj(c.alpha);
  const complex kk = vacuum_kernel(s);
  CHECK(std::abs(kk.real() - static_cast<double>(via.real())) < 1e-15);
  CHECK(std::abs(kk.imag() - static_cast<double>(via.imag())) < 1e-15);
}

TEST_CASE("pair amplitudes of the constructed vacuum") {
  const SqueezeState s{0.8, 0.6, 1.0};
  const auto a = pair_amplitudes(s, 10);
  CHECK(a.coefficients[0].real() == doctest::Approx(1.0 / std::cosh(0.8)));
  CHECK(std::abs(a.ratio + vacuum_kernel(s)) < 1e-16);
  CHECK(std::abs(pair_amplitudes(s).norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("flip hook changes the sign of beta only") {
  const SqueezeState s{1.2, 0.5, 1.0};
  BogoliubovOptions flip;
  flip.flip_beta_sign = true;
  const auto a = coefficients(s);
  const auto b = coefficients(s, flip);
  CHECK(b.beta == -a.beta);
  CHECK(b.wronskian_residual == a.wronskian_residual);
}

}
