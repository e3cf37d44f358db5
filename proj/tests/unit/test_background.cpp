#include <doctest.h>

#include "otmss/background.hpp"
#include "otmss/errors.hpp"

using namespace otmss;

TEST_SUITE("background") {

TEST_CASE("scale factor is -1/(H eta)") {
  BackgroundParams p;
  const double h = p.hubble_rate;
  CHECK(scale_factor(-1.0 / h, p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(scale_factor(-0.5 / h, p) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(scale_factor(-10.0 / h, p) == doctest::Approx(0.1).epsilon(1e-15));
  for (double eta : {-1e3, -2.5, -1e-3, -7e-9}) {
    CHECK(scale_factor(eta, p) * h * (-eta) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(scale_factor(-0.1, p) > scale_factor(-0.2, p));
}

TEST_CASE("z rate") {
  BackgroundParams p;
  CHECK(z_rate(-1.0, p) == 1.0);
  CHECK(z_rate(-2.0, p) == 0.5);
  CHECK(z_rate(-0.1, p) == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("non-negative conformal time is rejected") {
  BackgroundParams p;
  CHECK_THROWS_AS(scale_factor(0.0, p), DomainError);
  CHECK_THROWS_AS(scale_factor(1.0, p), DomainError);
  CHECK_THROWS_AS(z_rate(0.0, p), DomainError);
  CHECK_THROWS_AS(couplings(0.5, 1.0, p), DomainError);
  CHECK_THROWS_AS(couplings(-1.0, 0.0, p), DomainError);
}

TEST_CASE("couplings") {
  BackgroundParams p;
  const double k = 0.37;
  auto c = couplings(-1.0 / k, k, p);
  CHECK(c.mu2 == doctest::Approx(k));
  CHECK(c.coupling == doctest::Approx(k));
  CHECK(c.mu2_rate == 0.0);

  c = couplings(-100.0, 1.0, p);
  CHECK(c.coupling == doctest::Approx(0.01));
  CHECK(c.mu2 == 1.0);
  c = couplings(-0.01, 1.0, p);
  CHECK(c.coupling == doctest::Approx(100.0));
  CHECK(c.closed_amplitude() == doctest::Approx(100.0));
  CHECK(c.closed_strength() == doctest::Approx(1e4));

  // mu2 M_P equals the coupling at horizon crossing
  for (double kk : {1e-3, 0.2, 5.0, 64.0}) {
    BackgroundParams q;
    q.planck_mass = 2.0;
    const auto cc = couplings(-1.0 / kk, kk, q);
    CHECK(cc.coupling == doctest::Approx(cc.mu2 * q.planck_mass).epsilon(1e-15));
    CHECK(cc.coupling * (1.0 / kk) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("background validation") {
  BackgroundParams p;
  CHECK_NOTHROW(p.validate());
  p.epsilon = 1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.hubble_rate = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.planck_mass = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("Lanczos chain coefficients") {
  BackgroundParams p;
  auto chain = lanczos_chain(1, -1.0, 1.0, p);
  REQUIRE(chain.size() == 2);
  CHECK(chain.b[1] == 1.0);
  CHECK(chain.c_tilde(1) == 3.0);
  CHECK(chain.b[0] == 0.0);
  CHECK(chain.c_tilde(0) == 1.0);
  CHECK(chain.c(1) == std::complex<double>(0.0, 3.0));

  chain = lanczos_chain(5, -2.0, 0.5, p);
  CHECK(chain.b[5] == 2.5);
  CHECK(chain.c_tilde(5) == 5.5);

  chain = lanczos_chain(0, -3.0, 0.7, p);
  CHECK(chain.size() == 1);
  CHECK(chain.c_tilde(0) == doctest::Approx(0.7));

  chain = lanczos_chain(40, -0.3, 1.3, p);
  for (std::size_t n = 1; n <= 40; ++n) {
    CHECK(chain.b[n] / chain.b[1] == doctest::Approx(static_cast<double>(n)).epsilon(1e-15));
    if (n < 40) {
      CHECK(chain.c_tilde(n + 1) - chain.c_tilde(n) == doctest::Approx(2.6).epsilon(1e-13));
    }
  }
}

}
