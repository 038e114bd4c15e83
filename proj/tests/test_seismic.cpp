#include <cmath>

#include "doctest.h"
#include "fracwave/errors.hpp"
#include "fracwave/seismic.hpp"
#include "fracwave/stepping.hpp"

using namespace fwave;

TEST_SUITE("seismic") {

TEST_CASE("coefficient fields") {
  Grid g = build_grid({{0.0, 2.0}}, {32});
  SUBCASE("classical limit gamma = 0") {
    SeismicMedium m = build_medium_constant(0.0, 1.0, 1.0, g, 10);
    for (std::size_t j = 0; j < g.total(); ++j) {
      CHECK(m.c[j] == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(m.eta[j] == doctest::Approx(-1.0).epsilon(1e-15));
      CHECK(m.tau_coef[j] == doctest::Approx(0.0).epsilon(1e-15));
    }
  }
  SUBCASE("gamma = 0.25") {
    SeismicMedium m = build_medium_constant(0.25, 1.0, 1.0, g, 10);
    for (std::size_t j = 0; j < g.total(); ++j) {
      CHECK(m.c[j] == doctest::Approx(std::cos(M_PI / 8.0)).epsilon(1e-14));
      CHECK(m.c[j] == doctest::Approx(0.92388).epsilon(1e-5));
      CHECK(m.eta[j] == doctest::Approx(-std::cos(M_PI / 4.0)).epsilon(1e-14));
      CHECK(m.tau_coef[j] <= 0.0);
    }
    CHECK(m.disp_op.order.s0() == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(m.atten_op.order.s0() == doctest::Approx(0.75).epsilon(1e-14));
  }
  SUBCASE("gamma out of range") {
    CHECK_THROWS_AS(build_medium_constant(0.6, 1.0, 1.0, g, 10), GammaOutOfRange);
    CHECK_THROWS_AS(build_medium_constant(-0.1, 1.0, 1.0, g, 10), GammaOutOfRange);
  }
  SUBCASE("two-layer profile samples both plateaus") {
    Grid g2 = build_grid({{0.0, 2.0}, {0.0, 2.0}}, {32, 32});
    SeismicMedium m = build_medium(parse("0.0065+0.0035*tanh(100*(y-1))"),
                                   parse("1"), 2.0 * M_PI * 25.0, g2, 10);
    double gmin = 1.0, gmax = 0.0;
    for (std::size_t j = 0; j < g2.total(); ++j) {
      gmin = std::min(gmin, m.gamma[j]);
      gmax = std::max(gmax, m.gamma[j]);
    }
    CHECK(gmin == doctest::Approx(0.003).epsilon(1e-3));
    CHECK(gmax == doctest::Approx(0.01).epsilon(1e-3));
  }
}

TEST_CASE("ricker pulse") {
  Grid g = build_grid({{0.0, 2.0}, {0.0, 2.0}}, {200, 200});
  Field phi = ricker_initial(25.0, {1.0, 0.85}, g);
  // (1, 0.85) is a grid point: value there is exactly 1
  double maxv = 0.0;
  for (std::size_t j = 0; j < g.total(); ++j) maxv = std::max(maxv, phi[j]);
  CHECK(maxv == doctest::Approx(1.0).epsilon(1e-14));
  // sign change at r = 1/(pi nu0 sqrt(2))
  const double r0 = 1.0 / (M_PI * 25.0 * std::sqrt(2.0));
  for (std::size_t j = 0; j < g.total(); ++j) {
    const auto p = g.point(j);
    const double r = std::hypot(p[0] - 1.0, p[1] - 0.85);
    if (r < 0.9 * r0) CHECK(phi[j] > 0.0);
  }
}

TEST_CASE("gamma = 0 stepper matches classical LFFP") {
  Grid g = build_grid({{-16.0, 16.0}}, {256});
  const double c0 = 0.8, tau = 1e-3;
  SeismicMedium m = build_medium_constant(0.0, c0, 1.0, g, 10);
  Field phi(g), psi(g, 0.0);
  for (std::size_t j = 0; j < g.total(); ++j) {
    const double x = g.point(j)[0];
    phi[j] = std::exp(-x * x);
  }
  SeismicStepper seis(m, phi, psi, tau);

  WaveProblem p;
  p.grid = g;
  p.order = sample_order(1.0, g);
  p.kappa = c0 * c0;
  p.f = Nonlinearity::none();
  p.phi = phi;
  p.psi = psi;
  Stepper classic(p, {Method::LFFP, tau});

  for (int n = 0; n < 100; ++n) {
    seis.step();
    classic.step();
    double diff = 0.0;
    for (std::size_t j = 0; j < g.total(); ++j)
      diff = std::max(diff, std::abs(seis.current()[j] - classic.current()[j]));
    CHECK(diff <= 1e-12);
  }
}

TEST_CASE("higher gamma attenuates more") {
  // homogeneous media, identical otherwise; compare sup norms after the pulse
  // has spread
  Grid g = build_grid({{0.0, 2.0}}, {256});
  Field phi = ricker_initial(10.0, {1.0}, g);
  Field psi(g, 0.0);
  const double omega0 = 2.0 * M_PI * 10.0, tau = 1e-4;
  SeismicMedium low = build_medium_constant(0.003, 1.0, omega0, g, 10);
  SeismicMedium high = build_medium_constant(0.1, 1.0, omega0, g, 10);
  SeismicStepper a(low, phi, psi, tau);
  SeismicStepper b(high, phi, psi, tau);
  a.advance(4000);
  b.advance(4000);
  double sup_a = 0.0, sup_b = 0.0;
  for (std::size_t j = 0; j < g.total(); ++j) {
    sup_a = std::max(sup_a, std::abs(a.current()[j]));
    sup_b = std::max(sup_b, std::abs(b.current()[j]));
  }
  CHECK(sup_b < sup_a);
}

TEST_CASE("zero field stays zero") {
  Grid g = build_grid({{0.0, 2.0}}, {64});
  SeismicMedium m = build_medium_constant(0.01, 1.0, 10.0, g, 10);
  Field z(g, 0.0);
  SeismicStepper st(m, z, z, 1e-3);
  st.advance(10);
  for (std::size_t j = 0; j < g.total(); ++j) CHECK(st.current()[j] == 0.0);
}

}  // TEST_SUITE
