#include <cmath>
#include <random>

#include "doctest.h"
#include "fracwave/errors.hpp"
#include "fracwave/grid.hpp"

using namespace fwave;

TEST_SUITE("grid") {

TEST_CASE("construction validates inputs") {
  CHECK_NOTHROW(build_grid({{-32.0, 32.0}}, {64}));
  CHECK_THROWS_AS(build_grid({{-32.0, 32.0}}, {63}), OddSize);
  CHECK_THROWS_AS(build_grid({{1.0, 1.0}}, {64}), EmptyInterval);
  CHECK_THROWS_AS(build_grid({{2.0, -2.0}}, {64}), EmptyInterval);
  CHECK_THROWS_AS(build_grid({}, {}), DimOutOfRange);
  CHECK_THROWS_AS(
      build_grid({{0., 1.}, {0., 1.}, {0., 1.}, {0., 1.}}, {4, 4, 4, 4}),
      DimOutOfRange);
}

TEST_CASE("frequencies") {
  Grid g = build_grid({{-32.0, 32.0}}, {64});
  CHECK(g.frequency({1})[0] == doctest::Approx(M_PI / 32.0).epsilon(1e-14));
  CHECK(g.frequency({0})[0] == 0.0);
  Grid g2 = build_grid({{0.0, 2.0 * M_PI}}, {16});
  CHECK(g2.frequency({-8})[0] == doctest::Approx(-8.0).epsilon(1e-14));
  CHECK_THROWS_AS(g2.frequency({8}), IndexOutOfRange);
  CHECK_THROWS_AS(g2.frequency({-9}), IndexOutOfRange);
}

TEST_CASE("forward transform of pure modes") {
  Grid g = build_grid({{0.0, 2.0 * M_PI}}, {16});
  SUBCASE("constant field has only the DC coefficient") {
    Field u(g, 3.25);
    Spectrum s = forward(u);
    CHECK(s.coeffs()[0].real() == doctest::Approx(3.25).epsilon(1e-14));
    for (std::size_t p = 1; p < 16; ++p)
      CHECK(std::abs(s.coeffs()[p]) < 1e-13);
  }
  SUBCASE("cos(mu_3 (x-a)) splits into +-3 bins of weight 1/2") {
    Field u(g);
    for (std::size_t j = 0; j < g.total(); ++j)
      u[j] = std::cos(3.0 * (g.point(j)[0] - g.lo(0)));
    Spectrum s = forward(u);
    CHECK(s.coeffs()[3].real() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(s.coeffs()[16 - 3].real() == doctest::Approx(0.5).epsilon(1e-13));
    for (std::size_t p = 0; p < 16; ++p) {
      if (p == 3 || p == 13) continue;
      CHECK(std::abs(s.coeffs()[p]) < 1e-13);
    }
  }
}

TEST_CASE("roundtrip and Parseval on random fields (1D/2D/3D)") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> dist;
  for (const auto& [bounds, sizes] :
       {std::pair{std::vector<std::pair<double, double>>{{-32., 32.}},
                  std::vector<int>{128}},
        std::pair{std::vector<std::pair<double, double>>{{-1., 1.}, {0., 4.}},
                  std::vector<int>{16, 32}},
        std::pair{std::vector<std::pair<double, double>>{{0., 1.}, {0., 2.}, {0., 3.}},
                  std::vector<int>{8, 8, 8}}}) {
    Grid g = build_grid(bounds, sizes);
    Field u(g);
    for (auto& v : u.values()) v = dist(rng);

    Spectrum s = forward(u);
    double residue = 0.0;
    Field back = inverse(s, &residue);

    double num = 0.0, den = 0.0, sum_u2 = 0.0, sum_c2 = 0.0;
    for (std::size_t j = 0; j < g.total(); ++j) {
      num += (back[j] - u[j]) * (back[j] - u[j]);
      den += u[j] * u[j];
      sum_u2 += u[j] * u[j];
      sum_c2 += std::norm(s.coeffs()[j]);
    }
    CHECK(std::sqrt(num / den) < 1e-12);
    CHECK(residue < 1e-10 * std::sqrt(den));
    // Parseval with the 1/N-forward convention: sum |u|^2 = N sum |uhat|^2
    CHECK(sum_u2 ==
          doctest::Approx(static_cast<double>(g.total()) * sum_c2).epsilon(1e-12));
  }
}

TEST_CASE("conjugate symmetry of the transform of a real field") {
  Grid g = build_grid({{-4.0, 4.0}}, {32});
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist;
  Field u(g);
  for (auto& v : u.values()) v = dist(rng);
  Spectrum s = forward(u);
  for (int p = 1; p < 32; ++p)
    CHECK(std::abs(s.coeffs()[p] - std::conj(s.coeffs()[32 - p])) < 1e-13);
}

TEST_CASE("grid geometry accessors") {
  Grid g = build_grid({{-32.0, 32.0}, {0.0, 4.0}}, {64, 8});
  CHECK(g.dim() == 2);
  CHECK(g.step(0) == doctest::Approx(1.0));
  CHECK(g.step(1) == doctest::Approx(0.5));
  CHECK(g.total() == 512);
  CHECK(g.cell_volume() == doctest::Approx(0.5));
  // row-major, axis 0 slowest: flattened j = 9 -> (1, 1)
  auto pt = g.point(9);
  CHECK(pt[0] == doctest::Approx(-31.0));
  CHECK(pt[1] == doctest::Approx(0.5));
}

}  // TEST_SUITE
