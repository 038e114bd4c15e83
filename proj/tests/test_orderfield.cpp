#include <cmath>

#include "doctest.h"
#include "fracwave/errors.hpp"
#include "fracwave/orderfield.hpp"

using namespace fwave;

TEST_SUITE("orderfield") {

TEST_CASE("constant order") {
  Grid g = build_grid({{-32.0, 32.0}}, {64});
  OrderField of = sample_order(1.3, g);
  CHECK(of.s0() == 1.3);  // exact, not a floating-point mean
  CHECK(of.smin() == 1.3);
  CHECK(of.smax() == 1.3);
  CHECK(is_constant(of));
}

TEST_CASE("variable profile s0 is the discrete mean") {
  Grid g = build_grid({{-32.0, 32.0}}, {64});
  OrderField of = sample_order(parse("1+0.3*sin(pi*x/8)"), g);
  CHECK(of.s0() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(of.smax() == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(of.smin() == doctest::Approx(0.7).epsilon(1e-14));
  CHECK_FALSE(is_constant(of));

  double dev_sum = 0.0;
  for (double s : of.values()) dev_sum += s - of.s0();
  CHECK(std::abs(dev_sum) < 1e-12 * static_cast<double>(g.total()));
}

TEST_CASE("range validation") {
  Grid g = build_grid({{-32.0, 32.0}}, {64});
  CHECK_THROWS_AS(sample_order(2.5, g), OrderOutOfRange);
  CHECK_THROWS_AS(sample_order(0.0, g), OrderOutOfRange);
  CHECK_THROWS_AS(sample_order(2.0, g), OrderOutOfRange);
  CHECK_NOTHROW(sample_order(1.99, g));
  CHECK_THROWS_AS(sample_order(parse("2.1+0*x"), g), OrderOutOfRange);
}

TEST_CASE("deviation bound") {
  Grid g = build_grid({{-32.0, 32.0}}, {64});
  // forcing s0 far from the samples violates |s - s0| < 1
  std::vector<double> vals(g.total(), 1.9);
  CHECK_THROWS_AS(OrderField(g, vals, 0.1), DeviationTooLarge);
  CHECK_NOTHROW(OrderField(g, vals, 1.0));
}

TEST_CASE("near-constant values count as constant") {
  Grid g = build_grid({{0.0, 1.0}}, {8});
  std::vector<double> vals(g.total(), 0.5);
  vals[3] += 5e-16;
  OrderField of(g, vals);
  CHECK(is_constant(of));
}

}  // TEST_SUITE
