#include "fracwave/orderfield.hpp"

#include <algorithm>
#include <cmath>

#include "fracwave/errors.hpp"

namespace fwave {

OrderField::OrderField(Grid grid, std::vector<double> values,
                       std::optional<double> s0_override)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.total())
    throw GridMismatch("order samples do not match grid point count");

  smin_ = *std::min_element(values_.begin(), values_.end());
  smax_ = *std::max_element(values_.begin(), values_.end());
  if (!(smin_ > 0.0) || !(smax_ < 2.0))
    throw OrderOutOfRange("order range [" + std::to_string(smin_) + ", " +
                          std::to_string(smax_) + "] outside (0, 2)");

  if (s0_override) {
    s0_ = *s0_override;
  } else if (smin_ == smax_) {
    s0_ = smin_;  // keep s - s0 exactly zero for constant orders
  } else {
    double sum = 0.0;
    for (double v : values_) sum += v;
    s0_ = sum / static_cast<double>(values_.size());
  }

  const double dev = std::max(std::abs(smin_ - s0_), std::abs(smax_ - s0_));
  if (dev >= 1.0)
    throw DeviationTooLarge("max |s(x) - s0| = " + std::to_string(dev) +
                            " >= 1; expansion would diverge");
}

OrderField sample_order(const Expr& e, const Grid& grid,
                        std::optional<double> s0_override) {
  static const char* names[3] = {"x", "y", "z"};
  std::vector<double> values(grid.total());
  std::map<std::string, double> env;
  for (std::size_t j = 0; j < grid.total(); ++j) {
    const auto x = grid.point(j);
    for (int m = 0; m < grid.dim(); ++m) env[names[m]] = x[m];
    values[j] = e.eval(env);
  }
  return OrderField(grid, std::move(values), s0_override);
}

OrderField sample_order(double constant, const Grid& grid) {
  return OrderField(grid, std::vector<double>(grid.total(), constant));
}

bool is_constant(const OrderField& of) {
  return of.smax() - of.smin() <= 1e-14;
}

}  // namespace fwave
