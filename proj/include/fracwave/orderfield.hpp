#ifndef FRACWAVE_ORDERFIELD_HPP
#define FRACWAVE_ORDERFIELD_HPP

#include <optional>

#include "fracwave/expr.hpp"
#include "fracwave/grid.hpp"

namespace fwave {

// Sampled variable exponent s(x) with the reference order s0 the expansion
// is centered on.  Valid range is 0 < s < 2 with |s - s0| < 1 everywhere.
class OrderField {
 public:
  OrderField() = default;
  OrderField(Grid grid, std::vector<double> values,
             std::optional<double> s0_override = std::nullopt);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double s0() const { return s0_; }
  double smin() const { return smin_; }
  double smax() const { return smax_; }

 private:
  Grid grid_;
  std::vector<double> values_;
  double s0_ = 0.0, smin_ = 0.0, smax_ = 0.0;
};

OrderField sample_order(const Expr& e, const Grid& grid,
                        std::optional<double> s0_override = std::nullopt);
OrderField sample_order(double constant, const Grid& grid);

bool is_constant(const OrderField& of);

}  // namespace fwave

#endif
