#ifndef FRACWAVE_SEISMIC_HPP
#define FRACWAVE_SEISMIC_HPP

#include "fracwave/expr.hpp"
#include "fracwave/flap.hpp"
#include "fracwave/grid.hpp"

namespace fwave {

// Viscoacoustic variable-order medium: dispersion operator of order
// 1 + gamma(x) and attenuation operator of order 1/2 + gamma(x), with
// coefficient fields derived from gamma, c0 and the reference frequency.
struct SeismicMedium {
  Grid grid;
  double omega0 = 1.0;
  Field gamma;
  Field c0;
  Field c;         // c0 cos(pi gamma / 2)
  Field eta;       // -c0^{2 gamma} omega0^{-2 gamma} cos(pi gamma)
  Field tau_coef;  // -c0^{2 gamma - 1} omega0^{-2 gamma} sin(pi gamma)
  ExpansionOperator disp_op;   // order 1 + gamma, own s0
  ExpansionOperator atten_op;  // order 1/2 + gamma, own s0
};

SeismicMedium build_medium(const Expr& gamma, const Expr& c0, double omega0,
                           const Grid& grid, int M);
SeismicMedium build_medium_constant(double gamma, double c0, double omega0,
                                    const Grid& grid, int M);

// Laplacian-of-Gaussian pulse centered at xc.
Field ricker_initial(double nu0, const std::vector<double>& xc, const Grid& grid);

// Explicit two-level scheme; the mixed time-space term is discretized by a
// backward difference, caching the previous attenuation application so each
// step costs one application per operator.
class SeismicStepper {
 public:
  SeismicStepper(const SeismicMedium& medium, const Field& phi,
                 const Field& psi, double tau, double blowup_factor = 1e8);

  void step();
  void advance(int steps);
  void advance_to(double t_final);
  const Field& current() const { return cur_; }
  double time() const { return n_ * tau_; }
  long n() const { return n_; }

 private:
  const SeismicMedium& medium_;
  double tau_;
  Field prev_, cur_;
  Field atten_prev_;  // cached attenuation operator applied to u^{n-1}
  double blowup_threshold_ = 0.0;
  long n_ = 0;
};

}  // namespace fwave

#endif
