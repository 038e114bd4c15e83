#include "fracwave/seismic.hpp"

#include <cmath>

#include "fracwave/errors.hpp"

namespace fwave {

namespace {

SeismicMedium derive_medium(const Grid& grid, std::vector<double> gamma,
                            std::vector<double> c0, double omega0, int M) {
  const std::size_t N = grid.total();
  for (std::size_t j = 0; j < N; ++j) {
    // gamma = 0 admitted as the classical limit
    if (!(gamma[j] >= 0.0) || !(gamma[j] < 0.5))
      throw GammaOutOfRange("gamma = " + std::to_string(gamma[j]) +
                            " outside [0, 0.5)");
  }

  SeismicMedium m;
  m.grid = grid;
  m.omega0 = omega0;
  m.gamma = Field(grid, gamma);
  m.c0 = Field(grid, c0);
  m.c = Field(grid, 0.0);
  m.eta = Field(grid, 0.0);
  m.tau_coef = Field(grid, 0.0);
  std::vector<double> ord1(N), ord2(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double g = gamma[j];
    const double cg = c0[j];
    const double scale = std::pow(cg, 2.0 * g) * std::pow(omega0, -2.0 * g);
    m.c[j] = cg * std::cos(0.5 * M_PI * g);
    m.eta[j] = -scale * std::cos(M_PI * g);
    m.tau_coef[j] = -(scale / cg) * std::sin(M_PI * g);
    ord1[j] = 1.0 + g;
    ord2[j] = 0.5 + g;
  }
  // separate s0 per operator keeps the Taylor deviation tight
  m.disp_op = build_expansion(OrderField(grid, std::move(ord1)), M);
  m.atten_op = build_expansion(OrderField(grid, std::move(ord2)), M);
  return m;
}

}  // namespace

SeismicMedium build_medium(const Expr& gamma, const Expr& c0, double omega0,
                           const Grid& grid, int M) {
  static const char* names[3] = {"x", "y", "z"};
  const std::size_t N = grid.total();
  std::vector<double> g(N), c(N);
  std::map<std::string, double> env;
  for (std::size_t j = 0; j < N; ++j) {
    const auto x = grid.point(j);
    for (int m = 0; m < grid.dim(); ++m) env[names[m]] = x[m];
    g[j] = gamma.eval(env);
    c[j] = c0.eval(env);
  }
  return derive_medium(grid, std::move(g), std::move(c), omega0, M);
}

SeismicMedium build_medium_constant(double gamma, double c0, double omega0,
                                    const Grid& grid, int M) {
  const std::size_t N = grid.total();
  return derive_medium(grid, std::vector<double>(N, gamma),
                       std::vector<double>(N, c0), omega0, M);
}

Field ricker_initial(double nu0, const std::vector<double>& xc, const Grid& grid) {
  Field out(grid, 0.0);
  const double a = M_PI * M_PI * nu0 * nu0;
  for (std::size_t j = 0; j < grid.total(); ++j) {
    const auto x = grid.point(j);
    double r2 = 0.0;
    for (int m = 0; m < grid.dim(); ++m) {
      const double d = x[m] - xc[m];
      r2 += d * d;
    }
    out[j] = (1.0 - 2.0 * a * r2) * std::exp(-a * r2);
  }
  return out;
}

SeismicStepper::SeismicStepper(const SeismicMedium& medium, const Field& phi,
                               const Field& psi, double tau, double blowup_factor)
    : medium_(medium), tau_(tau) {
  const Grid& grid = medium.grid;
  const std::size_t N = grid.total();

  double sup = 0.0;
  for (double v : phi.values()) sup = std::max(sup, std::abs(v));
  blowup_threshold_ = blowup_factor * std::max(sup, 1e-300);

  prev_ = phi;
  // Taylor start: u^1 = phi + tau psi + (tau^2/2) c^2 eta L1 phi
  // (the attenuation term vanishes at t = 0 when psi drives it: d/dt L2 u(0) = L2 psi)
  Field l1phi = apply_matrix_free(medium.disp_op, phi);
  Field l2psi = apply_matrix_free(medium.atten_op, psi);
  cur_ = Field(grid, 0.0);
  for (std::size_t j = 0; j < N; ++j) {
    const double c2 = medium.c[j] * medium.c[j];
    cur_[j] = phi[j] + tau * psi[j] +
              0.5 * tau * tau * c2 *
                  (medium.eta[j] * l1phi[j] + medium.tau_coef[j] * l2psi[j]);
  }
  atten_prev_ = apply_matrix_free(medium.atten_op, prev_);
  n_ = 1;
}

void SeismicStepper::step() {
  const std::size_t N = medium_.grid.total();
  Field l1 = apply_matrix_free(medium_.disp_op, cur_);
  Field l2 = apply_matrix_free(medium_.atten_op, cur_);
  Field next(medium_.grid, 0.0);
  const double t2 = tau_ * tau_;
  for (std::size_t j = 0; j < N; ++j) {
    const double c2 = medium_.c[j] * medium_.c[j];
    next[j] = 2.0 * cur_[j] - prev_[j] +
              t2 * c2 *
                  (medium_.eta[j] * l1[j] +
                   medium_.tau_coef[j] * (l2[j] - atten_prev_[j]) / tau_);
  }
  ++n_;
  double sup = 0.0;
  for (double v : next.values()) sup = std::max(sup, std::abs(v));
  if (!(sup <= blowup_threshold_))
    throw BlowupDetected("sup|u| = " + std::to_string(sup) + " at step " +
                         std::to_string(n_));
  prev_ = std::move(cur_);
  cur_ = std::move(next);
  atten_prev_ = std::move(l2);
}

void SeismicStepper::advance(int steps) {
  for (int i = 0; i < steps; ++i) step();
}

void SeismicStepper::advance_to(double t_final) {
  const long target = std::lround(t_final / tau_);
  while (n_ < target) step();
}

}  // namespace fwave
