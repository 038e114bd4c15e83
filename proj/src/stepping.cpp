#include "fracwave/stepping.hpp"

#include <fftw3.h>

#include <cmath>

#include "fracwave/errors.hpp"

namespace fwave {

namespace {

double sup_norm(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double l2_norm(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return std::sqrt(s);
}

double dot(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

class MatrixFreeLaplacian : public Laplacian {
 public:
  MatrixFreeLaplacian(const OrderField& order, int M)
      : op_(build_expansion(order, M)) {}
  Field apply(const Field& u) const override { return apply_matrix_free(op_, u); }
  Field apply_pert(const Field& u) const override { return apply_perturbation(op_, u); }
  double s0() const override { return op_.order.s0(); }

 private:
  ExpansionOperator op_;
};

class DenseLaplacian : public Laplacian {
 public:
  explicit DenseLaplacian(const OrderField& order)
      : op_(assemble_dense(order)), s0_(order.s0()) {}
  Field apply(const Field& u) const override { return apply_dense(op_, u); }
  Field apply_pert(const Field& u) const override {
    Field full = apply_dense(op_, u);
    Field base = apply_constant_order(u, s0_);
    for (std::size_t i = 0; i < full.size(); ++i) full[i] -= base[i];
    return full;
  }
  double s0() const override { return s0_; }

 private:
  DenseOperator op_;
  double s0_;
};

}  // namespace

Field Nonlinearity::operator()(const Field& u) const {
  Field out(u.grid(), 0.0);
  switch (kind) {
    case Kind::None:
      break;
    case Kind::Cubic:
      for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * u[i] * u[i];
      break;
    case Kind::Custom: {
      std::map<std::string, double> env;
      for (std::size_t i = 0; i < u.size(); ++i) {
        env["u"] = u[i];
        out[i] = custom.eval(env);
      }
      break;
    }
  }
  return out;
}

std::unique_ptr<Laplacian> make_laplacian(const WaveProblem& p, bool use_dense) {
  if (use_dense) return std::make_unique<DenseLaplacian>(p.order);
  return std::make_unique<MatrixFreeLaplacian>(p.order, p.M);
}

std::pair<Field, Field> initial_levels(const WaveProblem& p, double tau,
                                       const Laplacian* op) {
  std::unique_ptr<Laplacian> owned;
  if (!op) {
    owned = make_laplacian(p, false);
    op = owned.get();
  }
  Field u0 = p.phi;
  Field lphi = op->apply(p.phi);
  Field fphi = p.f(p.phi);
  Field u1(p.grid, 0.0);
  const double half_t2 = 0.5 * tau * tau;
  for (std::size_t i = 0; i < u1.size(); ++i)
    u1[i] = p.phi[i] + tau * p.psi[i] +
            half_t2 * (-p.kappa * lphi[i] + fphi[i]);
  return {std::move(u0), std::move(u1)};
}

void oscillator_substep(std::complex<double>& uhat, std::complex<double>& vhat,
                        double w, double dt) {
  if (w == 0.0) {
    uhat += dt * vhat;
    return;
  }
  const double c = std::cos(w * dt);
  const double s = std::sin(w * dt);
  const std::complex<double> u0 = uhat, v0 = vhat;
  uhat = u0 * c + v0 * (s / w);
  vhat = -w * u0 * s + v0 * c;
}

Stepper::Stepper(const WaveProblem& p, const StepperConfig& cfg)
    : p_(p), cfg_(cfg), op_(make_laplacian(p, cfg.use_dense)) {
  blowup_threshold_ = cfg_.blowup_factor * std::max(sup_norm(p_.phi), 1e-300);
  if (cfg_.method == Method::TSFP2) {
    u_ = p_.phi;
    v_ = p_.psi;
    const auto& mu2 = p_.grid.mu_abs2();
    osc_w_.resize(mu2.size());
    const double s0 = op_->s0();
    for (std::size_t k = 0; k < mu2.size(); ++k)
      osc_w_[k] = (mu2[k] > 0.0)
                      ? std::sqrt(p_.kappa) * std::pow(mu2[k], 0.5 * s0)
                      : 0.0;
  } else {
    auto levels = initial_levels(p_, cfg_.tau, op_.get());
    prev_ = std::move(levels.first);
    cur_ = std::move(levels.second);
    n_ = 1;  // cur_ is u^1
  }
}

const Field& Stepper::current() const {
  return cfg_.method == Method::TSFP2 ? u_ : cur_;
}

const Field& Stepper::velocity() const { return v_; }

void Stepper::check_blowup(const Field& u) const {
  const double s = sup_norm(u);
  if (!(s <= blowup_threshold_))
    throw BlowupDetected("sup|u| = " + std::to_string(s) + " at step " +
                         std::to_string(n_));
}

void Stepper::step() {
  switch (cfg_.method) {
    case Method::LFFP: step_lffp(); break;
    case Method::CNFP: step_cnfp(); break;
    case Method::TSFP2: step_tsfp2(); break;
  }
}

void Stepper::advance(int steps) {
  for (int i = 0; i < steps; ++i) step();
}

void Stepper::advance_to(double t_final) {
  const long target = std::lround(t_final / cfg_.tau);
  while (n_ < target) step();
}

void Stepper::step_lffp() {
  Field lu = op_->apply(cur_);
  Field fu = p_.f(cur_);
  const double t2 = cfg_.tau * cfg_.tau;
  Field next(p_.grid, 0.0);
  for (std::size_t i = 0; i < next.size(); ++i)
    next[i] = 2.0 * cur_[i] - prev_[i] + t2 * (-p_.kappa * lu[i] + fu[i]);
  ++n_;
  check_blowup(next);
  prev_ = std::move(cur_);
  cur_ = std::move(next);
}

// CG on (I + alpha L) w = rhs with the matrix-free operator.
Field Stepper::cg_solve(const Field& rhs, double alpha) const {
  const std::size_t N = rhs.size();
  Field x = rhs;  // warm start at the rhs (system is near-identity)
  auto apply_A = [&](const Field& w) {
    Field lw = op_->apply(w);
    Field out(p_.grid, 0.0);
    for (std::size_t i = 0; i < N; ++i) out[i] = w[i] + alpha * lw[i];
    return out;
  };
  Field r(p_.grid, 0.0);
  {
    Field ax = apply_A(x);
    for (std::size_t i = 0; i < N; ++i) r[i] = rhs[i] - ax[i];
  }
  const double rhs_norm = std::max(l2_norm(rhs), 1e-300);
  double rr = dot(r, r);
  if (std::sqrt(rr) <= cfg_.inner_cg_tol * rhs_norm) return x;
  Field p = r;
  for (int it = 0; it < cfg_.cg_max_iters; ++it) {
    Field ap = apply_A(p);
    const double pap = dot(p, ap);
    if (pap == 0.0) throw CgStagnated("zero curvature in conjugate gradient");
    const double a = rr / pap;
    for (std::size_t i = 0; i < N; ++i) {
      x[i] += a * p[i];
      r[i] -= a * ap[i];
    }
    const double rr_new = dot(r, r);
    if (std::sqrt(rr_new) <= cfg_.inner_cg_tol * rhs_norm) return x;
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < N; ++i) p[i] = r[i] + beta * p[i];
  }
  throw CgStagnated("conjugate gradient failed to converge in " +
                    std::to_string(cfg_.cg_max_iters) + " iterations");
}

void Stepper::step_cnfp() {
  const std::size_t N = cur_.size();
  const double t2 = cfg_.tau * cfg_.tau;
  const double alpha = 0.5 * p_.kappa * t2;

  Field lprev = op_->apply(prev_);
  Field fprev = p_.f(prev_);
  // fixed part of the rhs: 2u^n - u^{n-1} - alpha L u^{n-1} + (t2/2) f(u^{n-1})
  Field rhs0(p_.grid, 0.0);
  for (std::size_t i = 0; i < N; ++i)
    rhs0[i] = 2.0 * cur_[i] - prev_[i] - alpha * lprev[i] + 0.5 * t2 * fprev[i];

  Field w = cur_;  // Picard iterate for u^{n+1}
  if (p_.f.trivial()) {
    w = cg_solve(rhs0, alpha);
    ++picard_total_;
  } else {
    bool converged = false;
    for (int it = 0; it < cfg_.picard_max_iters; ++it) {
      Field fw = p_.f(w);
      Field rhs = rhs0;
      for (std::size_t i = 0; i < N; ++i) rhs[i] += 0.5 * t2 * fw[i];
      Field w_next = cg_solve(rhs, alpha);
      double diff = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double d = w_next[i] - w[i];
        diff += d * d;
      }
      ++picard_total_;
      w = std::move(w_next);
      if (std::sqrt(diff) <= cfg_.picard_tol * std::max(1.0, l2_norm(w))) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw PicardDiverged("fixed-point iteration cap hit at step " +
                           std::to_string(n_));
  }
  ++n_;
  check_blowup(w);
  prev_ = std::move(cur_);
  cur_ = std::move(w);
}

void Stepper::step_tsfp2() {
  const Grid& grid = p_.grid;
  const std::size_t N = grid.total();
  const double half = 0.5 * cfg_.tau;

  auto oscillator_flow = [&](double dt) {
    std::vector<std::complex<double>> uh(N), vh(N);
    for (std::size_t i = 0; i < N; ++i) {
      uh[i] = u_[i];
      vh[i] = v_[i];
    }
    grid.dft(uh.data(), FFTW_FORWARD);
    grid.dft(vh.data(), FFTW_FORWARD);
    const double inv = 1.0 / static_cast<double>(N);
    for (std::size_t k = 0; k < N; ++k) {
      uh[k] *= inv;
      vh[k] *= inv;
      oscillator_substep(uh[k], vh[k], osc_w_[k], dt);
    }
    grid.dft(uh.data(), FFTW_BACKWARD);
    grid.dft(vh.data(), FFTW_BACKWARD);
    for (std::size_t i = 0; i < N; ++i) {
      u_[i] = uh[i].real();
      v_[i] = vh[i].real();
    }
  };

  oscillator_flow(half);
  // perturbation + nonlinearity flow: u frozen, v advances linearly
  if (!(is_constant(p_.order) && p_.f.trivial())) {
    Field pert = op_->apply_pert(u_);
    Field fu = p_.f(u_);
    for (std::size_t i = 0; i < N; ++i)
      v_[i] += cfg_.tau * (-p_.kappa * pert[i] + fu[i]);
  }
  oscillator_flow(half);
  ++n_;
  check_blowup(u_);
}

double estimate_critical_timestep(const WaveProblem& p, Method method,
                                  double tau_lo, double tau_hi,
                                  double horizon) {
  if (!(tau_lo > 0.0) || !(tau_hi > tau_lo))
    throw BracketInvalid("need 0 < tau_lo < tau_hi");

  auto stable = [&](double tau) {
    StepperConfig cfg;
    cfg.method = method;
    cfg.tau = tau;
    Stepper st(p, cfg);
    const long steps = static_cast<long>(std::ceil(horizon / tau));
    try {
      for (long i = st.n(); i < steps; ++i) st.step();
    } catch (const BlowupDetected&) {
      return false;
    }
    return true;
  };

  if (!stable(tau_lo)) throw BracketInvalid("tau_lo is not stable");
  if (stable(tau_hi)) throw BracketInvalid("tau_hi is not unstable");

  while (tau_hi - tau_lo > 0.02 * tau_lo) {
    const double mid = 0.5 * (tau_lo + tau_hi);
    if (stable(mid)) tau_lo = mid;
    else tau_hi = mid;
  }
  return 0.5 * (tau_lo + tau_hi);
}

}  // namespace fwave
