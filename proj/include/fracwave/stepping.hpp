#ifndef FRACWAVE_STEPPING_HPP
#define FRACWAVE_STEPPING_HPP

#include <complex>
#include <functional>
#include <memory>
#include <utility>

#include "fracwave/expr.hpp"
#include "fracwave/flap.hpp"
#include "fracwave/grid.hpp"
#include "fracwave/orderfield.hpp"

namespace fwave {

enum class Method { CNFP, LFFP, TSFP2 };

struct Nonlinearity {
  enum class Kind { None, Cubic, Custom } kind = Kind::None;
  Expr custom;  // expression in u, used when kind == Custom

  static Nonlinearity none() { return {}; }
  static Nonlinearity cubic() { return {Kind::Cubic, {}}; }
  static Nonlinearity expr(Expr e) { return {Kind::Custom, std::move(e)}; }

  Field operator()(const Field& u) const;
  bool trivial() const { return kind == Kind::None; }
};

struct WaveProblem {
  Grid grid;
  OrderField order;
  double kappa = 1.0;
  Nonlinearity f;
  Field phi, psi;
  int M = 15;
};

struct StepperConfig {
  Method method = Method::TSFP2;
  double tau = 1e-3;
  double picard_tol = 1e-12;
  int picard_max_iters = 200;
  double inner_cg_tol = 1e-14;
  int cg_max_iters = 500;
  double blowup_factor = 1e8;  // threshold = factor * sup|u0|
  bool use_dense = false;      // oracle runs apply the dense operator
};

// Operator backend shared by the steppers: the full variable-order apply
// and the m >= 1 perturbation part.
class Laplacian {
 public:
  virtual ~Laplacian() = default;
  virtual Field apply(const Field& u) const = 0;
  virtual Field apply_pert(const Field& u) const = 0;
  virtual double s0() const = 0;
};

std::unique_ptr<Laplacian> make_laplacian(const WaveProblem& p, bool use_dense);

// u^0 = phi, u^1 = phi + tau psi + (tau^2/2)(-kappa L phi + f(phi)).
std::pair<Field, Field> initial_levels(const WaveProblem& p, double tau,
                                       const Laplacian* op = nullptr);

// Exact rotation of one oscillator mode; w = 0 takes the free-drift branch.
void oscillator_substep(std::complex<double>& uhat, std::complex<double>& vhat,
                        double w, double dt);

// Owns the evolving state; representation depends on the method
// (two consecutive levels for CNFP/LFFP, the pair (u, v) for TSFP2).
class Stepper {
 public:
  Stepper(const WaveProblem& p, const StepperConfig& cfg);

  void step();
  void advance(int steps);
  // Step until n * tau reaches t_final (two-level methods already hold u^1
  // after construction, so the step count is relative to the current level).
  void advance_to(double t_final);

  const Field& current() const;          // u^n
  const Field& velocity() const;         // TSFP2 only
  double time() const { return n_ * cfg_.tau; }
  long n() const { return n_; }
  long total_picard_iterations() const { return picard_total_; }

 private:
  void step_lffp();
  void step_cnfp();
  void step_tsfp2();
  void check_blowup(const Field& u) const;
  Field cg_solve(const Field& rhs, double alpha) const;

  WaveProblem p_;
  StepperConfig cfg_;
  std::unique_ptr<Laplacian> op_;
  Field prev_, cur_;  // two-level representation
  Field u_, v_;       // pair representation
  std::vector<double> osc_w_;  // sqrt(kappa) |mu_k|^{s0} per bin (TSFP2)
  double blowup_threshold_ = 0.0;
  long n_ = 0;
  long picard_total_ = 0;
};

// Bisect the critical time step of an explicit method over a fixed horizon.
// tau_lo must be stable and tau_hi unstable, else BracketInvalid.
double estimate_critical_timestep(const WaveProblem& p, Method method,
                                  double tau_lo, double tau_hi,
                                  double horizon = 1.0);

}  // namespace fwave

#endif
