#include "fracwave/flap.hpp"

#include <fftw3.h>

#include <cmath>

#include "fracwave/errors.hpp"

namespace fwave {

namespace {

void check_order_range(double s) {
  if (!(s > 0.0) || !(s < 2.0))
    throw OrderOutOfRange("order s = " + std::to_string(s) + " outside (0, 2)");
}

// One expansion term: synthesize IFFT(weight .* uhat) and accumulate
// devpow .* real part into acc.  weight == nullptr means all-ones (m = 0
// uses base_symbol only, already folded into the weight argument).
double add_term(const Grid& grid, const std::vector<std::complex<double>>& uhat,
                const std::vector<double>& weight,
                const double* devpow,  // nullptr: multiply by 1
                std::vector<double>& acc) {
  const std::size_t N = grid.total();
  std::vector<std::complex<double>> buf(N);
  for (std::size_t i = 0; i < N; ++i) buf[i] = weight[i] * uhat[i];
  grid.dft(buf.data(), FFTW_BACKWARD);
  double res = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double re = buf[i].real();
    res = std::max(res, std::abs(buf[i].imag()));
    acc[i] += devpow ? devpow[i] * re : re;
  }
  return res;
}

Field apply_expansion(const ExpansionOperator& op, const Field& u,
                      int m_first, double* imag_residue, bool parallel) {
  if (!u.grid().same_as(op.grid))
    throw GridMismatch("field defined on a different grid than the operator");
  const Grid& grid = op.grid;
  const std::size_t N = grid.total();

  // uhat with the 1/N forward normalization
  std::vector<std::complex<double>> uhat(N);
  for (std::size_t i = 0; i < N; ++i) uhat[i] = u[i];
  grid.dft(uhat.data(), FFTW_FORWARD);
  const double inv = 1.0 / static_cast<double>(N);
  for (auto& c : uhat) c *= inv;

  // Constant order: every m >= 1 term vanishes identically.
  const int m_last = op.constant_order ? 0 : op.M;

  std::vector<int> terms;
  for (int m = m_first; m <= m_last; ++m) terms.push_back(m);

  std::vector<std::vector<double>> partial(terms.size());
  std::vector<double> residues(terms.size(), 0.0);

  auto compute_term = [&](std::size_t ti) {
    const int m = terms[ti];
    partial[ti].assign(N, 0.0);
    if (m == 0) {
      residues[ti] = add_term(grid, uhat, op.base_symbol, nullptr, partial[ti]);
    } else {
      std::vector<double> w(N);
      const auto& lw = op.log_weights[m - 1];
      for (std::size_t i = 0; i < N; ++i) w[i] = op.base_symbol[i] * lw[i];
      residues[ti] = add_term(grid, uhat, w, op.deviation_powers[m - 1].data(),
                              partial[ti]);
    }
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t ti = 0; ti < terms.size(); ++ti) compute_term(ti);
  } else {
    for (std::size_t ti = 0; ti < terms.size(); ++ti) compute_term(ti);
  }

  // Reduce in ascending m order regardless of thread count.
  Field out(grid, 0.0);
  double res = 0.0;
  for (std::size_t ti = 0; ti < terms.size(); ++ti) {
    const auto& p = partial[ti];
    for (std::size_t i = 0; i < N; ++i) out[i] += p[i];
    res = std::max(res, residues[ti]);
  }
  if (imag_residue) *imag_residue = res;
  return out;
}

}  // namespace

ExpansionOperator build_expansion(const OrderField& order, int M) {
  if (M < 0) throw NegativeM("truncation count M must be >= 0");
  ExpansionOperator op;
  op.grid = order.grid();
  op.order = order;
  op.M = M;
  op.constant_order = is_constant(order);

  const std::size_t N = op.grid.total();
  const auto& mu2 = op.grid.mu_abs2();
  const double s0 = order.s0();

  op.base_symbol.assign(N, 0.0);
  for (std::size_t k = 0; k < N; ++k)
    if (mu2[k] > 0.0) op.base_symbol[k] = std::pow(mu2[k], s0);

  op.log_weights.assign(M, std::vector<double>(N, 0.0));
  op.deviation_powers.assign(M, std::vector<double>(N, 0.0));
  // weight recurrence w_m = w_{m-1} * ln(mu^2) / m avoids factorial overflow
  for (int m = 1; m <= M; ++m) {
    auto& cur = op.log_weights[m - 1];
    for (std::size_t k = 0; k < N; ++k) {
      if (mu2[k] <= 0.0) continue;
      const double l = std::log(mu2[k]);
      cur[k] = (m == 1) ? l : op.log_weights[m - 2][k] * l / m;
    }
  }
  const auto& s = order.values();
  for (int m = 1; m <= M; ++m) {
    auto& dp = op.deviation_powers[m - 1];
    if (m == 1) {
      for (std::size_t j = 0; j < N; ++j) dp[j] = s[j] - s0;
    } else {
      const auto& prev = op.deviation_powers[m - 2];
      const auto& dev = op.deviation_powers[0];
      for (std::size_t j = 0; j < N; ++j) dp[j] = prev[j] * dev[j];
    }
  }
  return op;
}

Spectrum apply_constant_order(const Spectrum& spec, double s) {
  check_order_range(s);
  const Grid& grid = spec.grid();
  const auto& mu2 = grid.mu_abs2();
  std::vector<std::complex<double>> out(spec.coeffs());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] *= (mu2[k] > 0.0) ? std::pow(mu2[k], s) : 0.0;
  return Spectrum(grid, std::move(out));
}

Field apply_constant_order(const Field& u, double s) {
  return inverse(apply_constant_order(forward(u), s));
}

Field apply_matrix_free(const ExpansionOperator& op, const Field& u,
                        double* imag_residue) {
  return apply_expansion(op, u, 0, imag_residue, true);
}

Field apply_matrix_free_serial(const ExpansionOperator& op, const Field& u,
                               double* imag_residue) {
  return apply_expansion(op, u, 0, imag_residue, false);
}

Field apply_perturbation(const ExpansionOperator& op, const Field& u,
                         double* imag_residue) {
  if (op.constant_order) {
    if (imag_residue) *imag_residue = 0.0;
    return Field(op.grid, 0.0);
  }
  return apply_expansion(op, u, 1, imag_residue, true);
}

DenseOperator assemble_dense(const OrderField& order,
                             std::uint64_t memory_budget) {
  const Grid& grid = order.grid();
  const std::size_t N = grid.total();
  const std::uint64_t required =
      static_cast<std::uint64_t>(N) * static_cast<std::uint64_t>(N) * sizeof(double);
  // strict bound: entries alone consuming the whole budget leaves no headroom
  if (required >= memory_budget) throw MemoryBudgetExceeded(required, memory_budget);

  DenseOperator op;
  op.grid = grid;
  op.order = order;
  op.entries.assign(N * N, 0.0);

  const auto& mu2 = grid.mu_abs2();
  const auto& s = order.values();
  const int d = grid.dim();
  std::array<int, 3> J{1, 1, 1};
  for (int m = 0; m < d; ++m) J[m] = grid.size(m);

  // Row j is the inverse transform of the symbol |mu|^{2 s(x_j)}, sampled
  // at the periodic shift j - l per axis.
#pragma omp parallel
  {
    std::vector<std::complex<double>> g(N);
#pragma omp for schedule(dynamic)
    for (std::size_t j = 0; j < N; ++j) {
      const double sj = s[j];
      for (std::size_t k = 0; k < N; ++k)
        g[k] = (mu2[k] > 0.0) ? std::pow(mu2[k], sj) : 0.0;
      grid.dft(g.data(), FFTW_BACKWARD);

      std::array<int, 3> jm{0, 0, 0};
      {
        std::size_t rem = j;
        for (int m = d - 1; m >= 0; --m) {
          jm[m] = static_cast<int>(rem % J[m]);
          rem /= J[m];
        }
      }
      double* row = op.entries.data() + j * N;
      const double inv = 1.0 / static_cast<double>(N);
      for (std::size_t l = 0; l < N; ++l) {
        std::size_t rem = l, shift = 0;
        std::array<int, 3> lm{0, 0, 0};
        for (int m = d - 1; m >= 0; --m) {
          lm[m] = static_cast<int>(rem % J[m]);
          rem /= J[m];
        }
        for (int m = 0; m < d; ++m) {
          const int dm = (jm[m] - lm[m] + J[m]) % J[m];
          shift = shift * J[m] + dm;
        }
        row[l] = g[shift].real() * inv;
      }
    }
  }
  return op;
}

Field apply_dense(const DenseOperator& op, const Field& u) {
  if (!u.grid().same_as(op.grid))
    throw GridMismatch("field defined on a different grid than the operator");
  const std::size_t N = op.grid.total();
  Field out(op.grid, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < N; ++j) {
    const double* row = op.entries.data() + j * N;
    double acc = 0.0;
    for (std::size_t l = 0; l < N; ++l) acc += row[l] * u[l];
    out[j] = acc;
  }
  return out;
}

Field apply_toeplitz(const OrderField& order, const Field& u) {
  if (!is_constant(order))
    throw NotConstantOrder("toeplitz fast path requires a constant order");
  if (order.grid().dim() != 1)
    throw DimUnsupported("toeplitz fast path is one-dimensional");
  const Grid& grid = order.grid();
  if (!u.grid().same_as(grid)) throw GridMismatch("field grid mismatch");
  const int J = grid.size(0);
  const double s = order.s0();

  // First column t[d] = (1/J) sum_k |mu_k|^{2s} e^{i mu_k d h}
  const auto& mu2 = grid.mu_abs2();
  std::vector<std::complex<double>> t(J);
  for (int k = 0; k < J; ++k)
    t[k] = (mu2[k] > 0.0) ? std::pow(mu2[k], s) : 0.0;
  grid.dft(t.data(), FFTW_BACKWARD);

  // Circulant embedding of the symmetric Toeplitz matrix at size 2J.
  const int n = 2 * J;
  std::vector<std::complex<double>> c(n, 0.0), x(n, 0.0);
  const double inv = 1.0 / static_cast<double>(J);
  for (int d = 0; d < J; ++d) c[d] = t[d].real() * inv;
  for (int d = 1; d < J; ++d) c[n - d] = t[d].real() * inv;
  for (int j = 0; j < J; ++j) x[j] = u[j];

  fftw_complex* cp = reinterpret_cast<fftw_complex*>(c.data());
  fftw_complex* xp = reinterpret_cast<fftw_complex*>(x.data());
  fftw_plan pc = fftw_plan_dft_1d(n, cp, cp, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_execute(pc);
  fftw_execute_dft(pc, xp, xp);
  for (int i = 0; i < n; ++i) x[i] *= c[i];
  fftw_plan pb = fftw_plan_dft_1d(n, xp, xp, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_execute(pb);
  fftw_destroy_plan(pc);
  fftw_destroy_plan(pb);

  Field out(grid, 0.0);
  const double scale = 1.0 / n;
  for (int j = 0; j < J; ++j) out[j] = x[j].real() * scale;
  return out;
}

double truncation_indicator(int M, double mu_abs, double s0) {
  if (!(mu_abs > 0.0))
    throw NonpositiveFrequency("truncation indicator requires |mu| > 0");
  const double l = 2.0 * std::log(mu_abs);
  double term = std::pow(mu_abs, 2.0 * s0);
  for (int m = 1; m <= M; ++m) term *= l / m;
  return term;
}

}  // namespace fwave
