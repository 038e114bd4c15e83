#ifndef FRACWAVE_FLAP_HPP
#define FRACWAVE_FLAP_HPP

#include <cstdint>

#include "fracwave/grid.hpp"
#include "fracwave/orderfield.hpp"

namespace fwave {

// Precomputed tables for the M-term matrix-free evaluation of the
// variable-order operator.  Storage is Theta(M*N): per expansion term one
// frequency-side weight table and one space-side deviation power table.
struct ExpansionOperator {
  Grid grid;
  OrderField order;
  int M = 0;
  std::vector<double> base_symbol;                  // |mu_k|^{2 s0}, 0 at k=0
  std::vector<std::vector<double>> log_weights;     // m=1..M: (ln|mu_k|^2)^m/m!
  std::vector<std::vector<double>> deviation_powers;  // m=1..M: [s(x)-s0]^m
  bool constant_order = false;
};

ExpansionOperator build_expansion(const OrderField& order, int M);

// Spectral constant-order evaluator: coefficient-wise |mu_k|^{2s}, zero mode
// annihilated.
Spectrum apply_constant_order(const Spectrum& spec, double s);
Field apply_constant_order(const Field& u, double s);

// Matrix-free M-term evaluator.  The OpenMP kernel computes the M+1 terms
// concurrently and reduces them in ascending m order, so output is
// bit-identical to the serial reference for any thread count.
Field apply_matrix_free(const ExpansionOperator& op, const Field& u,
                        double* imag_residue = nullptr);
Field apply_matrix_free_serial(const ExpansionOperator& op, const Field& u,
                               double* imag_residue = nullptr);

// Terms m = 1..M only: (-Delta)^{s(x)} - (-Delta)^{s0}.
Field apply_perturbation(const ExpansionOperator& op, const Field& u,
                         double* imag_residue = nullptr);

// Dense spatial-domain operator; kept as the verification oracle.
struct DenseOperator {
  Grid grid;
  OrderField order;
  std::vector<double> entries;  // N x N row-major
};

inline constexpr std::uint64_t kDefaultMemoryBudget = 8ull << 30;

DenseOperator assemble_dense(const OrderField& order,
                             std::uint64_t memory_budget = kDefaultMemoryBudget);
Field apply_dense(const DenseOperator& op, const Field& u);

// Fast constant-order matvec via circulant embedding of the symmetric
// Toeplitz matrix (1D only).
Field apply_toeplitz(const OrderField& order, const Field& u);

// Magnitude of the first dropped expansion term.
double truncation_indicator(int M, double mu_abs, double s0);

}  // namespace fwave

#endif
