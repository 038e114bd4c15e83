// Compares the serial and OpenMP matrix-free kernels: wall time per apply
// and the maximum elementwise difference (expected to be exactly zero).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include <omp.h>

#include "fracwave/flap.hpp"
#include "fracwave/grid.hpp"
#include "fracwave/orderfield.hpp"

using namespace fwave;

namespace {

double time_best_of(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", omp_get_max_threads());
  std::printf("%10s %6s %12s %12s %8s %12s\n", "N", "M", "serial_s", "parallel_s",
              "speedup", "max_diff");

  std::mt19937_64 rng(20240801);
  std::normal_distribution<double> dist(0.0, 1.0);

  for (int J : {4096, 16384, 65536}) {
    Grid g = build_grid({{-32.0, 32.0}}, {J});
    std::vector<double> s(g.total());
    for (std::size_t j = 0; j < g.total(); ++j)
      s[j] = 1.0 + 0.3 * std::sin(M_PI * g.point(j)[0] / 8.0);
    OrderField order(g, s);

    const int M = 15;
    ExpansionOperator op = build_expansion(order, M);

    Field u(g);
    for (auto& v : u.values()) v = dist(rng);

    Field out_serial = apply_matrix_free_serial(op, u);
    Field out_parallel = apply_matrix_free(op, u);
    double max_diff = 0.0;
    for (std::size_t j = 0; j < g.total(); ++j)
      max_diff = std::max(max_diff, std::abs(out_serial[j] - out_parallel[j]));

    const double ts = time_best_of(5, [&] { apply_matrix_free_serial(op, u); });
    const double tp = time_best_of(5, [&] { apply_matrix_free(op, u); });
    std::printf("%10d %6d %12.6f %12.6f %8.2f %12.3e\n", J, M, ts, tp, ts / tp,
                max_diff);
  }
  return 0;
}
