#ifndef FRACWAVE_HARNESS_HPP
#define FRACWAVE_HARNESS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fracwave/seismic.hpp"
#include "fracwave/stepping.hpp"

namespace fwave {

struct RunConfig {
  std::string preset;  // empty: fully explicit problem
  int dim = 1;
  std::vector<std::pair<double, double>> bounds{{-32.0, 32.0}};
  std::vector<int> sizes{2048};
  std::string order = "1";
  double kappa = 1.0;
  std::string f = "none";  // none | cubic | expression in u
  std::string phi = "exp(-x^2)";
  std::string psi = "0";
  Method method = Method::TSFP2;
  double tau = 1e-4;
  double T = 1.0;
  int M = -1;  // -1: default 15 for d = 1, 20 for d >= 2
  int snap_every = 0;  // steps between snapshots; 0 = final only
  std::string outdir;
  std::uint64_t mem_budget = kDefaultMemoryBudget;
  int threads = 0;  // 0 = library default
  bool use_dense = false;

  // seismic presets
  bool seismic = false;
  std::string gamma_expr;
  std::string c0_expr = "1";
  double omega0 = 1.0;
  double nu0 = 25.0;
  std::vector<double> source_center;

  int effective_M() const { return M >= 0 ? M : (dim == 1 ? 15 : 20); }
};

RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

// key = value config file mirroring the CLI flags
RunConfig load_config_file(const std::string& path, RunConfig base = {});
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

WaveProblem make_problem(const RunConfig& cfg);

struct RunSummary {
  long steps = 0;
  double final_time = 0.0;
  double wall_seconds = 0.0;
  long picard_iterations = 0;
  Field final_field;
  std::vector<std::string> snapshot_paths;
};

RunSummary run(const RunConfig& cfg);

enum class RefineAxis { Time, Space };

struct ConvergenceRow {
  double parameter = 0.0;  // tau or h
  double err_l2_plain = 0.0;
  double err_l2_weighted = 0.0;
  double observed_order = 0.0;  // NaN on first row / unstable neighbors
  bool unstable = false;
};

struct ConvergenceReport {
  RefineAxis axis = RefineAxis::Time;
  Method method = Method::TSFP2;
  std::string reference;  // descriptor of the reference solution
  std::vector<ConvergenceRow> rows;

  void write_csv(const std::string& path) const;
};

ConvergenceReport convergence(const RunConfig& cfg, RefineAxis axis, int levels);

struct BenchRow {
  std::size_t N = 0;
  std::string evaluator;
  double seconds = 0.0;  // < 0: n.a. (budget exceeded)
  std::uint64_t peak_bytes = 0;
};

std::vector<BenchRow> bench(const RunConfig& cfg, const std::vector<int>& sweep_J,
                            const std::vector<std::string>& evaluators);
void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path);

struct CflPoint {
  double h = 0.0;
  double tau_star = 0.0;
};

struct CflReport {
  std::vector<CflPoint> points;
  double slope = 0.0;  // NaN for fewer than two points
};

CflReport cfl_study(const RunConfig& cfg, const std::vector<double>& h_values,
                    double horizon = 1.0);

// Matrix-free vs dense error sweep over M.
struct CompareRow {
  int M = 0;
  double rel_sup_err = 0.0;
  double rel_l2_err = 0.0;
};
std::vector<CompareRow> compare_operators(const RunConfig& cfg, int max_M,
                                          unsigned seed = 1234);

// FWS1 binary snapshot format: magic "FWS1"; u8 dim; per axis u32 J,
// f64 a, f64 b; f64 time; N f64 values row-major.  Little-endian.
void write_snapshot(const Field& field, double time, const std::string& path);
Field read_snapshot(const std::string& path, double* time = nullptr);

// (l2 plain, l2 h-weighted, sup)
std::array<double, 3> error_norms(const Field& a, const Field& b);

}  // namespace fwave

#endif
