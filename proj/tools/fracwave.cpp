// Command-line driver: simulation runs, convergence studies, operator
// benchmarks, CFL sweeps, and matrix-free vs dense comparisons.

#include <cmath>
#include <iostream>

#include "CLI11.hpp"
#include "fracwave/harness.hpp"

namespace {

using namespace fwave;

struct CommonFlags {
  std::string preset;
  std::string config_file;
  std::string method;
  std::string order;
  std::vector<int> J;
  std::string bounds;
  double tau = -1.0;
  double T = -1.0;
  int M = -2;
  double kappa = std::nan("");
  std::string out;
  int threads = 0;
  std::uint64_t mem_budget = 0;
};

void add_common(CLI::App* cmd, CommonFlags& fl) {
  cmd->add_option("--preset", fl.preset, "preset name: example1, soliton, dispersion2d, seismic-two-layer");
  cmd->add_option("--config", fl.config_file, "key = value config file");
  cmd->add_option("--method", fl.method, "cnfp | lffp | tsfp2");
  cmd->add_option("--order", fl.order, "order expression s(x), e.g. \"1+0.3*sin(pi*x/8)\"");
  cmd->add_option("--J", fl.J, "points per axis")->delimiter(',');
  cmd->add_option("--bounds", fl.bounds, "domain as a1:b1,a2:b2,...");
  cmd->add_option("--tau", fl.tau, "time step");
  cmd->add_option("--T", fl.T, "final time");
  cmd->add_option("--M", fl.M, "expansion truncation (default 15 in 1D, 20 otherwise)");
  cmd->add_option("--kappa", fl.kappa, "wave coefficient kappa");
  cmd->add_option("--out", fl.out, "output directory");
  cmd->add_option("--threads", fl.threads, "OpenMP thread count (0 = default)");
  cmd->add_option("--mem-budget", fl.mem_budget, "dense-operator memory budget in bytes");
}

RunConfig build_config(const CommonFlags& fl) {
  RunConfig cfg;
  if (!fl.preset.empty()) cfg = preset_config(fl.preset);
  if (!fl.config_file.empty()) cfg = load_config_file(fl.config_file, cfg);
  if (!fl.method.empty()) apply_config_entry(cfg, "method", fl.method);
  if (!fl.order.empty()) cfg.order = fl.order;
  if (!fl.J.empty()) {
    cfg.sizes = fl.J;
    if (static_cast<int>(cfg.sizes.size()) == 1 && cfg.dim > 1)
      cfg.sizes.assign(cfg.dim, cfg.sizes[0]);
  }
  if (!fl.bounds.empty()) apply_config_entry(cfg, "bounds", fl.bounds);
  if (fl.tau > 0.0) cfg.tau = fl.tau;
  if (fl.T > 0.0) cfg.T = fl.T;
  if (fl.M >= -1) cfg.M = fl.M;
  if (!std::isnan(fl.kappa)) cfg.kappa = fl.kappa;
  if (!fl.out.empty()) cfg.outdir = fl.out;
  if (fl.threads > 0) cfg.threads = fl.threads;
  if (fl.mem_budget > 0) cfg.mem_budget = fl.mem_budget;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracwave: pseudospectral solver for wave equations with a "
               "variable-order fractional Laplacian"};
  app.require_subcommand(1);

  CommonFlags fl;

  auto* cmd_run = app.add_subcommand("run", "integrate a problem and write snapshots");
  add_common(cmd_run, fl);
  int snap_every = 0;
  cmd_run->add_option("--snap-every", snap_every, "steps between snapshots (0 = final only)");

  auto* cmd_conv = app.add_subcommand("convergence", "refinement study with observed orders");
  add_common(cmd_conv, fl);
  std::string axis = "time";
  int levels = 4;
  cmd_conv->add_option("--axis", axis, "time | space");
  cmd_conv->add_option("--levels", levels, "number of refinement levels (>= 3)");

  auto* cmd_bench = app.add_subcommand("bench", "time evaluators over a size sweep");
  add_common(cmd_bench, fl);
  std::vector<int> sweep{1024, 2048, 4096, 8192};
  std::vector<std::string> evaluators{"dense", "matrix-free", "matrix-free-serial"};
  cmd_bench->add_option("--sweep", sweep, "points-per-axis values to sweep")
      ->delimiter(',');
  cmd_bench->add_option("--evaluators", evaluators,
                        "subset of: dense matrix-free matrix-free-serial toeplitz")
      ->delimiter(',');

  auto* cmd_cfl = app.add_subcommand("cfl", "critical time step versus mesh size");
  add_common(cmd_cfl, fl);
  std::vector<double> h_values{0.25, 0.125, 0.0625, 0.03125};
  double horizon = 1.0;
  cmd_cfl->add_option("--h-values", h_values, "mesh sizes to sweep")
      ->delimiter(',');
  cmd_cfl->add_option("--horizon", horizon, "integration horizon per stability trial");

  auto* cmd_cmp = app.add_subcommand("compare-op", "matrix-free vs dense error sweep over M");
  add_common(cmd_cmp, fl);
  int max_M = 15;
  cmd_cmp->add_option("--max-M", max_M, "largest truncation count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      RunConfig cfg = build_config(fl);
      cfg.snap_every = snap_every;
      RunSummary s = run(cfg);
      std::cout << "steps=" << s.steps << " T=" << s.final_time
                << " wall_s=" << s.wall_seconds;
      if (s.picard_iterations > 0)
        std::cout << " picard_iters=" << s.picard_iterations;
      std::cout << "\n";
    } else if (cmd_conv->parsed()) {
      RunConfig cfg = build_config(fl);
      const RefineAxis ax = (axis == "space") ? RefineAxis::Space : RefineAxis::Time;
      ConvergenceReport report = convergence(cfg, ax, levels);
      std::cout << "# parameter  err_l2_plain  err_l2_weighted  order\n";
      for (const auto& r : report.rows) {
        if (r.unstable)
          std::cout << r.parameter << "  unstable\n";
        else
          std::cout << r.parameter << "  " << r.err_l2_plain << "  "
                    << r.err_l2_weighted << "  " << r.observed_order << "\n";
      }
      if (!cfg.outdir.empty())
        report.write_csv(cfg.outdir + "/convergence.csv");
    } else if (cmd_bench->parsed()) {
      RunConfig cfg = build_config(fl);
      auto rows = bench(cfg, sweep, evaluators);
      for (const auto& r : rows) {
        std::cout << r.N << "  " << r.evaluator << "  ";
        if (r.seconds < 0) std::cout << "n.a.";
        else std::cout << r.seconds << " s";
        std::cout << "  " << r.peak_bytes << " B\n";
      }
      if (!cfg.outdir.empty()) write_bench_csv(rows, cfg.outdir + "/bench.csv");
    } else if (cmd_cfl->parsed()) {
      RunConfig cfg = build_config(fl);
      CflReport report = cfl_study(cfg, h_values, horizon);
      for (const auto& p : report.points)
        std::cout << "h=" << p.h << "  tau*=" << p.tau_star << "\n";
      if (report.points.size() >= 2)
        std::cout << "log-log slope = " << report.slope << "\n";
    } else if (cmd_cmp->parsed()) {
      RunConfig cfg = build_config(fl);
      auto rows = compare_operators(cfg, max_M);
      std::cout << "# M  rel_sup_err  rel_l2_err\n";
      for (const auto& r : rows)
        std::cout << r.M << "  " << r.rel_sup_err << "  " << r.rel_l2_err << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
