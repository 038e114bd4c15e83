#include "fracwave/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "fracwave/errors.hpp"

namespace fwave {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

Field sample_field(const Expr& e, const Grid& grid) {
  static const char* names[3] = {"x", "y", "z"};
  Field out(grid, 0.0);
  std::map<std::string, double> env;
  for (std::size_t j = 0; j < grid.total(); ++j) {
    const auto x = grid.point(j);
    for (int m = 0; m < grid.dim(); ++m) env[names[m]] = x[m];
    out[j] = e.eval(env);
  }
  return out;
}

Field random_field(const Grid& grid, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field out(grid, 0.0);
  for (std::size_t j = 0; j < grid.total(); ++j) out[j] = dist(rng);
  return out;
}

Method parse_method(const std::string& s) {
  if (s == "cnfp" || s == "CNFP") return Method::CNFP;
  if (s == "lffp" || s == "LFFP") return Method::LFFP;
  if (s == "tsfp2" || s == "TSFP2") return Method::TSFP2;
  throw Error("unknown method '" + s + "'");
}

const char* method_name(Method m) {
  switch (m) {
    case Method::CNFP: return "cnfp";
    case Method::LFFP: return "lffp";
    case Method::TSFP2: return "tsfp2";
  }
  return "?";
}

void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}
void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), 8);
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"example1", "soliton", "dispersion2d", "seismic-two-layer"};
}

RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  cfg.preset = name;
  if (name == "example1") {
    cfg.dim = 1;
    cfg.bounds = {{-32.0, 32.0}};
    cfg.sizes = {2048};
    cfg.order = "1";
    cfg.kappa = 1.0;
    cfg.f = "cubic";
    cfg.phi = "exp(-x^2)";
    cfg.psi = "0";
    cfg.tau = 1e-4;
    cfg.T = 1.0;
  } else if (name == "soliton") {
    cfg.dim = 1;
    cfg.bounds = {{-128.0, 128.0}};
    cfg.sizes = {4096};  // full-resolution h = 1/64 reachable via --J 16384
    cfg.order = "1";
    cfg.kappa = 1.0;
    cfg.f = "none";
    cfg.phi = "sech(3*(x+10))+sech(3*(x-10))";
    cfg.psi = "3*tanh(3*(x+10))*sech(3*(x+10))-3*tanh(3*(x-10))*sech(3*(x-10))";
    cfg.tau = 1e-3;
    cfg.T = 20.0;
  } else if (name == "dispersion2d") {
    cfg.dim = 2;
    cfg.bounds = {{-12.0, 12.0}, {-12.0, 12.0}};
    cfg.sizes = {256, 256};  // full-resolution 2048^2 reachable via --J
    cfg.order = "1";
    cfg.kappa = 0.2;
    cfg.f = "none";
    cfg.phi = "5*(exp(-20*(x^2+(y+0.1)^2))-exp(-20*(x^2+(y-0.1)^2)))";
    cfg.psi = "0";
    cfg.tau = 1e-3;
    cfg.T = 1.0;
  } else if (name == "seismic-two-layer") {
    cfg.dim = 2;
    cfg.bounds = {{0.0, 2.0}, {0.0, 2.0}};
    cfg.sizes = {200, 200};  // full-resolution 1000^2 (h = 0.002) via --J
    cfg.seismic = true;
    cfg.gamma_expr = "0.0065+0.0035*tanh(100*(y-1))";
    cfg.c0_expr = "1-(7/18)*0.5*(1+tanh(100*(y-1)))";  // 11/18 above y=1, 1 below
    cfg.omega0 = 2.0 * M_PI * 25.0;
    cfg.nu0 = 25.0;
    cfg.source_center = {1.0, 0.85};
    cfg.tau = 1e-4;
    cfg.T = 0.4;
  } else {
    throw Error("unknown preset '" + name + "'");
  }
  return cfg;
}

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
  auto as_int = [&] { return std::stoi(value); };
  auto as_double = [&] { return std::stod(value); };
  if (key == "preset") cfg = preset_config(value);
  else if (key == "dim") cfg.dim = as_int();
  else if (key == "order") cfg.order = value;
  else if (key == "kappa") cfg.kappa = as_double();
  else if (key == "f") cfg.f = value;
  else if (key == "phi") cfg.phi = value;
  else if (key == "psi") cfg.psi = value;
  else if (key == "method") cfg.method = parse_method(value);
  else if (key == "tau") cfg.tau = as_double();
  else if (key == "T") cfg.T = as_double();
  else if (key == "M") cfg.M = as_int();
  else if (key == "snap_every") cfg.snap_every = as_int();
  else if (key == "out") cfg.outdir = value;
  else if (key == "mem_budget") cfg.mem_budget = std::stoull(value);
  else if (key == "threads") cfg.threads = as_int();
  else if (key == "use_dense") cfg.use_dense = (value == "1" || value == "true");
  else if (key == "gamma") cfg.gamma_expr = value;
  else if (key == "c0") cfg.c0_expr = value;
  else if (key == "omega0") cfg.omega0 = as_double();
  else if (key == "nu0") cfg.nu0 = as_double();
  else if (key == "J") {
    cfg.sizes.clear();
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.sizes.push_back(std::stoi(tok));
    if (static_cast<int>(cfg.sizes.size()) == 1 && cfg.dim > 1)
      cfg.sizes.assign(cfg.dim, cfg.sizes[0]);
  } else if (key == "bounds") {
    // a1:b1,a2:b2,...
    cfg.bounds.clear();
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw Error("bounds entry needs a:b");
      cfg.bounds.emplace_back(std::stod(tok.substr(0, colon)),
                              std::stod(tok.substr(colon + 1)));
    }
  } else {
    throw Error("unknown config key '" + key + "'");
  }
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_config_entry(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

WaveProblem make_problem(const RunConfig& cfg) {
  if (cfg.seismic) throw Error("seismic presets are run directly, not as WaveProblem");
  Grid grid(cfg.bounds, cfg.sizes);
  WaveProblem p;
  p.grid = grid;
  p.order = sample_order(parse(cfg.order), grid);
  p.kappa = cfg.kappa;
  if (cfg.f == "none" || cfg.f == "0") p.f = Nonlinearity::none();
  else if (cfg.f == "cubic" || cfg.f == "u^3") p.f = Nonlinearity::cubic();
  else p.f = Nonlinearity::expr(parse(cfg.f));
  p.phi = sample_field(parse(cfg.phi), grid);
  p.psi = sample_field(parse(cfg.psi), grid);
  p.M = cfg.effective_M();
  return p;
}

RunSummary run(const RunConfig& cfg) {
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  RunSummary summary;
  const long steps = std::lround(cfg.T / cfg.tau);
  if (!cfg.outdir.empty()) std::filesystem::create_directories(cfg.outdir);

  auto snapshot = [&](const Field& f, double t, long n) {
    if (cfg.outdir.empty()) return;
    std::ostringstream name;
    name << cfg.outdir << "/snap_" << n << ".fws";
    write_snapshot(f, t, name.str());
    summary.snapshot_paths.push_back(name.str());
  };

  const double t0 = now_seconds();
  if (cfg.seismic) {
    Grid grid(cfg.bounds, cfg.sizes);
    SeismicMedium medium = build_medium(parse(cfg.gamma_expr), parse(cfg.c0_expr),
                                        cfg.omega0, grid, cfg.effective_M());
    Field phi = ricker_initial(cfg.nu0, cfg.source_center, grid);
    Field psi(grid, 0.0);
    SeismicStepper st(medium, phi, psi, cfg.tau);
    for (long n = st.n(); n < steps; ++n) {
      st.step();
      if (cfg.snap_every > 0 && st.n() % cfg.snap_every == 0)
        snapshot(st.current(), st.time(), st.n());
    }
    summary.steps = st.n();
    summary.final_time = st.time();
    summary.final_field = st.current();
  } else {
    WaveProblem p = make_problem(cfg);
    StepperConfig scfg;
    scfg.method = cfg.method;
    scfg.tau = cfg.tau;
    scfg.use_dense = cfg.use_dense;
    Stepper st(p, scfg);
    for (long n = st.n(); n < steps; ++n) {
      st.step();
      if (cfg.snap_every > 0 && st.n() % cfg.snap_every == 0)
        snapshot(st.current(), st.time(), st.n());
    }
    summary.steps = st.n();
    summary.final_time = st.time();
    summary.picard_iterations = st.total_picard_iterations();
    summary.final_field = st.current();
  }
  summary.wall_seconds = now_seconds() - t0;

  if (!cfg.outdir.empty()) {
    write_snapshot(summary.final_field, summary.final_time,
                   cfg.outdir + "/final.fws");
    std::ofstream meta(cfg.outdir + "/run.csv");
    meta << "# fracwave run summary v1\n";
    meta << "steps,final_time,wall_seconds,picard_iterations\n";
    meta << summary.steps << "," << summary.final_time << ","
         << summary.wall_seconds << "," << summary.picard_iterations << "\n";
  }
  return summary;
}

namespace {

// Advance cfg's problem to time T with time step tau; returns the final
// field, or nullopt-style unstable flag via the bool.
std::pair<Field, bool> integrate(const RunConfig& cfg, double tau,
                                 const std::vector<int>& sizes) {
  RunConfig c = cfg;
  c.tau = tau;
  c.sizes = sizes;
  c.outdir.clear();
  try {
    return {run(c).final_field, false};
  } catch (const BlowupDetected&) {
    return {Field(), true};
  }
}

Field restrict_to(const Field& fine, const Grid& coarse) {
  const Grid& fg = fine.grid();
  const int d = coarse.dim();
  std::array<int, 3> stride{1, 1, 1}, Jc{1, 1, 1}, Jf{1, 1, 1};
  for (int m = 0; m < d; ++m) {
    Jc[m] = coarse.size(m);
    Jf[m] = fg.size(m);
    if (Jf[m] % Jc[m] != 0)
      throw GridMismatch("fine grid is not a refinement of the coarse grid");
    stride[m] = Jf[m] / Jc[m];
  }
  Field out(coarse, 0.0);
  for (std::size_t j = 0; j < coarse.total(); ++j) {
    std::size_t rem = j, fidx = 0;
    std::array<int, 3> jm{0, 0, 0};
    for (int m = d - 1; m >= 0; --m) {
      jm[m] = static_cast<int>(rem % Jc[m]);
      rem /= Jc[m];
    }
    for (int m = 0; m < d; ++m) fidx = fidx * Jf[m] + jm[m] * stride[m];
    out[j] = fine[fidx];
  }
  return out;
}

}  // namespace

void ConvergenceReport::write_csv(const std::string& path) const {
  std::ofstream out(path);
  out << "# fracwave convergence report v1; method=" << method_name(method)
      << "; axis=" << (axis == RefineAxis::Time ? "time" : "space")
      << "; reference=" << reference << "\n";
  out << "parameter,err_l2_plain,err_l2_weighted,observed_order,unstable\n";
  out.precision(12);
  for (const auto& r : rows)
    out << r.parameter << "," << r.err_l2_plain << "," << r.err_l2_weighted
        << "," << r.observed_order << "," << (r.unstable ? 1 : 0) << "\n";
}

ConvergenceReport convergence(const RunConfig& cfg, RefineAxis axis, int levels) {
  if (levels < 3) throw Error("convergence study needs at least 3 levels");
  ConvergenceReport report;
  report.axis = axis;
  report.method = cfg.method;

  std::vector<Field> solutions(levels);
  std::vector<bool> unstable(levels, false);
  std::vector<double> params(levels);
  Field reference;

  if (axis == RefineAxis::Time) {
    for (int i = 0; i < levels; ++i) params[i] = cfg.tau / (1 << i);
    const double ref_tau = params[levels - 1] / 8.0;
    report.reference = "same method, tau = " + std::to_string(ref_tau);
    reference = integrate(cfg, ref_tau, cfg.sizes).first;
    for (int i = 0; i < levels; ++i) {
      auto [sol, bad] = integrate(cfg, params[i], cfg.sizes);
      solutions[i] = std::move(sol);
      unstable[i] = bad;
    }
  } else {
    std::vector<std::vector<int>> level_sizes(levels);
    for (int i = 0; i < levels; ++i) {
      level_sizes[i] = cfg.sizes;
      for (auto& J : level_sizes[i]) J <<= i;
      params[i] = (cfg.bounds[0].second - cfg.bounds[0].first) / level_sizes[i][0];
    }
    std::vector<int> ref_sizes = level_sizes[levels - 1];
    for (auto& J : ref_sizes) J <<= 1;
    report.reference = "same method, J doubled once more";
    reference = integrate(cfg, cfg.tau, ref_sizes).first;
    for (int i = 0; i < levels; ++i) {
      auto [sol, bad] = integrate(cfg, cfg.tau, level_sizes[i]);
      solutions[i] = std::move(sol);
      unstable[i] = bad;
    }
  }

  for (int i = 0; i < levels; ++i) {
    ConvergenceRow row;
    row.parameter = params[i];
    row.unstable = unstable[i];
    row.observed_order = std::numeric_limits<double>::quiet_NaN();
    if (!unstable[i]) {
      const Field ref_on_grid =
          axis == RefineAxis::Time ? reference
                                   : restrict_to(reference, solutions[i].grid());
      const auto norms = error_norms(solutions[i], ref_on_grid);
      row.err_l2_plain = norms[0];
      row.err_l2_weighted = norms[1];
      if (i > 0 && !unstable[i - 1] && row.err_l2_plain > 0.0) {
        const double prev = report.rows[i - 1].err_l2_plain;
        if (prev > 0.0)
          row.observed_order = std::log2(prev / row.err_l2_plain);
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

std::vector<BenchRow> bench(const RunConfig& cfg, const std::vector<int>& sweep_J,
                            const std::vector<std::string>& evaluators) {
  std::vector<BenchRow> rows;
  const Expr order_expr = parse(cfg.order);
  for (int J : sweep_J) {
    std::vector<int> sizes(cfg.dim, J);
    Grid grid(cfg.bounds, sizes);
    OrderField order = sample_order(order_expr, grid);
    Field u = random_field(grid, 99);
    const std::size_t N = grid.total();

    auto time_best = [&](auto&& fn, int repeats) {
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < repeats; ++r) {
        const double t0 = now_seconds();
        fn();
        best = std::min(best, now_seconds() - t0);
      }
      return best;
    };

    for (const auto& ev : evaluators) {
      BenchRow row;
      row.N = N;
      row.evaluator = ev;
      if (ev == "dense") {
        row.peak_bytes = static_cast<std::uint64_t>(N) * N * sizeof(double);
        try {
          DenseOperator op = assemble_dense(order, cfg.mem_budget);
          row.seconds = time_best([&] { apply_dense(op, u); }, 5);
        } catch (const MemoryBudgetExceeded& e) {
          row.seconds = -1.0;  // n.a.
          row.peak_bytes = e.required_bytes;
        }
      } else if (ev == "matrix-free" || ev == "matrix-free-serial") {
        ExpansionOperator op = build_expansion(order, cfg.effective_M());
        row.peak_bytes =
            static_cast<std::uint64_t>(2 * op.M + 1) * N * sizeof(double);
        if (ev == "matrix-free")
          row.seconds = time_best([&] { apply_matrix_free(op, u); }, 5);
        else
          row.seconds = time_best([&] { apply_matrix_free_serial(op, u); }, 5);
      } else if (ev == "toeplitz") {
        if (!is_constant(order) || grid.dim() != 1) continue;
        row.peak_bytes = static_cast<std::uint64_t>(4 * N) * sizeof(double);
        row.seconds = time_best([&] { apply_toeplitz(order, u); }, 5);
      } else {
        throw Error("unknown evaluator '" + ev + "'");
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path) {
  std::ofstream out(path);
  out << "# fracwave bench v1\n";
  out << "N,evaluator,seconds,peak_bytes\n";
  out.precision(9);
  for (const auto& r : rows) {
    out << r.N << "," << r.evaluator << ",";
    if (r.seconds < 0.0) out << "n.a.";
    else out << r.seconds;
    out << "," << r.peak_bytes << "\n";
  }
}

CflReport cfl_study(const RunConfig& cfg, const std::vector<double>& h_values,
                    double horizon) {
  CflReport report;
  for (double h : h_values) {
    RunConfig c = cfg;
    const double width = c.bounds[0].second - c.bounds[0].first;
    int J = static_cast<int>(std::lround(width / h));
    if (J % 2) ++J;
    c.sizes.assign(c.dim, J);
    WaveProblem p = make_problem(c);

    // theory-guided starting bracket around tau_c = 2 / (sqrt(kappa) mu_max^smax)
    const double mu_max = M_PI / h;
    const double tau_c =
        2.0 / (std::sqrt(c.kappa) * std::pow(mu_max, p.order.smax()));
    double lo = 0.2 * tau_c, hi = 5.0 * tau_c;
    double tau_star = 0.0;
    for (int attempt = 0; attempt < 4; ++attempt) {
      try {
        tau_star = estimate_critical_timestep(p, c.method, lo, hi, horizon);
        break;
      } catch (const BracketInvalid&) {
        lo *= 0.25;
        hi *= 4.0;
        if (attempt == 3) throw;
      }
    }
    report.points.push_back({h, tau_star});
  }

  if (report.points.size() >= 2) {
    // least-squares slope of log tau* vs log h
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(report.points.size());
    for (const auto& pt : report.points) {
      const double x = std::log(pt.h), y = std::log(pt.tau_star);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    report.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    report.slope = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

std::vector<CompareRow> compare_operators(const RunConfig& cfg, int max_M,
                                          unsigned seed) {
  Grid grid(cfg.bounds, cfg.sizes);
  OrderField order = sample_order(parse(cfg.order), grid);
  DenseOperator dense = assemble_dense(order, cfg.mem_budget);
  Field u = random_field(grid, seed);
  Field exact = apply_dense(dense, u);
  double exact_sup = 0.0, exact_l2 = 0.0;
  for (double v : exact.values()) {
    exact_sup = std::max(exact_sup, std::abs(v));
    exact_l2 += v * v;
  }
  exact_l2 = std::sqrt(exact_l2);

  std::vector<CompareRow> rows;
  for (int M = 1; M <= max_M; ++M) {
    ExpansionOperator op = build_expansion(order, M);
    Field approx = apply_matrix_free(op, u);
    double sup = 0.0, l2 = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i) {
      const double d = approx[i] - exact[i];
      sup = std::max(sup, std::abs(d));
      l2 += d * d;
    }
    rows.push_back({M, sup / exact_sup, std::sqrt(l2) / exact_l2});
  }
  return rows;
}

void write_snapshot(const Field& field, double time, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  const Grid& grid = field.grid();
  out.write("FWS1", 4);
  const std::uint8_t dim = static_cast<std::uint8_t>(grid.dim());
  out.write(reinterpret_cast<const char*>(&dim), 1);
  for (int m = 0; m < grid.dim(); ++m) {
    put_u32(out, static_cast<std::uint32_t>(grid.size(m)));
    put_f64(out, grid.lo(m));
    put_f64(out, grid.hi(m));
  }
  put_f64(out, time);
  out.write(reinterpret_cast<const char*>(field.values().data()),
            static_cast<std::streamsize>(field.size() * sizeof(double)));
  if (!out) throw Error("write failed for " + path);
}

Field read_snapshot(const std::string& path, double* time) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4)) throw TruncatedFile(path + ": missing magic");
  if (std::memcmp(magic, "FWS1", 4) != 0)
    throw BadMagic(path + ": not an FWS1 snapshot");
  std::uint8_t dim = 0;
  if (!in.read(reinterpret_cast<char*>(&dim), 1))
    throw TruncatedFile(path + ": missing dimension");
  if (dim < 1 || dim > 3) throw BadMagic(path + ": bad dimension");
  std::vector<std::pair<double, double>> bounds;
  std::vector<int> sizes;
  for (int m = 0; m < dim; ++m) {
    std::uint32_t J = 0;
    double a = 0, b = 0;
    if (!in.read(reinterpret_cast<char*>(&J), 4) ||
        !in.read(reinterpret_cast<char*>(&a), 8) ||
        !in.read(reinterpret_cast<char*>(&b), 8))
      throw TruncatedFile(path + ": truncated header");
    sizes.push_back(static_cast<int>(J));
    bounds.emplace_back(a, b);
  }
  double t = 0;
  if (!in.read(reinterpret_cast<char*>(&t), 8))
    throw TruncatedFile(path + ": missing time");
  Grid grid(bounds, sizes);
  std::vector<double> values(grid.total());
  if (!in.read(reinterpret_cast<char*>(values.data()),
               static_cast<std::streamsize>(values.size() * sizeof(double))))
    throw TruncatedFile(path + ": fewer values than header promises");
  if (time) *time = t;
  return Field(grid, std::move(values));
}

std::array<double, 3> error_norms(const Field& a, const Field& b) {
  if (!a.grid().same_as(b.grid()))
    throw GridMismatch("fields live on different grids");
  double sum2 = 0.0, sup = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum2 += d * d;
    sup = std::max(sup, std::abs(d));
  }
  const double plain = std::sqrt(sum2);
  const double weighted = std::sqrt(a.grid().cell_volume() * sum2);
  return {plain, weighted, sup};
}

}  // namespace fwave
