#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "fracwave/errors.hpp"
#include "fracwave/harness.hpp"

using namespace fwave;

namespace {

std::string tmp_path(const char* name) {
  return std::string("fwtest_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("snapshot roundtrip is bitwise exact") {
  Grid g = build_grid({{-3.0, 5.0}, {0.0, 1.0}}, {16, 8});
  std::mt19937_64 rng(99);
  std::normal_distribution<double> dist;
  Field u(g);
  for (auto& v : u.values()) v = dist(rng);

  const std::string path = tmp_path("roundtrip.fws1");
  write_snapshot(u, 1.25, path);
  double t = 0.0;
  Field back = read_snapshot(path, &t);
  CHECK(t == 1.25);
  CHECK(back.grid().same_as(g));
  for (std::size_t j = 0; j < g.total(); ++j) CHECK(back[j] == u[j]);
  std::remove(path.c_str());
}

TEST_CASE("snapshot error handling") {
  const std::string path = tmp_path("bad.fws1");
  SUBCASE("bad magic") {
    std::ofstream out(path, std::ios::binary);
    out << "NOPE" << std::string(64, '\0');
    out.close();
    CHECK_THROWS_AS(read_snapshot(path), BadMagic);
  }
  SUBCASE("truncated payload") {
    Grid g = build_grid({{0.0, 1.0}}, {8});
    Field u(g, 1.0);
    write_snapshot(u, 0.0, path);
    std::string bytes = slurp(path);
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 12));
    out.close();
    CHECK_THROWS_AS(read_snapshot(path), TruncatedFile);
  }
  std::remove(path.c_str());
}

TEST_CASE("golden snapshot fixture") {
  // committed FWS1 file: 1D, J = 8 on [0, 1], time 0.5, values j/8
  double t = 0.0;
  Field u = read_snapshot("data/golden.fws1", &t);
  CHECK(t == 0.5);
  CHECK(u.grid().dim() == 1);
  CHECK(u.grid().size(0) == 8);
  CHECK(u.grid().lo(0) == 0.0);
  CHECK(u.grid().hi(0) == 1.0);
  for (std::size_t j = 0; j < 8; ++j)
    CHECK(u[j] == static_cast<double>(j) / 8.0);

  // re-serializing reproduces the committed bytes exactly
  const std::string path = tmp_path("golden_copy.fws1");
  write_snapshot(u, t, path);
  CHECK(slurp(path) == slurp("data/golden.fws1"));
  std::remove(path.c_str());
}

TEST_CASE("error norms") {
  Grid g = build_grid({{0.0, 2.0}}, {16});  // h = 0.125, N = 16
  Field a(g, 1.0), b(g, 0.0);
  auto [l2, l2w, sup] = error_norms(a, b);
  CHECK(l2 == doctest::Approx(4.0).epsilon(1e-15));           // sqrt(16)
  CHECK(l2w == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));  // sqrt(volume)
  CHECK(sup == doctest::Approx(1.0).epsilon(1e-15));

  auto zero = error_norms(a, a);
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
  CHECK(zero[2] == 0.0);

  Grid g2 = build_grid({{0.0, 2.0}}, {32});
  CHECK_THROWS_AS(error_norms(a, Field(g2, 1.0)), GridMismatch);
}

TEST_CASE("presets") {
  RunConfig e1 = preset_config("example1");
  CHECK(e1.dim == 1);
  CHECK(e1.bounds[0].first == -32.0);
  CHECK(e1.bounds[0].second == 32.0);
  CHECK(e1.f == "cubic");
  CHECK(e1.kappa == 1.0);
  CHECK(e1.effective_M() == 15);

  RunConfig d2 = preset_config("dispersion2d");
  CHECK(d2.dim == 2);
  CHECK(d2.kappa == 0.2);
  CHECK(d2.effective_M() == 20);

  RunConfig seis = preset_config("seismic-two-layer");
  CHECK(seis.seismic);
  CHECK(seis.source_center == std::vector<double>{1.0, 0.85});

  CHECK_THROWS_AS(preset_config("nope"), Error);
}

TEST_CASE("config file parsing") {
  const std::string path = tmp_path("config.txt");
  {
    std::ofstream out(path);
    out << "# comment line\n"
        << "preset = example1\n"
        << "order = 1+0.3*sin(pi*x/8)\n"
        << "J = 512\n"
        << "tau = 0.002\n"
        << "method = cnfp\n"
        << "bounds = -16:16\n"
        << "\n";
  }
  RunConfig cfg = load_config_file(path);
  CHECK(cfg.order == "1+0.3*sin(pi*x/8)");
  CHECK(cfg.sizes == std::vector<int>{512});
  CHECK(cfg.tau == 0.002);
  CHECK(cfg.method == Method::CNFP);
  CHECK(cfg.bounds[0].first == -16.0);
  CHECK(cfg.f == "cubic");  // inherited from the preset
  std::remove(path.c_str());
}

TEST_CASE("run drives a short simulation deterministically") {
  RunConfig cfg = preset_config("example1");
  cfg.sizes = {256};
  cfg.tau = 1e-3;
  cfg.T = 0.05;
  RunSummary s1 = run(cfg);
  RunSummary s2 = run(cfg);
  CHECK(s1.steps == 50);
  CHECK(s1.final_time == doctest::Approx(0.05));
  for (std::size_t j = 0; j < s1.final_field.size(); ++j)
    CHECK(s1.final_field[j] == s2.final_field[j]);
}

TEST_CASE("symmetric problem keeps a symmetric field") {
  RunConfig cfg = preset_config("example1");
  cfg.sizes = {512};
  cfg.tau = 1e-3;
  cfg.T = 0.5;
  RunSummary s = run(cfg);
  const std::size_t N = s.final_field.size();
  // grid points x_j and x_{N-j} are mirror images about x = 0
  double asym = 0.0;
  for (std::size_t j = 1; j < N; ++j)
    asym = std::max(asym, std::abs(s.final_field[j] - s.final_field[N - j]));
  CHECK(asym < 1e-10);
}

TEST_CASE("variable order breaks the symmetry") {
  RunConfig cfg = preset_config("example1");
  cfg.sizes = {512};
  cfg.order = "1+0.3*sin(pi*x/8)";
  cfg.tau = 1e-3;
  cfg.T = 0.5;
  RunSummary s = run(cfg);
  const std::size_t N = s.final_field.size();
  double asym = 0.0;
  for (std::size_t j = 1; j < N; ++j)
    asym = std::max(asym, std::abs(s.final_field[j] - s.final_field[N - j]));
  CHECK(asym > 1e-3);
}

TEST_CASE("convergence driver computes orders near 2 in time") {
  RunConfig cfg = preset_config("example1");
  cfg.bounds = {{-16.0, 16.0}};
  cfg.sizes = {256};
  cfg.method = Method::LFFP;
  cfg.tau = 1.0 / 64.0;
  cfg.T = 0.5;
  ConvergenceReport r = convergence(cfg, RefineAxis::Time, 3);
  REQUIRE(r.rows.size() == 3);
  CHECK(std::isnan(r.rows[0].observed_order));
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    CHECK_FALSE(r.rows[i].unstable);
    CHECK(r.rows[i].observed_order > 1.7);
    CHECK(r.rows[i].observed_order < 2.3);
  }
}

TEST_CASE("bench handles budget overruns as data") {
  RunConfig cfg;
  cfg.dim = 2;
  cfg.bounds = {{-12.0, 12.0}, {-12.0, 12.0}};
  cfg.sizes = {256, 256};
  cfg.order = "1";
  cfg.mem_budget = 32ull << 30;
  auto rows = bench(cfg, {256}, {"dense"});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].seconds < 0.0);
  CHECK(rows[0].peak_bytes == 34359738368ull);
}

TEST_CASE("csv reports carry a version header") {
  RunConfig cfg = preset_config("example1");
  cfg.bounds = {{-16.0, 16.0}};
  cfg.sizes = {128};
  cfg.method = Method::LFFP;
  cfg.tau = 1.0 / 32.0;
  cfg.T = 0.25;
  ConvergenceReport r = convergence(cfg, RefineAxis::Time, 3);
  const std::string path = tmp_path("report.csv");
  r.write_csv(path);
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("# fracwave", 0) == 0);
  std::remove(path.c_str());
}

}  // TEST_SUITE
