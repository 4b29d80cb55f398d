// Configuration and I/O tests: parse/serialize round trips, fail-closed
// behavior with line numbers, Gaussian-bump initial data against its closed
// form, and binary snapshot round trips.
#include <doctest.h>

#include "axmhd/config.hpp"
#include "axmhd/snapshot.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

using namespace axmhd;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

const char* kSample = R"(# sample configuration
[grid]
nr = 48
nz = 32
R = 1.5
Lz = 2.5

[params]
mu = 0.8
nu = 0.1
kappa = 0.0
mode = mhd_boussinesq

[step]
cfl = 0.4
dt_max = 0.004
t_end = 0.75
fixed_dt = 0.002

[output]
record_interval = 0.05
snapshot_interval = 0.25
out_dir = out_test

[solver]
tolerance = 1e-9
max_iter = 500

[diagnostics]
c_cap = 100.0
boundary_warn = 1e-5

[[initial.wtheta]]
amplitude = 1.0
r0 = 0.6
z0 = 1.0
sigma = 0.2

[[initial.H]]
amplitude = 0.5
r0 = 0.6
z0 = 1.0
sigma = 0.2

[[initial.rho]]
amplitude = 0.25
r0 = 0.6
z0 = 0.8
sigma = 0.3
)";
} // namespace

TEST_CASE("parse and serialize round trip") {
  const Config cfg = parse_config(kSample);
  CHECK(cfg.grid.nr == 48);
  CHECK(cfg.grid.Lz == 2.5);
  CHECK(cfg.params.mu == 0.8);
  CHECK(cfg.params.nu == 0.1);
  CHECK(cfg.step.fixed_dt.has_value());
  CHECK(*cfg.step.fixed_dt == 0.002);
  CHECK(cfg.output.out_dir == "out_test");
  CHECK(cfg.solver.tolerance == 1e-9);
  CHECK(cfg.diagnostics.c_cap == 100.0);
  REQUIRE(cfg.wtheta_bumps.size() == 1);
  CHECK(cfg.rho_bumps[0].sigma == 0.3);

  const Config back = parse_config(serialize_config(cfg));
  CHECK(back == cfg);
}

TEST_CASE("defaults survive omitted sections") {
  const Config cfg = parse_config("[grid]\nnr = 8\nnz = 8\nR = 1.0\nLz = 1.0\n");
  CHECK(cfg.params.mu == 1.0);
  CHECK(cfg.step.cfl == 0.5);
  CHECK_FALSE(cfg.step.fixed_dt.has_value());
  CHECK(cfg.wtheta_bumps.empty());
}

TEST_CASE("fail-closed parsing with line numbers") {
  CHECK_THROWS_WITH_AS(parse_config("[grid]\nnr = 8\nwidth = 2\n"),
                       doctest::Contains("line 3"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config("[gird]\n"), doctest::Contains("unknown section"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config("[grid]\nnr = eight\n"), doctest::Contains("line 2"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config("[grid]\nnr 8\n"), doctest::Contains("key = value"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config("[[initial.q]]\n"), doctest::Contains("unknown"),
                       std::runtime_error);
  CHECK_THROWS_AS(parse_config("[params]\nmode = sideways\n"), std::runtime_error);
}

TEST_CASE("validation rejects out-of-range values") {
  Config cfg = parse_config(kSample);
  cfg.grid.nr = 2;
  CHECK_THROWS(cfg.validate());
  cfg = parse_config(kSample);
  cfg.params.mu = -1.0;
  CHECK_THROWS(cfg.validate());
  cfg = parse_config(kSample);
  cfg.step.t_end = -1.0;
  CHECK_THROWS(cfg.validate());
  cfg = parse_config(kSample);
  cfg.solver.tolerance = 1.0;
  CHECK_THROWS(cfg.validate());
  cfg = parse_config(kSample);
  cfg.output.record_interval = -0.1;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("initial state matches the bump closed form") {
  const Config cfg = parse_config(kSample);
  const Grid g = grid_of(cfg);
  EllipticSolver solver(g, cfg.solver.tolerance);
  const State st = build_initial_state(cfg, solver);
  CHECK(st.cache_valid);

  const Bump& bw = cfg.wtheta_bumps[0];
  const Bump& bh = cfg.H_bumps[0];
  for (int j = 0; j < g.nz; j += 5)
    for (int i = 0; i < g.nr; i += 7) {
      const double r = g.r(i), z = g.z(j);
      const double dzw = std::remainder(z - bw.z0, g.Lz);
      const double ew = bw.amplitude *
                        std::exp(-((r - bw.r0) * (r - bw.r0) + dzw * dzw) / (bw.sigma * bw.sigma));
      CHECK(st.wtheta(i, j) == doctest::Approx(r * ew).epsilon(1e-13)); // odd: radial prefactor
      const double dzh = std::remainder(z - bh.z0, g.Lz);
      const double eh = bh.amplitude *
                        std::exp(-((r - bh.r0) * (r - bh.r0) + dzh * dzh) / (bh.sigma * bh.sigma));
      CHECK(st.H(i, j) == doctest::Approx(eh).epsilon(1e-13));
    }

  // periodic minimum image: a bump at z0 = 0 is symmetric across the seam
  Config cper = cfg;
  cper.rho_bumps = {{1.0, 0.6, 0.0, 0.2}};
  const State sper = build_initial_state(cper, solver);
  CHECK(sper.rho(10, g.nz - 1) == doctest::Approx(sper.rho(10, 1)).epsilon(1e-10));
}

TEST_CASE("snapshot round trip restores fields and time") {
  const Config cfg = parse_config(kSample);
  const Grid g = grid_of(cfg);
  EllipticSolver solver(g, cfg.solver.tolerance);
  State st = build_initial_state(cfg, solver);
  st.t = 0.375;

  const std::string path = "test_roundtrip.fld";
  write_snapshot(path, st);
  const State back = read_snapshot(path);
  std::remove(path.c_str());

  CHECK(back.t == st.t);
  CHECK(back.grid() == g);
  CHECK(back.cache_valid);
  CHECK(lp_norm(back.wtheta - st.wtheta, kInf) == 0.0);
  CHECK(lp_norm(back.H - st.H, kInf) == 0.0);
  CHECK(lp_norm(back.rho - st.rho, kInf) == 0.0);
  CHECK(lp_norm(back.psi - st.psi, kInf) == 0.0);
  CHECK(lp_norm(back.ur - st.ur, kInf) == 0.0);
  CHECK(lp_norm(back.uz - st.uz, kInf) == 0.0);
  // derived cache entries rebuilt from the stored arrays
  CHECK(lp_norm(back.htheta - st.htheta, kInf) < 1e-14);
  CHECK(lp_norm(back.Omega - st.Omega, kInf) < 1e-12);
}

TEST_CASE("snapshot reader rejects corrupted headers") {
  const std::string path = "test_bad.fld";
  {
    FILE* f = std::fopen(path.c_str(), "wb");
    std::fputs("not a snapshot\n", f);
    std::fclose(f);
  }
  CHECK_THROWS(read_snapshot(path));
  std::remove(path.c_str());
}
