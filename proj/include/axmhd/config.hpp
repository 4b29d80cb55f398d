// Run configuration: a flat, typed, INI/TOML-shaped text format with
// fail-closed validation (unknown sections or keys are errors).
//
//   [grid]            nr, nz, R, Lz
//   [params]          mu, nu, kappa, mode
//   [step]            cfl, dt_max, t_end, fixed_dt (optional)
//   [output]          record_interval, snapshot_interval, out_dir
//   [solver]          tolerance, max_iter
//   [diagnostics]     c_cap, boundary_warn
//   [[initial.wtheta]] / [[initial.H]] / [[initial.rho]]
//                     amplitude, r0, z0, sigma   (repeatable bump tables)
//
// Odd fields (wtheta) get an automatic radial prefactor r so the axis parity
// is respected; the z offset uses the periodic minimum image.
#pragma once

#include "axmhd/elliptic.hpp"
#include "axmhd/state.hpp"

#include <optional>
#include <string>
#include <vector>

namespace axmhd {

struct Bump {
  double amplitude = 0.0;
  double r0 = 0.0;
  double z0 = 0.0;
  double sigma = 1.0;
  bool operator==(const Bump&) const = default;
};

struct Config {
  struct {
    int nr = 64, nz = 64;
    double R = 2.0, Lz = 2.0;
  } grid;
  PhysParams params;
  struct {
    double cfl = 0.5;
    double dt_max = 0.01;
    double t_end = 1.0;
    std::optional<double> fixed_dt;
  } step;
  struct {
    double record_interval = 0.05;
    double snapshot_interval = 0.5;
    std::string out_dir = "out";
  } output;
  struct {
    double tolerance = 1e-10;
    int max_iter = 10000;
  } solver;
  struct {
    double c_cap = 1e3;
    double boundary_warn = 1e-6;
  } diagnostics;
  std::vector<Bump> wtheta_bumps, H_bumps, rho_bumps;

  bool operator==(const Config&) const;

  void validate() const;
};

// Throws std::runtime_error with a line/key message on any parse or
// validation failure.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);
std::string serialize_config(const Config& cfg);

// Gaussian-bump initial state on the config's grid; cache rebuilt.
State build_initial_state(const Config& cfg, const EllipticSolver& solver);

Grid grid_of(const Config& cfg);

} // namespace axmhd
