// Simulation state, velocity recovery from vorticity, derived fields and
// the pointwise vector-calculus identities for the swirl-free axisymmetric
// system. Velocity is always derived from wtheta through the streamfunction,
// never evolved, so discrete incompressibility holds by construction.
#pragma once

#include "axmhd/elliptic.hpp"
#include "axmhd/grid.hpp"

#include <string>

namespace axmhd {

enum class SystemMode { mhd_boussinesq, rayleigh_benard };

struct PhysParams {
  double mu = 1.0;    // viscosity
  double nu = 0.0;    // magnetic resistivity
  double kappa = 0.0; // thermal diffusivity
  SystemMode mode = SystemMode::mhd_boussinesq;

  void validate() const;
};

std::string to_string(SystemMode m);
SystemMode mode_from_string(const std::string& s);

struct State {
  double t = 0.0;
  ScalarField wtheta; // odd, azimuthal vorticity
  ScalarField H;      // even, htheta / r
  ScalarField rho;    // even, temperature fluctuation

  // Derived cache, valid when cache_valid is set.
  ScalarField psi;    // even
  ScalarField ur;     // odd
  ScalarField uz;     // even
  ScalarField htheta; // odd, r * H
  ScalarField Omega;  // even, wtheta / r
  bool cache_valid = false;

  State() = default;
  State(const Grid& g);

  const Grid& grid() const { return wtheta.grid(); }

  // Recomputes psi, ur, uz, htheta, Omega from (wtheta, H).
  void rebuild_cache(const EllipticSolver& solver);
};

// psi = solve_stream(wtheta); ur = -d_dz(psi)/r; uz = d_dr(psi)/r.
void velocity_from_wtheta(const EllipticSolver& solver, const ScalarField& wtheta,
                          ScalarField& ur, ScalarField& uz, ScalarField& psi);

// (1/r) d_dr(r ur) + d_dz(uz), same stencils as the recovery path.
ScalarField divergence(const ScalarField& ur, const ScalarField& uz);

// d_dz(ur) - d_dr(uz).
ScalarField curl_theta(const ScalarField& ur, const ScalarField& uz);

// Relative L2 mismatch of the two forms of the azimuthal Lorentz curl,
// -2 H d_z(htheta) versus -d_z(H htheta), for h = htheta e_theta.
double lorentz_curl_residual(const ScalarField& H);

} // namespace axmhd
