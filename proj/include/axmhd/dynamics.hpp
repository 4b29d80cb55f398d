// Time integration of the reduced system in vorticity form: monotone
// donor-cell transport of H and rho, the explicit wtheta update with
// stretching, Lorentz and buoyancy sources, and backward-Euler diffusion.
//
// Transport uses face mass fluxes derived from corner values of the
// streamfunction, so the discrete face divergence vanishes identically and
// the update is a convex combination of old cell values: the maximum
// principle and Lp non-increase hold to round-off, and cell mass
// integral(f) is conserved exactly.
#pragma once

#include "axmhd/elliptic.hpp"
#include "axmhd/state.hpp"

#include <functional>
#include <optional>

namespace axmhd {

struct StepControl {
  double cfl_advect = 0.5;
  double dt_max = 0.01;
  double t_end = 1.0;
  std::optional<double> fixed_dt;

  void validate() const;
};

// Mass fluxes of r*u through cell faces: mr(i,j) through the radial face at
// rface(i) of cell (i,j) (i in [0, nr]), mz(i,j) through the axial face
// between cells (i,j-1) and (i,j) (j in [0, nz), periodic).
// mr is flux per unit z (r u^r), mz is flux of r u^z.
struct FaceFlux {
  Grid grid;
  std::vector<double> mr; // (nr+1) * nz, i fastest
  std::vector<double> mz; // nr * nz, i fastest

  double& Mr(int i, int j) { return mr[static_cast<std::size_t>(j) * (grid.nr + 1) + i]; }
  double Mr(int i, int j) const { return mr[static_cast<std::size_t>(j) * (grid.nr + 1) + i]; }
  double& Mz(int i, int j) { return mz[static_cast<std::size_t>(j) * grid.nr + i]; }
  double Mz(int i, int j) const { return mz[static_cast<std::size_t>(j) * grid.nr + i]; }

  // Exactly divergence-free fluxes from corner-interpolated psi. Corner psi
  // on the axis and on the outer wall is zero, so no mass crosses either.
  static FaceFlux from_stream(const ScalarField& psi);

  // Face-averaged fluxes from cell-centered velocities (test utility; only
  // divergence-free if (ur, uz) is). Axis and outer wall fluxes are zero.
  static FaceFlux from_velocity(const ScalarField& ur, const ScalarField& uz);

  // Largest sum of outgoing flux fractions over cells; dt * this must stay
  // <= 1 for the donor-cell update to be a convex combination.
  double max_outflow_rate() const;
};

// dt = min(dt_max, cfl / max(|ur|/dr + |uz|/dz)); dt_max when u == 0.
double cfl_timestep(const State& state, const StepControl& ctrl);

// One donor-cell upwind step of f_t + u.grad f = 0 against face fluxes.
// Throws if dt violates the convex-combination bound.
ScalarField advect(const ScalarField& f, const FaceFlux& flux, double dt);

// Explicit part of the wtheta equation:
// -(ur d_r + uz d_z) wtheta + (ur/r) wtheta - d_z(r H^2) - d_r(rho).
ScalarField wtheta_explicit_rhs(const State& state);

// Operator-split step: transport (H, rho) -> Rayleigh-Benard source ->
// explicit wtheta update -> implicit diffusion -> cache rebuild.
State step(const State& state, const PhysParams& params, const StepControl& ctrl,
           const EllipticSolver& solver, double dt);

// Integrates to ctrl.t_end. record_cb fires at t = 0, every record_interval,
// and at t_end; snapshot_cb every snapshot_interval (0 disables) and at both
// endpoints. Callbacks receive states with valid caches.
void run(State state, const PhysParams& params, const StepControl& ctrl,
         const EllipticSolver& solver, double record_interval, double snapshot_interval,
         const std::function<void(const State&, double /*dt_of_last_step*/, const State* /*prev*/)>& record_cb,
         const std::function<void(const State&)>& snapshot_cb);

} // namespace axmhd
