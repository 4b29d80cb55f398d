#include "axmhd/dynamics.hpp"

#include "axmhd/threading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace axmhd {

void StepControl::validate() const {
  if (!(cfl_advect > 0.0 && cfl_advect <= 1.0))
    throw std::invalid_argument("StepControl: cfl_advect must lie in (0, 1]");
  if (!(dt_max > 0.0)) throw std::invalid_argument("StepControl: dt_max must be positive");
  if (t_end < 0.0) throw std::invalid_argument("StepControl: t_end must be non-negative");
  if (fixed_dt && !(*fixed_dt > 0.0))
    throw std::invalid_argument("StepControl: fixed_dt must be positive");
}

FaceFlux FaceFlux::from_stream(const ScalarField& psi) {
  const Grid& g = psi.grid();
  const int nr = g.nr, nz = g.nz;
  FaceFlux fl;
  fl.grid = g;
  fl.mr.assign(static_cast<std::size_t>(nr + 1) * nz, 0.0);
  fl.mz.assign(g.cells(), 0.0);
  // Corner psi at (rface(i), z-face j): mean of the 4 neighbor cells; zero on
  // the axis (psi ~ r^2) and on the Dirichlet outer wall.
  auto corner = [&](int i, int j) -> double {
    if (i == 0 || i == nr) return 0.0;
    const int jm = (j + nz - 1) % nz;
    return 0.25 * (psi(i - 1, jm) + psi(i, jm) + psi(i - 1, j) + psi(i, j));
  };
  for (int j = 0; j < nz; ++j) {
    const int jp = (j + 1) % nz;
    for (int i = 1; i < nr; ++i)
      fl.Mr(i, j) = -(corner(i, jp) - corner(i, j)); // integral of r u^r dz
    for (int i = 0; i < nr; ++i)
      fl.Mz(i, j) = corner(i + 1, j) - corner(i, j); // integral of r u^z dr
  }
  return fl;
}

FaceFlux FaceFlux::from_velocity(const ScalarField& ur, const ScalarField& uz) {
  const Grid& g = ur.grid();
  const int nr = g.nr, nz = g.nz;
  FaceFlux fl;
  fl.grid = g;
  fl.mr.assign(static_cast<std::size_t>(nr + 1) * nz, 0.0);
  fl.mz.assign(g.cells(), 0.0);
  for (int j = 0; j < nz; ++j) {
    const int jm = (j + nz - 1) % nz;
    for (int i = 1; i < nr; ++i)
      fl.Mr(i, j) = g.rface(i) * 0.5 * (ur(i - 1, j) + ur(i, j)) * g.dz;
    for (int i = 0; i < nr; ++i)
      fl.Mz(i, j) = g.r(i) * 0.5 * (uz(i, jm) + uz(i, j)) * g.dr;
  }
  return fl;
}

double FaceFlux::max_outflow_rate() const {
  const Grid& g = grid;
  const int nr = g.nr, nz = g.nz;
  double worst = 0.0;
  for (int j = 0; j < nz; ++j) {
    const int jp = (j + 1) % nz;
    for (int i = 0; i < nr; ++i) {
      const double vol = g.r(i) * g.dr * g.dz;
      const double out = std::max(Mr(i + 1, j), 0.0) + std::max(-Mr(i, j), 0.0) +
                         std::max(Mz(i, jp), 0.0) + std::max(-Mz(i, j), 0.0);
      worst = std::max(worst, out / vol);
    }
  }
  return worst;
}

double cfl_timestep(const State& state, const StepControl& ctrl) {
  if (!state.cache_valid) throw std::logic_error("cfl_timestep: state cache not valid");
  const Grid& g = state.grid();
  double rate = 0.0;
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nr; ++i)
      rate = std::max(rate, std::abs(state.ur(i, j)) / g.dr + std::abs(state.uz(i, j)) / g.dz);
  if (rate == 0.0) return ctrl.dt_max;
  return std::min(ctrl.dt_max, ctrl.cfl_advect / rate);
}

ScalarField advect(const ScalarField& f, const FaceFlux& flux, double dt) {
  const Grid& g = f.grid();
  if (!(flux.grid == g)) throw std::invalid_argument("advect: flux grid mismatch");
  const int nr = g.nr, nz = g.nz;
  ScalarField out(g, f.parity());
  double worst = 0.0;
  for (int j = 0; j < nz; ++j) {
    const int jp = (j + 1) % nz;
    const int jm = (j + nz - 1) % nz;
    for (int i = 0; i < nr; ++i) {
      const double vol = g.r(i) * g.dr * g.dz;
      const double mrR = flux.Mr(i + 1, j); // face toward i+1
      const double mrL = flux.Mr(i, j);     // face toward i-1 (positive = inflow)
      const double mzT = flux.Mz(i, jp);    // face toward j+1
      const double mzB = flux.Mz(i, j);     // face toward j-1 (positive = inflow)
      const double outflow = std::max(mrR, 0.0) + std::max(-mrL, 0.0) + std::max(mzT, 0.0) +
                             std::max(-mzB, 0.0);
      worst = std::max(worst, dt * outflow / vol);
      const double fR = mrR > 0.0 ? f(i, j) : f(i + 1 < nr ? i + 1 : i, j);
      const double fL = mrL > 0.0 ? f(i > 0 ? i - 1 : i, j) : f(i, j);
      const double fT = mzT > 0.0 ? f(i, j) : f(i, jp);
      const double fB = mzB > 0.0 ? f(i, jm) : f(i, j);
      out(i, j) = f(i, j) - dt / vol * (mrR * fR - mrL * fL + mzT * fT - mzB * fB);
    }
  }
  if (worst > 1.0 + 1e-12)
    throw std::runtime_error("advect: CFL violation, outflow fraction " + std::to_string(worst));
  return out;
}

ScalarField wtheta_explicit_rhs(const State& state) {
  if (!state.cache_valid) throw std::logic_error("wtheta_explicit_rhs: state cache not valid");
  ScalarField rhs = multiply(state.ur, d_dr(state.wtheta));
  rhs += multiply(state.uz, d_dz(state.wtheta));
  rhs *= -1.0;
  rhs += multiply(div_axis(state.ur), state.wtheta);    // stretching (u^r/r) wtheta
  rhs -= d_dz(multiply_r(multiply(state.H, state.H)));  // Lorentz: -d_z((htheta)^2/r)
  rhs -= d_dr(state.rho);                               // buoyancy curl
  rhs.set_parity(Parity::odd);
  return rhs;
}

State step(const State& state, const PhysParams& params, const StepControl& ctrl,
           const EllipticSolver& solver, double dt) {
  if (!state.cache_valid) throw std::logic_error("step: state cache not valid");
  params.validate();
  ctrl.validate();
  const FaceFlux flux = FaceFlux::from_stream(state.psi);

  State next(state.grid());
  next.t = state.t + dt;
  // (1) monotone transport of the purely advected fields
  next.H = advect(state.H, flux, dt);
  next.rho = advect(state.rho, flux, dt);
  if (params.mode == SystemMode::rayleigh_benard) {
    // source u^3 = u^z, added after transport with beginning-of-step velocity
    ScalarField src = state.uz;
    src *= dt;
    next.rho += src;
  }
  // (2) explicit wtheta update with beginning-of-step velocity
  ScalarField wstar = wtheta_explicit_rhs(state);
  wstar *= dt;
  wstar += state.wtheta;
  // (3) backward-Euler viscous solve
  next.wtheta = solver.solve_helmholtz(OpTag::helmholtz_vort, params.mu * dt, wstar);
  // (4) optional resistive / diffusive solves
  if (params.nu > 0.0)
    next.H = solver.solve_helmholtz(OpTag::helmholtz5, params.nu * dt, next.H);
  if (params.kappa > 0.0)
    next.rho = solver.solve_helmholtz(OpTag::helmholtz_flat, params.kappa * dt, next.rho);
  // (5) velocity recovery
  next.rebuild_cache(solver);
  return next;
}

void run(State state, const PhysParams& params, const StepControl& ctrl,
         const EllipticSolver& solver, double record_interval, double snapshot_interval,
         const std::function<void(const State&, double, const State*)>& record_cb,
         const std::function<void(const State&)>& snapshot_cb) {
  ctrl.validate();
  if (!(record_interval > 0.0)) throw std::invalid_argument("run: record_interval must be positive");
  if (snapshot_interval < 0.0) throw std::invalid_argument("run: snapshot_interval must be non-negative");
  if (!state.cache_valid) state.rebuild_cache(solver);

  if (record_cb) record_cb(state, 0.0, nullptr);
  if (snapshot_cb) snapshot_cb(state);
  if (ctrl.t_end <= state.t) return;

  const double eps = 1e-12 * std::max(1.0, ctrl.t_end);
  long next_rec = 1;
  long next_snap = 1;
  double t0 = state.t;
  State prev = state;
  while (state.t < ctrl.t_end - eps) {
    double dt = ctrl.fixed_dt ? *ctrl.fixed_dt : cfl_timestep(state, ctrl);
    if (!ctrl.fixed_dt) {
      // the face-flux outflow bound is the binding stability constraint
      const double rate = FaceFlux::from_stream(state.psi).max_outflow_rate();
      if (rate > 0.0) dt = std::min(dt, ctrl.cfl_advect / rate);
    }
    double t_next = ctrl.t_end;
    t_next = std::min(t_next, t0 + next_rec * record_interval);
    if (snapshot_interval > 0.0) t_next = std::min(t_next, t0 + next_snap * snapshot_interval);
    if (state.t + dt > t_next - eps) dt = t_next - state.t;

    prev = state;
    state = step(state, params, ctrl, solver, dt);

    const bool at_end = state.t >= ctrl.t_end - eps;
    bool rec_due = std::abs(state.t - (t0 + next_rec * record_interval)) <= eps || at_end;
    bool snap_due = snapshot_interval > 0.0 &&
                    std::abs(state.t - (t0 + next_snap * snapshot_interval)) <= eps;
    if (rec_due) {
      if (record_cb) record_cb(state, dt, &prev);
      while (t0 + next_rec * record_interval <= state.t + eps) ++next_rec;
    }
    if (snap_due || (at_end && snapshot_cb)) {
      if (snapshot_cb) snapshot_cb(state);
      while (snapshot_interval > 0.0 && t0 + next_snap * snapshot_interval <= state.t + eps)
        ++next_snap;
    }
    if (at_end) break;
  }
}

} // namespace axmhd
