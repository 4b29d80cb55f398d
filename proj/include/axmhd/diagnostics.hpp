// Per-sample norms, residuals and inequality margins: everything the
// verification harness tracks, plus the corrected field L = Omega - ML rho,
// the Calderon-Zygmund ratio probes and tower-exponential envelope fitting.
#pragma once

#include "axmhd/dynamics.hpp"
#include "axmhd/elliptic.hpp"
#include "axmhd/state.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace axmhd {

struct DiagnosticsRecord {
  double t = 0.0;
  double H_L1 = 0, H_L2 = 0, H_inf = 0;
  double rho_L1 = 0, rho_L2 = 0, rho_inf = 0;
  double u_L2 = 0, h_L2 = 0, uh_L2 = 0;
  double grad_u_L2 = 0, grad_u_L4 = 0, grad_u_inf = 0;
  double Omega_L2 = 0, wtheta_L2 = 0, wtheta_L4 = 0, htheta_L4 = 0;
  double ur_over_r_inf = 0;
  double L_L2 = 0;
  double u_H1 = 0, u_H2 = 0, h_H1 = 0, h_H2 = 0, rho_H1 = 0, rho_H2 = 0;
  double int_gradu2_dt = 0;   // trapezoid of ||grad u||_2^2
  double int_graduinf_dt = 0; // trapezoid of ||grad u||_inf
  double boundary_flux_max = 0;
  double div_residual = 0;      // ||div u||_inf / max(1, ||grad u||_inf)
  double omega_eq_residual = 0; // L2 residual of the Omega equation (0 at t0)
  double energy_margin = 0;     // uh_L2 - (uh0_L2 + 2 rho0_L2 (t - t0))

  static const std::vector<std::string>& column_names();
  std::vector<double> row() const;
  static DiagnosticsRecord from_row(const std::vector<double>& row);
};

using Series = std::vector<DiagnosticsRecord>;

// Stateful recorder: keeps the initial norms for the energy margin and the
// running trapezoid integrals. One engine per run.
class DiagnosticsEngine {
public:
  DiagnosticsEngine(const EllipticSolver& solver, const PhysParams& params);

  // dt/prev describe the last step before this sample (nullptr at t0);
  // they feed the backward-difference Omega-equation residual.
  DiagnosticsRecord record(const State& state, double dt = 0.0, const State* prev = nullptr);

  const Series& series() const { return series_; }

private:
  const EllipticSolver& solver_;
  PhysParams params_;
  bool have_baseline_ = false;
  double t0_ = 0.0, uh0_L2_ = 0.0, rho0_L2_ = 0.0;
  double prev_t_ = 0.0, prev_g2_ = 0.0, prev_ginf_ = 0.0;
  double cum_g2_ = 0.0, cum_ginf_ = 0.0;
  Series series_;
};

// Omega - ML rho.
ScalarField L_field(const EllipticSolver& solver, const State& state);

struct CheckReport {
  bool pass = false;
  double worst_margin = 0.0; // signed; <= 0 means satisfied
  int worst_index = -1;
  std::string message;
};

// ||H(t)||_inf <= ||H_0||_inf + 1e-12 at every sample (and rho in
// mhd_boussinesq mode). Series must come from a nu = kappa = 0 run.
CheckReport check_max_principle(const Series& s, SystemMode mode);

// Linear-growth energy bound with grid slack 0.05 (uh0 + rho0); also
// reports the fitted C0 of the (1+t)^2 form in the message.
CheckReport check_energy_bound(const Series& s);

struct CzRatios {
  std::optional<double> grad_u_over_w_L2;
  std::optional<double> grad_u_over_w_L4;
  std::optional<double> grad_uror_over_Omega_L2;
};

CzRatios cz_report(const EllipticSolver& solver, const State& state);

// Tower exponential c exp(exp(...exp(c t)...)) with k nested exps.
double phi_tower(int k, double c, double t);

struct PhiFit {
  double c = 0.0;
  bool satisfied = false;
};

// Smallest c (bisection, 1e-6 relative) with value_i <= Phi_{k,c}(t_i) at
// every sample; satisfied iff c <= c_cap. Samples must be positive.
PhiFit phi_fit(const std::vector<double>& t, const std::vector<double>& values, int k,
               double c_cap = 1e3);

// Diagnostics stream: one header line, then comma-separated rows at full
// 17-significant-digit precision.
void write_csv(std::ostream& os, const Series& s);
Series read_csv(std::istream& is);

} // namespace axmhd
