#include "axmhd/state.hpp"

#include <cmath>
#include <stdexcept>

namespace axmhd {

void PhysParams::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("PhysParams: mu must be positive");
  if (nu < 0.0) throw std::invalid_argument("PhysParams: nu must be non-negative");
  if (kappa < 0.0) throw std::invalid_argument("PhysParams: kappa must be non-negative");
}

std::string to_string(SystemMode m) {
  return m == SystemMode::mhd_boussinesq ? "mhd_boussinesq" : "rayleigh_benard";
}

SystemMode mode_from_string(const std::string& s) {
  if (s == "mhd_boussinesq") return SystemMode::mhd_boussinesq;
  if (s == "rayleigh_benard") return SystemMode::rayleigh_benard;
  throw std::invalid_argument("unknown system mode '" + s +
                              "' (expected mhd_boussinesq or rayleigh_benard)");
}

State::State(const Grid& g)
    : wtheta(g, Parity::odd),
      H(g, Parity::even),
      rho(g, Parity::even),
      psi(g, Parity::even),
      ur(g, Parity::odd),
      uz(g, Parity::even),
      htheta(g, Parity::odd),
      Omega(g, Parity::even) {}

void State::rebuild_cache(const EllipticSolver& solver) {
  velocity_from_wtheta(solver, wtheta, ur, uz, psi);
  htheta = multiply_r(H);
  Omega = div_axis(wtheta);
  cache_valid = true;
}

void velocity_from_wtheta(const EllipticSolver& solver, const ScalarField& wtheta,
                          ScalarField& ur, ScalarField& uz, ScalarField& psi) {
  psi = solver.solve_stream(wtheta);
  // d_dz(psi) is even and vanishes like r^2 at the axis, so the raw quotient
  // is the axis-regular odd field -u^r.
  ur = quotient_r(d_dz(psi), Parity::odd);
  ur *= -1.0;
  uz = div_axis(d_dr(psi));
}

ScalarField divergence(const ScalarField& ur, const ScalarField& uz) {
  if (ur.parity() != Parity::odd || uz.parity() != Parity::even)
    throw std::invalid_argument("divergence: expected (odd, even) parities");
  ScalarField div = div_axis(d_dr(multiply_r(ur)));
  div += d_dz(uz);
  return div;
}

ScalarField curl_theta(const ScalarField& ur, const ScalarField& uz) {
  if (ur.parity() != Parity::odd || uz.parity() != Parity::even)
    throw std::invalid_argument("curl_theta: expected (odd, even) parities");
  ScalarField w = d_dz(ur);
  w -= d_dr(uz);
  return w;
}

double lorentz_curl_residual(const ScalarField& H) {
  if (H.parity() != Parity::even)
    throw std::invalid_argument("lorentz_curl_residual: H must be even");
  const ScalarField ht = multiply_r(H);
  ScalarField a = multiply(H, d_dz(ht));
  a *= -2.0;
  ScalarField b = d_dz(multiply(H, ht));
  b *= -1.0;
  a -= b;
  const double h2 = lp_norm(H, 2.0);
  return lp_norm(a, 2.0) / std::max(1.0, h2 * h2);
}

} // namespace axmhd
