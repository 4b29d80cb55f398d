#include "axmhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace axmhd {

namespace {
const double kInf = std::numeric_limits<double>::infinity();

double quad_sum_norm(const std::vector<const ScalarField*>& parts, double p) {
  // pointwise quadrature sum |(f1,...,fn)|, then the requested norm
  const Grid& g = parts.front()->grid();
  ScalarField mag(g, Parity::even);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nr; ++i) {
      double s = 0.0;
      for (const ScalarField* f : parts) {
        const double v = (*f)(i, j);
        s += v * v;
      }
      mag(i, j) = std::sqrt(s);
    }
  return lp_norm(mag, p);
}
} // namespace

const std::vector<std::string>& DiagnosticsRecord::column_names() {
  static const std::vector<std::string> names = {
      "t",          "H_L1",        "H_L2",         "H_inf",          "rho_L1",
      "rho_L2",     "rho_inf",     "u_L2",         "h_L2",           "uh_L2",
      "grad_u_L2",  "grad_u_L4",   "grad_u_inf",   "Omega_L2",       "wtheta_L2",
      "wtheta_L4",  "htheta_L4",   "ur_over_r_inf", "L_L2",          "u_H1",
      "u_H2",       "h_H1",        "h_H2",         "rho_H1",         "rho_H2",
      "int_gradu2_dt", "int_graduinf_dt", "boundary_flux_max", "div_residual",
      "omega_eq_residual", "energy_margin"};
  return names;
}

std::vector<double> DiagnosticsRecord::row() const {
  return {t,          H_L1,        H_L2,         H_inf,          rho_L1,
          rho_L2,     rho_inf,     u_L2,         h_L2,           uh_L2,
          grad_u_L2,  grad_u_L4,   grad_u_inf,   Omega_L2,       wtheta_L2,
          wtheta_L4,  htheta_L4,   ur_over_r_inf, L_L2,          u_H1,
          u_H2,       h_H1,        h_H2,         rho_H1,         rho_H2,
          int_gradu2_dt, int_graduinf_dt, boundary_flux_max, div_residual,
          omega_eq_residual, energy_margin};
}

DiagnosticsRecord DiagnosticsRecord::from_row(const std::vector<double>& r) {
  if (r.size() != column_names().size())
    throw std::invalid_argument("DiagnosticsRecord: row width mismatch");
  DiagnosticsRecord d;
  int k = 0;
  d.t = r[k++]; d.H_L1 = r[k++]; d.H_L2 = r[k++]; d.H_inf = r[k++]; d.rho_L1 = r[k++];
  d.rho_L2 = r[k++]; d.rho_inf = r[k++]; d.u_L2 = r[k++]; d.h_L2 = r[k++]; d.uh_L2 = r[k++];
  d.grad_u_L2 = r[k++]; d.grad_u_L4 = r[k++]; d.grad_u_inf = r[k++]; d.Omega_L2 = r[k++];
  d.wtheta_L2 = r[k++]; d.wtheta_L4 = r[k++]; d.htheta_L4 = r[k++]; d.ur_over_r_inf = r[k++];
  d.L_L2 = r[k++]; d.u_H1 = r[k++]; d.u_H2 = r[k++]; d.h_H1 = r[k++]; d.h_H2 = r[k++];
  d.rho_H1 = r[k++]; d.rho_H2 = r[k++]; d.int_gradu2_dt = r[k++]; d.int_graduinf_dt = r[k++];
  d.boundary_flux_max = r[k++]; d.div_residual = r[k++]; d.omega_eq_residual = r[k++];
  d.energy_margin = r[k++];
  return d;
}

DiagnosticsEngine::DiagnosticsEngine(const EllipticSolver& solver, const PhysParams& params)
    : solver_(solver), params_(params) {}

DiagnosticsRecord DiagnosticsEngine::record(const State& st, double dt, const State* prev) {
  if (!st.cache_valid) throw std::logic_error("DiagnosticsEngine::record: cache not valid");
  DiagnosticsRecord d;
  d.t = st.t;
  d.H_L1 = lp_norm(st.H, 1.0);
  d.H_L2 = lp_norm(st.H, 2.0);
  d.H_inf = lp_norm(st.H, kInf);
  d.rho_L1 = lp_norm(st.rho, 1.0);
  d.rho_L2 = lp_norm(st.rho, 2.0);
  d.rho_inf = lp_norm(st.rho, kInf);
  const double ur2 = lp_norm(st.ur, 2.0), uz2 = lp_norm(st.uz, 2.0);
  d.u_L2 = std::sqrt(ur2 * ur2 + uz2 * uz2);
  d.h_L2 = lp_norm(st.htheta, 2.0);
  d.uh_L2 = std::sqrt(d.u_L2 * d.u_L2 + d.h_L2 * d.h_L2);

  // |grad u| via the cylindrical equivalence: the four (r,z) partials of
  // (u^r, u^z) plus u^r/r, summed in quadrature.
  const ScalarField ur_r = d_dr(st.ur), ur_z = d_dz(st.ur);
  const ScalarField uz_r = d_dr(st.uz), uz_z = d_dz(st.uz);
  const ScalarField uror = div_axis(st.ur);
  const std::vector<const ScalarField*> gu = {&ur_r, &ur_z, &uz_r, &uz_z, &uror};
  d.grad_u_L2 = quad_sum_norm(gu, 2.0);
  d.grad_u_L4 = quad_sum_norm(gu, 4.0);
  d.grad_u_inf = quad_sum_norm(gu, kInf);
  d.ur_over_r_inf = lp_norm(uror, kInf);

  d.Omega_L2 = lp_norm(st.Omega, 2.0);
  d.wtheta_L2 = lp_norm(st.wtheta, 2.0);
  d.wtheta_L4 = lp_norm(st.wtheta, 4.0);
  d.htheta_L4 = lp_norm(st.htheta, 4.0);
  d.L_L2 = lp_norm(L_field(solver_, st), 2.0);

  // H1/H2 by repeated second-order stencils on the derived fields.
  d.u_H1 = std::sqrt(d.u_L2 * d.u_L2 + d.grad_u_L2 * d.grad_u_L2);
  {
    const ScalarField ur_rr = d_dr(ur_r), ur_rz = d_dz(ur_r), ur_zz = d_dz(ur_z);
    const ScalarField uz_rr = d_dr(uz_r), uz_rz = d_dz(uz_r), uz_zz = d_dz(uz_z);
    const ScalarField q_r = d_dr(uror), q_z = d_dz(uror);
    const std::vector<const ScalarField*> g2 = {&ur_rr, &ur_rz, &ur_rz, &ur_zz, &uz_rr,
                                                &uz_rz, &uz_rz, &uz_zz, &q_r,   &q_z};
    const double s = quad_sum_norm(g2, 2.0);
    d.u_H2 = std::sqrt(d.u_H1 * d.u_H1 + s * s);
  }
  {
    const ScalarField ht_r = d_dr(st.htheta), ht_z = d_dz(st.htheta);
    const std::vector<const ScalarField*> gh = {&ht_r, &ht_z, &st.H};
    const double g1 = quad_sum_norm(gh, 2.0);
    d.h_H1 = std::sqrt(d.h_L2 * d.h_L2 + g1 * g1);
    const ScalarField ht_rr = d_dr(ht_r), ht_rz = d_dz(ht_r), ht_zz = d_dz(ht_z);
    const ScalarField H_r = d_dr(st.H), H_z = d_dz(st.H);
    const std::vector<const ScalarField*> g2 = {&ht_rr, &ht_rz, &ht_rz, &ht_zz, &H_r, &H_z};
    const double s = quad_sum_norm(g2, 2.0);
    d.h_H2 = std::sqrt(d.h_H1 * d.h_H1 + s * s);
  }
  {
    const ScalarField rho_r = d_dr(st.rho), rho_z = d_dz(st.rho);
    const std::vector<const ScalarField*> g1 = {&rho_r, &rho_z};
    const double s1 = quad_sum_norm(g1, 2.0);
    d.rho_H1 = std::sqrt(d.rho_L2 * d.rho_L2 + s1 * s1);
    const ScalarField rho_rr = d_dr(rho_r), rho_rz = d_dz(rho_r), rho_zz = d_dz(rho_z);
    const std::vector<const ScalarField*> g2 = {&rho_rr, &rho_rz, &rho_rz, &rho_zz};
    const double s2 = quad_sum_norm(g2, 2.0);
    d.rho_H2 = std::sqrt(d.rho_H1 * d.rho_H1 + s2 * s2);
  }

  {
    const Grid& g = st.grid();
    double m = 0.0;
    // velocity and psi are legitimately nonzero near the free-slip wall;
    // the evolved fields are what must stay quiet for the Dirichlet
    // confinement not to pollute the solution
    for (const ScalarField* f : {&st.wtheta, &st.H, &st.rho})
      for (int j = 0; j < g.nz; ++j) m = std::max(m, std::abs((*f)(g.nr - 1, j)));
    d.boundary_flux_max = m;
  }

  d.div_residual = lp_norm(divergence(st.ur, st.uz), kInf) / std::max(1.0, d.grad_u_inf);

  if (prev && dt > 0.0) {
    // residual of the Omega equation, with d_t by backward difference
    ScalarField res = st.Omega;
    res -= prev->Omega;
    res *= 1.0 / dt;
    res += multiply(st.ur, d_dr(st.Omega));
    res += multiply(st.uz, d_dz(st.Omega));
    ScalarField diff = solver_.apply(OpTag::laplace5, 0.0, st.Omega);
    diff *= params_.mu;
    res -= diff;
    res += d_dz(multiply(st.H, st.H));
    res += div_axis(d_dr(st.rho));
    d.omega_eq_residual = lp_norm(res, 2.0);
  }

  if (!have_baseline_) {
    have_baseline_ = true;
    t0_ = st.t;
    uh0_L2_ = d.uh_L2;
    rho0_L2_ = d.rho_L2;
    prev_t_ = st.t;
    prev_g2_ = d.grad_u_L2 * d.grad_u_L2;
    prev_ginf_ = d.grad_u_inf;
  } else {
    const double h = st.t - prev_t_;
    cum_g2_ += 0.5 * h * (prev_g2_ + d.grad_u_L2 * d.grad_u_L2);
    cum_ginf_ += 0.5 * h * (prev_ginf_ + d.grad_u_inf);
    prev_t_ = st.t;
    prev_g2_ = d.grad_u_L2 * d.grad_u_L2;
    prev_ginf_ = d.grad_u_inf;
  }
  d.int_gradu2_dt = cum_g2_;
  d.int_graduinf_dt = cum_ginf_;
  d.energy_margin = d.uh_L2 - (uh0_L2_ + 2.0 * rho0_L2_ * (st.t - t0_));

  series_.push_back(d);
  return d;
}

ScalarField L_field(const EllipticSolver& solver, const State& st) {
  if (!st.cache_valid) throw std::logic_error("L_field: cache not valid");
  ScalarField L = st.Omega;
  L -= solver.op_ML(st.rho);
  return L;
}

CheckReport check_max_principle(const Series& s, SystemMode mode) {
  if (s.empty()) throw std::invalid_argument("check_max_principle: empty series");
  CheckReport rep;
  rep.pass = true;
  const double tol = 1e-12;
  for (std::size_t k = 0; k < s.size(); ++k) {
    double m = s[k].H_inf - s[0].H_inf;
    if (mode == SystemMode::mhd_boussinesq)
      m = std::max(m, s[k].rho_inf - s[0].rho_inf);
    if (m > rep.worst_margin) {
      rep.worst_margin = m;
      rep.worst_index = static_cast<int>(k);
    }
    if (m > tol) rep.pass = false;
  }
  std::ostringstream os;
  os << "max-principle worst margin " << rep.worst_margin;
  if (!rep.pass) os << " violated at sample " << rep.worst_index << " (t=" << s[rep.worst_index].t << ")";
  rep.message = os.str();
  return rep;
}

CheckReport check_energy_bound(const Series& s) {
  if (s.empty()) throw std::invalid_argument("check_energy_bound: empty series");
  CheckReport rep;
  rep.pass = true;
  const double slack = 0.05 * (s[0].uh_L2 + s[0].rho_L2);
  double c0 = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double bound = s[0].uh_L2 + 2.0 * s[0].rho_L2 * (s[k].t - s[0].t) + slack;
    const double m = s[k].uh_L2 - bound;
    if (m > rep.worst_margin || rep.worst_index < 0) {
      rep.worst_margin = m;
      rep.worst_index = static_cast<int>(k);
    }
    if (m > 0.0) rep.pass = false;
    const double den = (1.0 + s[k].t - s[0].t) * (1.0 + s[k].t - s[0].t);
    c0 = std::max(c0, (s[k].uh_L2 * s[k].uh_L2 + s[k].int_gradu2_dt) / den);
  }
  std::ostringstream os;
  os << "energy-bound worst margin " << rep.worst_margin << " (slack " << slack
     << "), fitted C0 for the (1+t)^2 form: " << c0;
  rep.message = os.str();
  return rep;
}

CzRatios cz_report(const EllipticSolver& solver, const State& st) {
  if (!st.cache_valid) throw std::logic_error("cz_report: cache not valid");
  (void)solver;
  CzRatios out;
  const double w2 = lp_norm(st.wtheta, 2.0);
  if (w2 == 0.0) return out; // ratios undefined
  const ScalarField ur_r = d_dr(st.ur), ur_z = d_dz(st.ur);
  const ScalarField uz_r = d_dr(st.uz), uz_z = d_dz(st.uz);
  const ScalarField uror = div_axis(st.ur);
  const std::vector<const ScalarField*> gu = {&ur_r, &ur_z, &uz_r, &uz_z, &uror};
  out.grad_u_over_w_L2 = quad_sum_norm(gu, 2.0) / w2;
  const double w4 = lp_norm(st.wtheta, 4.0);
  if (w4 > 0.0) out.grad_u_over_w_L4 = quad_sum_norm(gu, 4.0) / w4;
  const double om2 = lp_norm(st.Omega, 2.0);
  if (om2 > 0.0) {
    const ScalarField q_r = d_dr(uror), q_z = d_dz(uror);
    const std::vector<const ScalarField*> gq = {&q_r, &q_z};
    out.grad_uror_over_Omega_L2 = quad_sum_norm(gq, 2.0) / om2;
  }
  return out;
}

double phi_tower(int k, double c, double t) {
  if (k < 1) throw std::invalid_argument("phi_tower: k must be >= 1");
  double x = c * t;
  for (int i = 0; i < k; ++i) {
    if (x > 700.0) return kInf;
    x = std::exp(x);
  }
  return c * x;
}

PhiFit phi_fit(const std::vector<double>& t, const std::vector<double>& values, int k,
               double c_cap) {
  if (t.size() != values.size() || t.empty())
    throw std::invalid_argument("phi_fit: mismatched or empty series");
  for (double v : values)
    if (!(v > 0.0)) throw std::invalid_argument("phi_fit: samples must be positive");
  auto ok = [&](double c) {
    for (std::size_t i = 0; i < t.size(); ++i)
      if (values[i] > phi_tower(k, c, t[i]) * (1.0 + 1e-12)) return false;
    return true;
  };
  double hi = 1.0;
  while (!ok(hi)) {
    hi *= 2.0;
    if (hi > 1e300) return {hi, false};
  }
  double lo = 0.0;
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return {hi, hi <= c_cap};
}

void write_csv(std::ostream& os, const Series& s) {
  const auto& names = DiagnosticsRecord::column_names();
  for (std::size_t k = 0; k < names.size(); ++k) os << (k ? "," : "") << names[k];
  os << "\n";
  os.precision(17);
  for (const auto& rec : s) {
    const auto row = rec.row();
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << row[k];
    os << "\n";
  }
}

Series read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_csv: empty stream");
  {
    std::ostringstream expect;
    const auto& names = DiagnosticsRecord::column_names();
    for (std::size_t k = 0; k < names.size(); ++k) expect << (k ? "," : "") << names[k];
    if (line != expect.str()) throw std::runtime_error("read_csv: unexpected header");
  }
  Series s;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    s.push_back(DiagnosticsRecord::from_row(row));
  }
  return s;
}

} // namespace axmhd
