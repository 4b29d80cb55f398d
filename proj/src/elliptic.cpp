#include "axmhd/elliptic.hpp"

#include "axmhd/threading.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <limits>
#include <mutex>
#include <vector>

namespace axmhd {

namespace {

// FFTW's planner is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Tridiag {
  std::vector<double> a, b, c; // sub, diag, super per radial index
};

enum class RadialOp { stream, laplace5, vort, flat };

RadialOp radial_of(OpTag tag) {
  switch (tag) {
    case OpTag::stream: return RadialOp::stream;
    case OpTag::laplace5:
    case OpTag::helmholtz5: return RadialOp::laplace5;
    case OpTag::helmholtz_vort: return RadialOp::vort;
    case OpTag::helmholtz_flat: return RadialOp::flat;
  }
  throw std::logic_error("radial_of: bad tag");
}

Tridiag build_radial(const Grid& g, RadialOp op) {
  const int nr = g.nr;
  const double dr2 = g.dr * g.dr;
  Tridiag t;
  t.a.assign(nr, 0.0);
  t.b.assign(nr, 0.0);
  t.c.assign(nr, 0.0);
  switch (op) {
    case RadialOp::laplace5:
    case RadialOp::flat: {
      const double m = (op == RadialOp::laplace5) ? 3.0 : 1.0;
      for (int i = 0; i < nr; ++i) {
        const double wi = std::pow(g.rface(i), m);
        const double wip = std::pow(g.rface(i + 1), m);
        const double inv = 1.0 / (std::pow(g.r(i), m) * dr2);
        t.a[i] = wi * inv;
        t.c[i] = wip * inv;
        t.b[i] = -(wi + wip) * inv;
      }
      t.a[0] = 0.0; // axis face weight is zero already; keep exact
      t.c[nr - 1] = 0.0;
      t.b[nr - 1] = -(std::pow(g.rface(nr - 1), m) + 2.0 * std::pow(g.rface(nr), m)) /
                    (std::pow(g.r(nr - 1), m) * dr2);
      break;
    }
    case RadialOp::stream: {
      for (int i = 0; i < nr; ++i) {
        const double ri = g.r(i);
        t.a[i] = (i > 0) ? ri / (g.rface(i) * dr2) : 0.0;
        t.c[i] = (i < nr - 1) ? ri / (g.rface(i + 1) * dr2) : 0.0;
      }
      for (int i = 1; i < nr - 1; ++i) t.b[i] = -(t.a[i] + t.c[i]);
      // axis: flux (1/r) d_r psi at r=0 modeled as 2 psi_0 / r_0^2 (psi ~ r^2)
      t.b[0] = -t.c[0] - 2.0 / (g.r(0) * g.dr);
      // outer: Dirichlet ghost psi_nr = -psi_{nr-1}
      t.b[nr - 1] = -t.a[nr - 1] - 2.0 * g.r(nr - 1) / (g.R * dr2);
      break;
    }
    case RadialOp::vort: {
      for (int i = 1; i < nr - 1; ++i) {
        t.a[i] = g.r(i - 1) / (g.rface(i) * dr2);
        t.c[i] = g.r(i + 1) / (g.rface(i + 1) * dr2);
        t.b[i] = -g.r(i) * (1.0 / g.rface(i) + 1.0 / g.rface(i + 1)) / dr2;
      }
      // axis: flux (1/r) d_r(r w) at r=0 modeled as 2 w_0 / r_0 (w ~ r)
      t.c[0] = g.r(1) / (g.rface(1) * dr2);
      t.b[0] = -g.r(0) / (g.rface(1) * dr2) - 2.0 / (g.r(0) * g.dr);
      // outer: Dirichlet ghost w_nr = -w_{nr-1}; r_nr + r_{nr-1} = 2R
      t.a[nr - 1] = g.r(nr - 2) / (g.rface(nr - 1) * dr2);
      t.b[nr - 1] = -g.r(nr - 1) / (g.rface(nr - 1) * dr2) - 2.0 / dr2;
      break;
    }
  }
  return t;
}

// Solve (diag + shift*I-free) tridiagonal system in place; a/b/c untouched.
void thomas(const std::vector<double>& a, const std::vector<double>& diag,
            const std::vector<double>& c, double* x, int n, double* scratch) {
  // scratch: n superdiagonal multipliers
  double piv = diag[0];
  scratch[0] = c[0] / piv;
  x[0] /= piv;
  for (int i = 1; i < n; ++i) {
    piv = diag[i] - a[i] * scratch[i - 1];
    scratch[i] = c[i] / piv;
    x[i] = (x[i] - a[i] * x[i - 1]) / piv;
  }
  for (int i = n - 2; i >= 0; --i) x[i] -= scratch[i] * x[i + 1];
}

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

} // namespace

struct EllipticSolver::Impl {
  Grid g;
  double tol;
  Tridiag stream_t, laplace5_t, vort_t, flat_t;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Impl(const Grid& grid, double tolerance) : g(grid), tol(tolerance) {
    if (!(tol > 0.0) || tol > 1e-6)
      throw std::invalid_argument("EllipticSolver: tolerance must lie in (0, 1e-6]");
    stream_t = build_radial(g, RadialOp::stream);
    laplace5_t = build_radial(g, RadialOp::laplace5);
    vort_t = build_radial(g, RadialOp::vort);
    flat_t = build_radial(g, RadialOp::flat);
    const int nr = g.nr, nz = g.nz;
    std::vector<double> rbuf(g.cells());
    std::vector<std::complex<double>> cbuf(static_cast<std::size_t>(nr) * (nz / 2 + 1));
    std::lock_guard<std::mutex> lk(planner_mutex());
    const int n[1] = {nz};
    fwd = fftw_plan_many_dft_r2c(1, n, nr, rbuf.data(), nullptr, nr, 1,
                                 reinterpret_cast<fftw_complex*>(cbuf.data()), nullptr, nr, 1,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd = fftw_plan_many_dft_c2r(1, n, nr, reinterpret_cast<fftw_complex*>(cbuf.data()), nullptr,
                                 nr, 1, rbuf.data(), nullptr, nr, 1,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd || !bwd) throw std::runtime_error("EllipticSolver: FFTW plan creation failed");
  }

  ~Impl() {
    std::lock_guard<std::mutex> lk(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }

  const Tridiag& tri(RadialOp op) const {
    switch (op) {
      case RadialOp::stream: return stream_t;
      case RadialOp::laplace5: return laplace5_t;
      case RadialOp::vort: return vort_t;
      case RadialOp::flat: return flat_t;
    }
    throw std::logic_error("tri: bad op");
  }

  // Mode-k shift of the periodic second difference in z.
  double mode_shift(int k) const {
    const double th = 2.0 * M_PI * k / g.nz;
    return (2.0 - 2.0 * std::cos(th)) / (g.dz * g.dz);
  }

  // Solves Op x = rhs (poisson) or (I - lambda Op) x = rhs (helmholtz).
  void solve_modes(RadialOp op, bool helmholtz, double lambda, const ScalarField& rhs,
                   ScalarField& x) const {
    const int nr = g.nr, nz = g.nz;
    const int nk = nz / 2 + 1;
    std::vector<double> rbuf(rhs.data());
    std::vector<std::complex<double>> cbuf(static_cast<std::size_t>(nr) * nk);
    fftw_execute_dft_r2c(fwd, rbuf.data(), reinterpret_cast<fftw_complex*>(cbuf.data()));
    const Tridiag& t = tri(op);
    parallel_for(static_cast<std::size_t>(nk), [&](std::size_t kb, std::size_t ke) {
      std::vector<double> diag(nr), sub(nr), sup(nr), re(nr), im(nr), scratch(nr);
      for (std::size_t k = kb; k < ke; ++k) {
        const double s = mode_shift(static_cast<int>(k));
        if (helmholtz) {
          for (int i = 0; i < nr; ++i) {
            diag[i] = 1.0 - lambda * (t.b[i] - s);
            sub[i] = -lambda * t.a[i];
            sup[i] = -lambda * t.c[i];
          }
        } else {
          for (int i = 0; i < nr; ++i) {
            diag[i] = t.b[i] - s;
            sub[i] = t.a[i];
            sup[i] = t.c[i];
          }
        }
        std::complex<double>* row = cbuf.data() + k * nr;
        for (int i = 0; i < nr; ++i) {
          re[i] = row[i].real();
          im[i] = row[i].imag();
        }
        thomas(sub, diag, sup, re.data(), nr, scratch.data());
        thomas(sub, diag, sup, im.data(), nr, scratch.data());
        for (int i = 0; i < nr; ++i) row[i] = {re[i], im[i]};
      }
    });
    fftw_execute_dft_c2r(bwd, reinterpret_cast<fftw_complex*>(cbuf.data()), rbuf.data());
    const double scale = 1.0 / nz;
    auto& xv = x.data();
    for (std::size_t idx = 0; idx < xv.size(); ++idx) xv[idx] = rbuf[idx] * scale;
  }

  ScalarField apply(OpTag tag, double lambda, const ScalarField& x) const {
    const Tridiag& t = tri(radial_of(tag));
    const bool helm = (tag == OpTag::helmholtz_vort || tag == OpTag::helmholtz5 ||
                       tag == OpTag::helmholtz_flat);
    const int nr = g.nr, nz = g.nz;
    ScalarField out(g, x.parity());
    const double invdz2 = 1.0 / (g.dz * g.dz);
    parallel_for(static_cast<std::size_t>(nz), [&](std::size_t jb, std::size_t je) {
      for (std::size_t j = jb; j < je; ++j) {
        const int jj = static_cast<int>(j);
        const int jp = (jj + 1) % nz;
        const int jm = (jj + nz - 1) % nz;
        for (int i = 0; i < nr; ++i) {
          double v = t.b[i] * x(i, jj);
          if (i > 0) v += t.a[i] * x(i - 1, jj);
          if (i < nr - 1) v += t.c[i] * x(i + 1, jj);
          v += (x(i, jp) - 2.0 * x(i, jj) + x(i, jm)) * invdz2;
          out(i, jj) = helm ? x(i, jj) - lambda * v : v;
        }
      }
    });
    return out;
  }

  ScalarField solve(OpTag tag, double lambda, const ScalarField& rhs, Parity out_parity) const {
    ScalarField x(g, out_parity);
    const bool helm = (tag == OpTag::helmholtz_vort || tag == OpTag::helmholtz5 ||
                       tag == OpTag::helmholtz_flat);
    const double rhsn = l2(rhs.data());
    if (rhsn == 0.0) return x;
    solve_modes(radial_of(tag), helm, lambda, rhs, x);
    ScalarField res = apply(tag, lambda, x);
    res -= rhs;
    const double rel = l2(res.data()) / rhsn;
    if (!(rel <= tol))
      throw SolveFailure("elliptic solve residual " + std::to_string(rel) +
                             " exceeds tolerance " + std::to_string(tol),
                         rel);
    return x;
  }
};

EllipticSolver::EllipticSolver(const Grid& g, double tolerance)
    : impl_(std::make_unique<Impl>(g, tolerance)) {}
EllipticSolver::~EllipticSolver() = default;
EllipticSolver::EllipticSolver(EllipticSolver&&) noexcept = default;
EllipticSolver& EllipticSolver::operator=(EllipticSolver&&) noexcept = default;

const Grid& EllipticSolver::grid() const { return impl_->g; }
double EllipticSolver::tolerance() const { return impl_->tol; }

ScalarField EllipticSolver::solve_stream(const ScalarField& wtheta) const {
  if (wtheta.parity() != Parity::odd)
    throw std::invalid_argument("solve_stream: wtheta must be odd");
  ScalarField rhs = multiply_r(wtheta);
  rhs *= -1.0;
  return impl_->solve(OpTag::stream, 0.0, rhs, Parity::even);
}

ScalarField EllipticSolver::solve_laplace5(const ScalarField& rhs) const {
  if (rhs.parity() != Parity::even)
    throw std::invalid_argument("solve_laplace5: rhs must be even");
  return impl_->solve(OpTag::laplace5, 0.0, rhs, Parity::even);
}

ScalarField EllipticSolver::solve_helmholtz(OpTag tag, double lambda,
                                            const ScalarField& rhs) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("solve_helmholtz: lambda must be positive");
  Parity want;
  switch (tag) {
    case OpTag::helmholtz_vort: want = Parity::odd; break;
    case OpTag::helmholtz5:
    case OpTag::helmholtz_flat: want = Parity::even; break;
    default: throw std::invalid_argument("solve_helmholtz: tag must be a helmholtz operator");
  }
  if (rhs.parity() != want)
    throw std::invalid_argument("solve_helmholtz: rhs parity does not match operator tag");
  return impl_->solve(tag, lambda, rhs, want);
}

ScalarField EllipticSolver::op_ML(const ScalarField& rho) const {
  if (rho.parity() != Parity::even) throw std::invalid_argument("op_ML: rho must be even");
  return solve_laplace5(div_axis(d_dr(rho)));
}

ScalarField EllipticSolver::op_ML_tilde(const ScalarField& f) const {
  if (f.parity() != Parity::odd) throw std::invalid_argument("op_ML_tilde: f must be odd");
  return solve_laplace5(div_axis(d_dz(f)));
}

double EllipticSolver::identity_residual_OL1(const ScalarField& f) const {
  if (f.parity() != Parity::even)
    throw std::invalid_argument("identity_residual_OL1: f must be even");
  const Grid& g = impl_->g;
  // The f/r term of the identity needs axis-vanishing f; reject otherwise.
  double fmax = lp_norm(f, std::numeric_limits<double>::infinity());
  double worst = 0.0;
  for (int j = 0; j < g.nz; ++j)
    worst = std::max(worst, std::abs(1.5 * f(0, j) - 0.5 * f(1, j)));
  if (fmax > 0.0 && worst > 10.0 * fmax * g.dr / g.R)
    throw std::invalid_argument("identity_residual_OL1: f does not vanish at the axis");

  const ScalarField q = quotient_r(f, Parity::odd); // f/r
  // lhs: ML d_r f = laplace5^{-1}( (1/r) d_r d_r f )
  ScalarField lhs = solve_laplace5(quotient_r(d_dr(d_dr(f)), Parity::even));
  // rhs: f/r - ML(f/r) - d_z tilde-ML f
  ScalarField ml_q = solve_laplace5(quotient_r(d_dr(q), Parity::even));
  ScalarField dz_mlt = d_dz(solve_laplace5(quotient_r(d_dz(f), Parity::even)));
  ScalarField rhs(g, Parity::odd);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nr; ++i)
      rhs(i, j) = q(i, j) - ml_q(i, j) - dz_mlt(i, j);
  lhs.set_parity(Parity::odd);
  lhs -= rhs;
  return lp_norm(lhs, 2.0) / std::max(1.0, lp_norm(f, 2.0));
}

ScalarField EllipticSolver::apply(OpTag tag, double lambda, const ScalarField& x) const {
  return impl_->apply(tag, lambda, x);
}

} // namespace axmhd
