// Straight-line reference integrator for the reproducibility check: one
// translation unit, no includes from the project, plain loops over raw
// vectors. Rebuilds the 64x64 standard-bump problem from its mathematical
// description (cell-centered cylindrical mesh, parity ghosts, flux-form
// donor-cell transport, FFT-in-z + tridiagonal elliptic solves, operator
// split with backward-Euler viscosity) and integrates 100 fixed steps.
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

struct OracleResult {
  std::vector<double> wtheta, H, rho;
  double wtheta_L2 = 0, H_L2 = 0, rho_L2 = 0, H_inf = 0;
};

OracleResult oracle_run_64() {
  const int nr = 64, nz = 64;
  const double R = 2.0, Lz = 2.0;
  const double dr = R / nr, dz = Lz / nz;
  const double dt = 2e-3;
  const int nsteps = 100;
  const double mu = 1.0;
  const int N = nr * nz;
  auto rc = [&](int i) { return (i + 0.5) * dr; };
  auto rf = [&](int i) { return i * dr; };
  auto idx = [&](int i, int j) { return j * nr + i; };

  // --- initial data: Gaussian bumps, odd field carries a factor r ---
  std::vector<double> w(N), H(N), rho(N);
  for (int j = 0; j < nz; ++j)
    for (int i = 0; i < nr; ++i) {
      const double r = rc(i), z = j * dz;
      double dzp = std::remainder(z - 1.0, Lz);
      double d2 = (r - 0.7) * (r - 0.7) + dzp * dzp;
      w[idx(i, j)] = r * (1.0 * std::exp(-d2 / (0.25 * 0.25)));
      H[idx(i, j)] = 0.5 * std::exp(-d2 / (0.25 * 0.25));
      dzp = std::remainder(z - 0.8, Lz);
      d2 = (r - 0.7) * (r - 0.7) + dzp * dzp;
      rho[idx(i, j)] = 0.5 * std::exp(-d2 / (0.25 * 0.25));
    }

  // --- tridiagonal radial operators (flux form, cell centered) ---
  const double dr2 = dr * dr;
  std::vector<double> sa(nr), sb(nr), sc(nr); // stream
  for (int i = 0; i < nr; ++i) {
    sa[i] = (i > 0) ? rc(i) / (rf(i) * dr2) : 0.0;
    sc[i] = (i < nr - 1) ? rc(i) / (rf(i + 1) * dr2) : 0.0;
  }
  for (int i = 1; i < nr - 1; ++i) sb[i] = -(sa[i] + sc[i]);
  sb[0] = -sc[0] - 2.0 / (rc(0) * dr);
  sb[nr - 1] = -sa[nr - 1] - 2.0 * rc(nr - 1) / (R * dr2);

  std::vector<double> va(nr, 0.0), vb(nr), vc(nr, 0.0); // vorticity Helmholtz core
  for (int i = 1; i < nr - 1; ++i) {
    va[i] = rc(i - 1) / (rf(i) * dr2);
    vc[i] = rc(i + 1) / (rf(i + 1) * dr2);
    vb[i] = -rc(i) * (1.0 / rf(i) + 1.0 / rf(i + 1)) / dr2;
  }
  vc[0] = rc(1) / (rf(1) * dr2);
  vb[0] = -rc(0) / (rf(1) * dr2) - 2.0 / (rc(0) * dr);
  va[nr - 1] = rc(nr - 2) / (rf(nr - 1) * dr2);
  vb[nr - 1] = -rc(nr - 1) / (rf(nr - 1) * dr2) - 2.0 / dr2;

  // --- FFT along z, strided so radial index is fastest ---
  const int nk = nz / 2 + 1;
  std::vector<double> rbuf(N);
  std::vector<std::complex<double>> cbuf((std::size_t)nr * nk);
  const int nfft[1] = {nz};
  fftw_plan fwd = fftw_plan_many_dft_r2c(1, nfft, nr, rbuf.data(), nullptr, nr, 1,
                                         reinterpret_cast<fftw_complex*>(cbuf.data()), nullptr,
                                         nr, 1, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_plan bwd = fftw_plan_many_dft_c2r(1, nfft, nr, reinterpret_cast<fftw_complex*>(cbuf.data()),
                                         nullptr, nr, 1, rbuf.data(), nullptr, nr, 1,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);

  std::vector<double> diag(nr), sub(nr), sup(nr), re(nr), im(nr), scratch(nr);
  auto thomas = [&](std::vector<double>& x) {
    double piv = diag[0];
    scratch[0] = sup[0] / piv;
    x[0] /= piv;
    for (int i = 1; i < nr; ++i) {
      piv = diag[i] - sub[i] * scratch[i - 1];
      scratch[i] = sup[i] / piv;
      x[i] = (x[i] - sub[i] * x[i - 1]) / piv;
    }
    for (int i = nr - 2; i >= 0; --i) x[i] -= scratch[i] * x[i + 1];
  };

  // Solve: poisson (stream) uses the raw tridiagonal shifted by the periodic
  // second-difference eigenvalue; helmholtz uses I - lambda * Op.
  auto solve = [&](const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& c, bool helm, double lambda,
                   const std::vector<double>& rhs, std::vector<double>& x) {
    double n2 = 0.0;
    for (double v : rhs) n2 += v * v;
    if (n2 == 0.0) {
      x.assign(N, 0.0);
      return;
    }
    rbuf = rhs;
    fftw_execute_dft_r2c(fwd, rbuf.data(), reinterpret_cast<fftw_complex*>(cbuf.data()));
    for (int k = 0; k < nk; ++k) {
      const double th = 2.0 * M_PI * k / nz;
      const double s = (2.0 - 2.0 * std::cos(th)) / (dz * dz);
      if (helm) {
        for (int i = 0; i < nr; ++i) {
          diag[i] = 1.0 - lambda * (b[i] - s);
          sub[i] = -lambda * a[i];
          sup[i] = -lambda * c[i];
        }
      } else {
        for (int i = 0; i < nr; ++i) {
          diag[i] = b[i] - s;
          sub[i] = a[i];
          sup[i] = c[i];
        }
      }
      std::complex<double>* row = cbuf.data() + (std::size_t)k * nr;
      for (int i = 0; i < nr; ++i) {
        re[i] = row[i].real();
        im[i] = row[i].imag();
      }
      thomas(re);
      thomas(im);
      for (int i = 0; i < nr; ++i) row[i] = {re[i], im[i]};
    }
    fftw_execute_dft_c2r(bwd, reinterpret_cast<fftw_complex*>(cbuf.data()), rbuf.data());
    x.resize(N);
    const double scale = 1.0 / nz;
    for (int q = 0; q < N; ++q) x[q] = rbuf[q] * scale;
  };

  // Centered d/dr with a parity ghost at the axis (sign = +1 even, -1 odd)
  // and a quadratic-extrapolation one-sided difference at the outer wall.
  auto ddr = [&](const std::vector<double>& f, double axis_sign, std::vector<double>& out) {
    const double inv2dr = 1.0 / (2.0 * dr);
    out.resize(N);
    for (int j = 0; j < nz; ++j) {
      out[idx(0, j)] = (f[idx(1, j)] - axis_sign * f[idx(0, j)]) * inv2dr;
      for (int i = 1; i < nr - 1; ++i)
        out[idx(i, j)] = (f[idx(i + 1, j)] - f[idx(i - 1, j)]) * inv2dr;
      out[idx(nr - 1, j)] =
          (3.0 * f[idx(nr - 1, j)] - 4.0 * f[idx(nr - 2, j)] + f[idx(nr - 3, j)]) * inv2dr;
    }
  };
  auto ddz = [&](const std::vector<double>& f, std::vector<double>& out) {
    const double inv2dz = 1.0 / (2.0 * dz);
    out.resize(N);
    for (int j = 0; j < nz; ++j) {
      const int jp = (j + 1) % nz, jm = (j + nz - 1) % nz;
      for (int i = 0; i < nr; ++i)
        out[idx(i, j)] = (f[idx(i, jp)] - f[idx(i, jm)]) * inv2dz;
    }
  };

  std::vector<double> psi(N), ur(N), uz(N), t1(N), t2(N), t3(N), rhs(N), wstar(N);
  std::vector<double> mrF((std::size_t)(nr + 1) * nz), mzF(N);
  std::vector<double> Hn(N), rhon(N), wn(N);

  auto rebuild_velocity = [&]() {
    for (int q = 0; q < N; ++q) rhs[q] = -(w[q] * ((q % nr) + 0.5) * dr);
    solve(sa, sb, sc, false, 0.0, rhs, psi);
    ddz(psi, t1);
    for (int j = 0; j < nz; ++j)
      for (int i = 0; i < nr; ++i) {
        const double q = t1[idx(i, j)] / rc(i);
        ur[idx(i, j)] = q * -1.0;
      }
    ddr(psi, 1.0, t1);
    for (int j = 0; j < nz; ++j)
      for (int i = 0; i < nr; ++i) uz[idx(i, j)] = t1[idx(i, j)] / rc(i);
  };
  rebuild_velocity();

  for (int step = 0; step < nsteps; ++step) {
    // face mass fluxes from corner-averaged psi; nothing crosses r = 0 or R
    auto corner = [&](int i, int j) -> double {
      if (i == 0 || i == nr) return 0.0;
      const int jm = (j + nz - 1) % nz;
      return 0.25 * (psi[idx(i - 1, jm)] + psi[idx(i, jm)] + psi[idx(i - 1, j)] + psi[idx(i, j)]);
    };
    for (int j = 0; j < nz; ++j) {
      const int jp = (j + 1) % nz;
      for (int i = 0; i <= nr; ++i)
        mrF[(std::size_t)j * (nr + 1) + i] =
            (i == 0 || i == nr) ? 0.0 : -(corner(i, jp) - corner(i, j));
      for (int i = 0; i < nr; ++i) mzF[idx(i, j)] = corner(i + 1, j) - corner(i, j);
    }
    auto advect = [&](const std::vector<double>& f, std::vector<double>& out) {
      out.resize(N);
      for (int j = 0; j < nz; ++j) {
        const int jp = (j + 1) % nz, jm = (j + nz - 1) % nz;
        for (int i = 0; i < nr; ++i) {
          const double vol = rc(i) * dr * dz;
          const double mrR = mrF[(std::size_t)j * (nr + 1) + i + 1];
          const double mrL = mrF[(std::size_t)j * (nr + 1) + i];
          const double mzT = mzF[idx(i, jp)];
          const double mzB = mzF[idx(i, j)];
          const double fR = mrR > 0.0 ? f[idx(i, j)] : f[idx(i + 1 < nr ? i + 1 : i, j)];
          const double fL = mrL > 0.0 ? f[idx(i > 0 ? i - 1 : i, j)] : f[idx(i, j)];
          const double fT = mzT > 0.0 ? f[idx(i, j)] : f[idx(i, jp)];
          const double fB = mzB > 0.0 ? f[idx(i, jm)] : f[idx(i, j)];
          out[idx(i, j)] = f[idx(i, j)] - dt / vol * (mrR * fR - mrL * fL + mzT * fT - mzB * fB);
        }
      }
    };
    advect(H, Hn);
    advect(rho, rhon);

    // explicit wtheta right side, beginning-of-step velocity throughout
    ddr(w, -1.0, t1); // w is odd
    for (int q = 0; q < N; ++q) rhs[q] = ur[q] * t1[q];
    ddz(w, t1);
    for (int q = 0; q < N; ++q) rhs[q] += uz[q] * t1[q];
    for (int q = 0; q < N; ++q) rhs[q] *= -1.0;
    for (int j = 0; j < nz; ++j)
      for (int i = 0; i < nr; ++i) {
        const int q = idx(i, j);
        rhs[q] += (ur[q] / rc(i)) * w[q]; // stretching
      }
    for (int j = 0; j < nz; ++j)
      for (int i = 0; i < nr; ++i) {
        const int q = idx(i, j);
        t2[q] = (H[q] * H[q]) * rc(i); // (htheta)^2 / r
      }
    ddz(t2, t3);
    for (int q = 0; q < N; ++q) rhs[q] -= t3[q];
    ddr(rho, 1.0, t1); // rho is even
    for (int q = 0; q < N; ++q) rhs[q] -= t1[q];
    for (int q = 0; q < N; ++q) {
      wstar[q] = rhs[q] * dt;
      wstar[q] += w[q];
    }
    solve(va, vb, vc, true, mu * dt, wstar, wn);

    w.swap(wn);
    H.swap(Hn);
    rho.swap(rhon);
    rebuild_velocity();
  }

  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);

  OracleResult out;
  out.wtheta = w;
  out.H = H;
  out.rho = rho;
  auto l2w = [&](const std::vector<double>& f) {
    double total = 0.0;
    for (int j = 0; j < nz; ++j) {
      double row = 0.0;
      for (int i = 0; i < nr; ++i) row += f[idx(i, j)] * f[idx(i, j)] * rc(i);
      total += row;
    }
    return std::sqrt(2.0 * M_PI * dr * dz * total);
  };
  out.wtheta_L2 = l2w(w);
  out.H_L2 = l2w(H);
  out.rho_L2 = l2w(rho);
  for (double v : H) out.H_inf = std::max(out.H_inf, std::abs(v));
  return out;
}
