#include "axmhd/grid.hpp"

#include "axmhd/threading.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace axmhd {

Grid build_grid(int nr, int nz, double R, double Lz) {
  if (nr < 4) throw std::invalid_argument("build_grid: nr must be >= 4");
  if (nz < 4) throw std::invalid_argument("build_grid: nz must be >= 4");
  if (!(R > 0.0)) throw std::invalid_argument("build_grid: R must be positive");
  if (!(Lz > 0.0)) throw std::invalid_argument("build_grid: Lz must be positive");
  Grid g;
  g.nr = nr;
  g.nz = nz;
  g.R = R;
  g.Lz = Lz;
  g.dr = R / nr;
  g.dz = Lz / nz;
  return g;
}

ScalarField::ScalarField(const Grid& g, Parity p, double fill)
    : grid_(g), parity_(p), v_(g.cells(), fill) {}

bool ScalarField::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& x : v_) x *= a;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double a, ScalarField f) { return f *= a; }

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid(), combine(a.parity(), b.parity()));
  const auto& av = a.data();
  const auto& bv = b.data();
  auto& ov = out.data();
  for (std::size_t k = 0; k < ov.size(); ++k) ov[k] = av[k] * bv[k];
  return out;
}

ScalarField multiply_r(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g, flip(f.parity()));
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nr; ++i) out(i, j) = f(i, j) * g.r(i);
  return out;
}

ScalarField sample(const Grid& g, Parity p, double (*fn)(double, double)) {
  return sample_fn(g, p, fn);
}

double integral(const ScalarField& f) {
  const Grid& g = f.grid();
  double total = 0.0;
  for (int j = 0; j < g.nz; ++j) {
    double row = 0.0;
    for (int i = 0; i < g.nr; ++i) row += f(i, j) * g.r(i);
    total += row;
  }
  return 2.0 * M_PI * g.dr * g.dz * total;
}

double lp_norm(const ScalarField& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : f.data()) m = std::max(m, std::abs(x));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
  const Grid& g = f.grid();
  double total = 0.0;
  for (int j = 0; j < g.nz; ++j) {
    double row = 0.0;
    for (int i = 0; i < g.nr; ++i) row += std::pow(std::abs(f(i, j)), p) * g.r(i);
    total += row;
  }
  return std::pow(2.0 * M_PI * g.dr * g.dz * total, 1.0 / p);
}

ScalarField d_dr(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g, flip(f.parity()));
  const double inv2dr = 1.0 / (2.0 * g.dr);
  const int nr = g.nr;
  parallel_for(static_cast<std::size_t>(g.nz), [&](std::size_t jb, std::size_t je) {
    for (std::size_t j = jb; j < je; ++j) {
      const int jj = static_cast<int>(j);
      out(0, jj) = (f(1, jj) - f.axis_ghost(jj)) * inv2dr;
      for (int i = 1; i < nr - 1; ++i)
        out(i, jj) = (f(i + 1, jj) - f(i - 1, jj)) * inv2dr;
      // quadratic-extrapolation ghost: one-sided second-order difference
      out(nr - 1, jj) =
          (3.0 * f(nr - 1, jj) - 4.0 * f(nr - 2, jj) + f(nr - 3, jj)) * inv2dr;
    }
  });
  return out;
}

ScalarField d_dz(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g, f.parity());
  const double inv2dz = 1.0 / (2.0 * g.dz);
  const int nr = g.nr;
  const int nz = g.nz;
  parallel_for(static_cast<std::size_t>(nz), [&](std::size_t jb, std::size_t je) {
    for (std::size_t j = jb; j < je; ++j) {
      const int jj = static_cast<int>(j);
      const int jp = (jj + 1) % nz;
      const int jm = (jj + nz - 1) % nz;
      for (int i = 0; i < nr; ++i) out(i, jj) = (f(i, jp) - f(i, jm)) * inv2dz;
    }
  });
  return out;
}

ScalarField div_axis(const ScalarField& f) {
  if (f.parity() != Parity::odd)
    throw std::invalid_argument("div_axis: input must have odd parity (f/r singular for even f)");
  return quotient_r(f, Parity::even);
}

ScalarField quotient_r(const ScalarField& f, Parity out_parity) {
  const Grid& g = f.grid();
  ScalarField out(g, out_parity);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nr; ++i) out(i, j) = f(i, j) / g.r(i);
  return out;
}

} // namespace axmhd
