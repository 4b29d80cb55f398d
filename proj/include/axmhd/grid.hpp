// Cell-centered cylindrical (r,z) mesh, the weighted measure 2*pi*r dr dz,
// and parity-aware second-order finite-difference stencils.
//
// Radial nodes sit at r_i = (i + 1/2) dr (0-based), so no node touches the
// axis and every 1/r quotient is finite. The axis ghost cell mirrors the
// first interior cell with a sign set by the field's parity under r -> -r.
// The z direction is periodic. The outer radial edge of d_dr uses quadratic
// extrapolation (exact on parabolas); elliptic operators impose their own
// outer boundary rules.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace axmhd {

enum class Parity { even, odd };

inline Parity flip(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }
inline Parity combine(Parity a, Parity b) {
  return a == b ? Parity::even : Parity::odd;
}

struct Grid {
  int nr = 0;
  int nz = 0;
  double R = 0.0;
  double Lz = 0.0;
  double dr = 0.0;
  double dz = 0.0;

  double r(int i) const { return (i + 0.5) * dr; }
  double rface(int i) const { return i * dr; } // face i sits between cells i-1 and i
  double z(int j) const { return j * dz; }
  std::size_t cells() const { return static_cast<std::size_t>(nr) * nz; }

  bool operator==(const Grid&) const = default;
};

// nr, nz >= 4; R, Lz > 0. Throws std::invalid_argument otherwise.
Grid build_grid(int nr, int nz, double R, double Lz);

class ScalarField {
public:
  ScalarField() = default;
  ScalarField(const Grid& g, Parity p, double fill = 0.0);

  const Grid& grid() const { return grid_; }
  Parity parity() const { return parity_; }
  void set_parity(Parity p) { parity_ = p; }

  // Row-major, i fastest: index (i,j) -> j*nr + i.
  double& operator()(int i, int j) { return v_[static_cast<std::size_t>(j) * grid_.nr + i]; }
  double operator()(int i, int j) const { return v_[static_cast<std::size_t>(j) * grid_.nr + i]; }

  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  // Axis mirror value for cell (i=-1 ghost), i.e. parity-signed f(0,j).
  double axis_ghost(int j) const {
    const double s = (parity_ == Parity::even) ? 1.0 : -1.0;
    return s * (*this)(0, j);
  }

  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);

private:
  Grid grid_{};
  Parity parity_ = Parity::even;
  std::vector<double> v_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double a, ScalarField f);

// Pointwise product; parity combines (even*even=even, even*odd=odd, odd*odd=even).
ScalarField multiply(const ScalarField& a, const ScalarField& b);

// f(i,j) -> f(i,j) * r_i. Parity flips.
ScalarField multiply_r(const ScalarField& f);

// Fills from fn(r,z); parity declared by caller.
ScalarField sample(const Grid& g, Parity p, double (*fn)(double, double));

template <class Fn>
ScalarField sample_fn(const Grid& g, Parity p, Fn&& fn) {
  ScalarField f(g, p);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nr; ++i) f(i, j) = fn(g.r(i), g.z(j));
  return f;
}

// Midpoint rule for \int f 2 pi r dr dz. Summation order is fixed: each row j
// is summed over ascending i, then row partials are summed over ascending j.
double integral(const ScalarField& f);

// (integral |f|^p)^{1/p} for finite p >= 1, grid max of |f| for p = inf
// (pass p = std::numeric_limits<double>::infinity()). Throws on p < 1.
double lp_norm(const ScalarField& f, double p);

// Centered second-order d/dr with axis parity ghost; quadratic-extrapolation
// ghost at the outer wall. Output parity flips.
ScalarField d_dr(const ScalarField& f);

// Centered second-order d/dz with periodic wrap. Parity unchanged.
ScalarField d_dz(const ScalarField& f);

// f/r pointwise for odd f; output is even. Throws on even input.
ScalarField div_axis(const ScalarField& f);

// Raw pointwise f/r with caller-declared output parity. Used where an even,
// axis-vanishing field is divided by r (e.g. u^r = -d_dz(psi)/r).
ScalarField quotient_r(const ScalarField& f, Parity out_parity);

} // namespace axmhd
