// Elliptic solver tests. Oracles: manufactured solutions with closed-form
// right-hand sides for the stream and 5D operators, apply/solve round trips
// (the solver must invert exactly the operator apply() implements, to the
// residual contract), and refinement ratios for the operator-identity
// residual.
#include <doctest.h>

#include "axmhd/elliptic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <random>

using namespace axmhd;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

ScalarField noise(const Grid& g, Parity p, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField f(g, p);
  for (double& x : f.data()) x = u(rng);
  return f;
}

// psi* = r^2 (1 - (r/R)^2)^2 sin(2 pi z / Lz); P and P' vanish at r = R.
double psi_exact(double r, double z, double R, double Lz) {
  const double q = 1.0 - (r / R) * (r / R);
  return r * r * q * q * std::sin(2.0 * M_PI * z / Lz);
}

// wtheta* = -(1/r)(d_r^2 - (1/r) d_r + d_z^2) psi*
double wtheta_exact(double r, double z, double R, double Lz) {
  const double kz = 2.0 * M_PI / Lz;
  const double R2 = R * R;
  const double lapr = -16.0 * r * r / R2 + 24.0 * std::pow(r, 4) / (R2 * R2);
  const double q = 1.0 - r * r / R2;
  return -(lapr - kz * kz * r * r * q * q) * std::sin(kz * z) / r;
}
} // namespace

TEST_CASE("constructor validation") {
  const Grid g = build_grid(16, 16, 1.0, 1.0);
  CHECK_THROWS_AS(EllipticSolver(g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(EllipticSolver(g, 1e-5), std::invalid_argument);
  EllipticSolver s(g, 1e-10);
  CHECK(s.tolerance() == 1e-10);
  CHECK(s.grid() == g);
}

TEST_CASE("stream solve: manufactured solution, second order") {
  double err[2];
  for (int lev = 0; lev < 2; ++lev) {
    const int n = 48 << lev;
    const Grid g = build_grid(n, n, 2.0, 2.0);
    EllipticSolver solver(g);
    const ScalarField w = sample_fn(g, Parity::odd, [&](double r, double z) {
      return wtheta_exact(r, z, g.R, g.Lz);
    });
    const ScalarField psi = solver.solve_stream(w);
    CHECK(psi.parity() == Parity::even);
    const ScalarField ex = sample_fn(g, Parity::even, [&](double r, double z) {
      return psi_exact(r, z, g.R, g.Lz);
    });
    err[lev] = lp_norm(psi - ex, 2.0);
  }
  const double order = std::log2(err[0] / err[1]);
  CHECK(order > 1.9);
  CHECK(order < 2.3);
}

TEST_CASE("laplace5 solve: manufactured solution") {
  // g* = (1 - (r/R)^2)^2 cos(2 pi z / Lz), rhs = (g'' + 3 g'/r - kz^2 g).
  double err[2];
  for (int lev = 0; lev < 2; ++lev) {
    const int n = 48 << lev;
    const Grid g = build_grid(n, n, 1.5, 2.0);
    EllipticSolver solver(g);
    const double R2 = g.R * g.R, kz = 2.0 * M_PI / g.Lz;
    const ScalarField rhs = sample_fn(g, Parity::even, [&](double r, double z) {
      const double s = r * r / R2, q = 1.0 - s;
      const double d2 = -4.0 / R2 * q + 8.0 * r * r / (R2 * R2);
      const double d1_over_r = -4.0 / R2 * q;
      return (d2 + 3.0 * d1_over_r - kz * kz * q * q) * std::cos(kz * z);
    });
    const ScalarField sol = solver.solve_laplace5(rhs);
    const ScalarField ex = sample_fn(g, Parity::even, [&](double r, double z) {
      const double q = 1.0 - r * r / R2;
      return q * q * std::cos(kz * z);
    });
    err[lev] = lp_norm(sol - ex, 2.0);
  }
  CHECK(std::log2(err[0] / err[1]) > 1.9);
}

TEST_CASE("apply/solve round trips satisfy the residual contract") {
  const Grid g = build_grid(40, 32, 1.3, 2.1);
  EllipticSolver solver(g);

  SUBCASE("stream") {
    const ScalarField x = noise(g, Parity::even, 5);
    // apply(stream) x = rhs; solve_stream expects rhs = -r wtheta.
    const ScalarField rhs = solver.apply(OpTag::stream, 0.0, x);
    ScalarField w(g, Parity::odd);
    for (int j = 0; j < g.nz; ++j)
      for (int i = 0; i < g.nr; ++i) w(i, j) = -rhs(i, j) / g.r(i);
    const ScalarField back = solver.solve_stream(w);
    CHECK(lp_norm(back - x, kInf) < 1e-9 * std::max(1.0, lp_norm(x, kInf)));
  }
  SUBCASE("laplace5") {
    const ScalarField x = noise(g, Parity::even, 6);
    const ScalarField back = solver.solve_laplace5(solver.apply(OpTag::laplace5, 0.0, x));
    CHECK(lp_norm(back - x, kInf) < 1e-9);
  }
  SUBCASE("helmholtz family") {
    struct Case {
      OpTag tag;
      Parity p;
    } cases[] = {{OpTag::helmholtz_vort, Parity::odd},
                 {OpTag::helmholtz5, Parity::even},
                 {OpTag::helmholtz_flat, Parity::even}};
    for (const auto& c : cases) {
      const double lambda = 0.037;
      const ScalarField x = noise(g, c.p, 7);
      const ScalarField back =
          solver.solve_helmholtz(c.tag, lambda, solver.apply(c.tag, lambda, x));
      CHECK(lp_norm(back - x, kInf) < 1e-9);
    }
  }
}

TEST_CASE("helmholtz argument validation") {
  const Grid g = build_grid(16, 16, 1.0, 1.0);
  EllipticSolver solver(g);
  const ScalarField e(g, Parity::even, 1.0), o(g, Parity::odd, 1.0);
  CHECK_THROWS_AS(solver.solve_helmholtz(OpTag::helmholtz_flat, 0.0, e), std::invalid_argument);
  CHECK_THROWS_AS(solver.solve_helmholtz(OpTag::helmholtz_flat, -1.0, e), std::invalid_argument);
  CHECK_THROWS_AS(solver.solve_helmholtz(OpTag::helmholtz_vort, 0.1, e), std::invalid_argument);
  CHECK_THROWS_AS(solver.solve_helmholtz(OpTag::stream, 0.1, e), std::invalid_argument);
  CHECK_THROWS_AS(solver.solve_stream(e), std::invalid_argument);
  CHECK_THROWS_AS(solver.solve_laplace5(o), std::invalid_argument);
  CHECK_THROWS_AS(solver.op_ML(o), std::invalid_argument);
  CHECK_THROWS_AS(solver.op_ML_tilde(e), std::invalid_argument);
}

TEST_CASE("zero right-hand side gives the zero solution") {
  const Grid g = build_grid(16, 16, 1.0, 1.0);
  EllipticSolver solver(g);
  CHECK(lp_norm(solver.solve_stream(ScalarField(g, Parity::odd)), kInf) == 0.0);
  CHECK(lp_norm(solver.solve_laplace5(ScalarField(g, Parity::even)), kInf) == 0.0);
}

TEST_CASE("ML operators: linearity and parity") {
  const Grid g = build_grid(32, 32, 1.0, 1.0);
  EllipticSolver solver(g);
  const ScalarField a = noise(g, Parity::even, 20), b = noise(g, Parity::even, 21);
  ScalarField sum = a;
  sum += b;
  const ScalarField lhs = solver.op_ML(sum);
  ScalarField rhs = solver.op_ML(a);
  rhs += solver.op_ML(b);
  CHECK(lp_norm(lhs - rhs, kInf) < 1e-10 * std::max(1.0, lp_norm(lhs, kInf)));
  CHECK(lhs.parity() == Parity::even);

  const ScalarField f = noise(g, Parity::odd, 22);
  CHECK(solver.op_ML_tilde(f).parity() == Parity::even);
}

TEST_CASE("operator identity residual shrinks at second order") {
  auto family = [](const Grid& g, double a) {
    return sample_fn(g, Parity::even, [&](double r, double z) {
      const double q = 1.0 - (r / g.R) * (r / g.R);
      return r * r * q * q * (1.0 + a * std::cos(2.0 * M_PI * z / g.Lz));
    });
  };
  for (double a : {0.5, 1.0}) {
    double res[2];
    for (int lev = 0; lev < 2; ++lev) {
      const int n = 64 << lev;
      const Grid g = build_grid(n, n, 2.0, 2.0);
      EllipticSolver solver(g);
      res[lev] = solver.identity_residual_OL1(family(g, a));
    }
    const double ratio = res[0] / res[1];
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
  }
}

TEST_CASE("operator identity rejects non-axis-vanishing input") {
  const Grid g = build_grid(32, 32, 1.0, 1.0);
  EllipticSolver solver(g);
  CHECK_THROWS_AS(solver.identity_residual_OL1(ScalarField(g, Parity::even, 1.0)),
                  std::invalid_argument);
}
