#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kpp/numeric.hpp"

#include <cmath>

using namespace kpp;

TEST_CASE("bisect finds the root of cos x - x") {
  auto f = [](double x) { return std::cos(x) - x; };
  const double root = bisect(f, 0.0, 1.0, 1e-14);
  CHECK(std::abs(root - 0.7390851332151607) < 1e-12);
}

TEST_CASE("bisect rejects a non-bracketing interval") {
  auto f = [](double x) { return x * x + 1.0; };
  CHECK_THROWS_AS(bisect(f, -1.0, 1.0, 1e-12), std::logic_error);
}

TEST_CASE("sturm bisection matches the discrete Laplacian spectrum") {
  // eigenvalues of tridiag(-1, 2, -1) of size n: 2 - 2 cos(k pi / (n+1))
  const int n = 257;
  VectorX<double> diag = VectorX<double>::Constant(n, 2.0);
  const double lam = sturm_smallest_eigenvalue(diag, -1.0, 1e-13);
  const double exact = 2.0 - 2.0 * std::cos(M_PI / (n + 1));
  CHECK(std::abs(lam - exact) < 1e-11);
}

TEST_CASE("sturm count is monotone and exact at midpoints") {
  const int n = 64;
  VectorX<double> diag = VectorX<double>::Constant(n, 2.0);
  for (int k = 1; k <= 5; ++k) {
    const double cut = 2.0 - 2.0 * std::cos((k + 0.5) * M_PI / (n + 1));
    CHECK(sturm_count(diag, -1.0, cut) == k);
  }
}

TEST_CASE("tridiagonal eigenvector solves the eigenproblem") {
  const int n = 101;
  VectorX<double> diag = VectorX<double>::Constant(n, 2.0);
  const double lam = sturm_smallest_eigenvalue(diag, -1.0, 1e-13);
  VectorX<double> v = tridiagonal_eigenvector(diag, -1.0, lam);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double Av = diag[i] * v[i];
    if (i > 0) Av -= v[i - 1];
    if (i + 1 < n) Av -= v[i + 1];
    worst = std::max(worst, std::abs(Av - lam * v[i]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("constant-coefficient Thomas solve inverts the matrix") {
  const int n = 50;
  const double d = 1.0 + 2.0 * 0.3, e = -0.3;
  VectorX<double> rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = std::sin(0.1 * i) + 0.5;
  VectorX<double> x, scratch;
  solve_tridiagonal_const(d, e, rhs, x, scratch);
  for (int i = 0; i < n; ++i) {
    double Ax = d * x[i];
    if (i > 0) Ax += e * x[i - 1];
    if (i + 1 < n) Ax += e * x[i + 1];
    CHECK(std::abs(Ax - rhs[i]) < 1e-12);
  }
}

TEST_CASE("line fit recovers slope and intercept exactly on linear data") {
  VectorX<double> t(5), y(5);
  for (int i = 0; i < 5; ++i) {
    t[i] = 1.0 + i;
    y[i] = 3.25 * t[i] - 0.75;
  }
  const LineFit fit = fit_line(t, y);
  CHECK(std::abs(fit.slope - 3.25) < 1e-13);
  CHECK(std::abs(fit.intercept + 0.75) < 1e-12);
  CHECK(fit.rms_residual < 1e-12);
}

TEST_CASE("arccot is decreasing with range (0, pi)") {
  CHECK(std::abs(arccot(0.0) - M_PI / 2) < 1e-15);
  CHECK(arccot(-5.0) > M_PI / 2);
  CHECK(arccot(5.0) < M_PI / 2);
  CHECK(arccot(1e9) > 0.0);
  CHECK(std::abs(arccot(1.0) - M_PI / 4) < 1e-15);
}
