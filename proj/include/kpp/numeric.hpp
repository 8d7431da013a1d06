#ifndef KPP_NUMERIC_HPP
#define KPP_NUMERIC_HPP

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace kpp {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// arccot with range (0, pi); decreasing on the whole real line.
template <typename Scalar>
Scalar arccot(Scalar z) {
  return Scalar(M_PI) / 2 - std::atan(z);
}

/// Bisection for a root of f on [lo, hi], f(lo) and f(hi) of opposite sign.
/// Iterates until the bracket width drops below tol (absolute).
template <typename Scalar, typename F>
Scalar bisect(F&& f, Scalar lo, Scalar hi, Scalar tol) {
  Scalar flo = f(lo);
  Scalar fhi = f(hi);
  if (flo == Scalar(0)) return lo;
  if (fhi == Scalar(0)) return hi;
  if ((flo > 0) == (fhi > 0))
    throw std::logic_error("bisect: endpoints do not bracket a sign change");
  while (hi - lo > tol) {
    Scalar mid = lo + (hi - lo) / 2;
    if (mid == lo || mid == hi) break;  // bracket at machine resolution
    Scalar fm = f(mid);
    if (fm == Scalar(0)) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

/// Thomas algorithm for a constant-coefficient symmetric tridiagonal system
/// (diag d, off-diagonals e). Overwrites x with the solution of T x = rhs.
/// The systems solved here are strictly diagonally dominant.
template <typename Scalar>
void solve_tridiagonal_const(Scalar d, Scalar e, const VectorX<Scalar>& rhs,
                             VectorX<Scalar>& x, VectorX<Scalar>& scratch) {
  const Eigen::Index n = rhs.size();
  x.resize(n);
  scratch.resize(n);
  Scalar beta = d;
  x[0] = rhs[0] / beta;
  for (Eigen::Index i = 1; i < n; ++i) {
    scratch[i] = e / beta;
    beta = d - e * scratch[i];
    x[i] = (rhs[i] - e * x[i - 1]) / beta;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= scratch[i + 1] * x[i + 1];
}

/// Number of eigenvalues of the symmetric tridiagonal matrix
/// tridiag(e, diag, e) that are strictly below x (Sturm sequence count).
template <typename Scalar>
Eigen::Index sturm_count(const VectorX<Scalar>& diag, Scalar e, Scalar x) {
  const Scalar e2 = e * e;
  const Scalar tiny = std::numeric_limits<Scalar>::min() /
                      std::numeric_limits<Scalar>::epsilon();
  Eigen::Index count = 0;
  Scalar q = diag[0] - x;
  if (q < 0) ++count;
  for (Eigen::Index i = 1; i < diag.size(); ++i) {
    if (std::abs(q) < tiny) q = (q < 0 ? -tiny : tiny);
    q = diag[i] - x - e2 / q;
    if (q < 0) ++count;
  }
  return count;
}

/// Smallest eigenvalue of tridiag(e, diag, e) by Sturm-sequence bisection.
template <typename Scalar>
Scalar sturm_smallest_eigenvalue(const VectorX<Scalar>& diag, Scalar e,
                                 Scalar tol) {
  const Scalar ae = std::abs(e);
  Scalar lo = diag.minCoeff() - 2 * ae;
  Scalar hi = diag.maxCoeff() + 2 * ae;
  while (hi - lo > tol) {
    Scalar mid = lo + (hi - lo) / 2;
    if (mid == lo || mid == hi) break;
    if (sturm_count(diag, e, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return lo + (hi - lo) / 2;
}

/// Eigenvector for an isolated eigenvalue of tridiag(e, diag, e) by inverse
/// iteration with a slightly shifted Thomas solve. Normalized to max-norm 1.
template <typename Scalar>
VectorX<Scalar> tridiagonal_eigenvector(const VectorX<Scalar>& diag, Scalar e,
                                        Scalar lambda) {
  const Eigen::Index n = diag.size();
  const Scalar shift = lambda - 64 * std::numeric_limits<Scalar>::epsilon() *
                                    (std::abs(lambda) + std::abs(e));
  VectorX<Scalar> v = VectorX<Scalar>::Constant(n, Scalar(1));
  VectorX<Scalar> w(n), lower(n), du(n), dm(n);
  // LU of tridiag(e, diag - shift, e) without pivoting; the shift keeps the
  // matrix nonsingular and the iteration converges in a couple of sweeps.
  for (int it = 0; it < 4; ++it) {
    Scalar beta = diag[0] - shift;
    w[0] = v[0] / beta;
    for (Eigen::Index i = 1; i < n; ++i) {
      lower[i] = e / beta;
      beta = diag[i] - shift - e * lower[i];
      w[i] = (v[i] - e * w[i - 1]) / beta;
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) w[i] -= lower[i + 1] * w[i + 1];
    v = w / w.cwiseAbs().maxCoeff();
  }
  if (v[n / 2] < 0) v = -v;
  return v;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

/// Least-squares straight line through (t_i, y_i).
template <typename Scalar>
LineFit fit_line(const VectorX<Scalar>& t, const VectorX<Scalar>& y) {
  if (t.size() < 2) throw std::invalid_argument("fit_line: need >= 2 samples");
  const Scalar tm = t.mean();
  const Scalar ym = y.mean();
  const auto dt = (t.array() - tm).matrix();
  const Scalar denom = dt.squaredNorm();
  if (denom <= Scalar(0))
    throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = dt.dot((y.array() - ym).matrix()) / denom;
  fit.intercept = ym - fit.slope * tm;
  const auto res =
      (y.array() - fit.intercept - fit.slope * t.array()).matrix();
  fit.rms_residual = std::sqrt(res.squaredNorm() / double(t.size()));
  return fit;
}

}  // namespace kpp

#endif  // KPP_NUMERIC_HPP
