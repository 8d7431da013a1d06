#include "kpp/eigenvalue.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kpp {

std::string to_string(EigenCase c) {
  switch (c) {
    case EigenCase::Interior: return "interior";
    case EigenCase::RightCritical: return "right_critical";
    case EigenCase::LeftCritical: return "left_critical";
  }
  return "?";
}

double critical_length(double r1, double r2, double r3) {
  const double mx = std::max(r1, r3);
  if (!(r2 > mx))
    throw ValidationError("critical_length requires r2 > max(r1, r3)");
  if (r1 == r3) return 0.0;
  return arccot(std::sqrt((r2 - mx) / std::abs(r1 - r3))) / std::sqrt(r2 - mx);
}

namespace {

double cot(double x) { return std::cos(x) / std::sin(x); }

// Right-hand side of the transcendental equation for lambda1; increasing
// in lambda on (-r2, -max(r1, r3)).
double zeta(double lam, double r1, double r2, double r3) {
  return (r2 + lam - std::sqrt((r1 + lam) * (r3 + lam))) /
         (std::sqrt(r2 + lam) *
          (std::sqrt(-r1 - lam) + std::sqrt(-r3 - lam)));
}

// cot(L sqrt(r2+lambda)) - zeta(lambda): strictly decreasing, +inf at -r2,
// negative at the upper bracket end; its unique zero is lambda1.
double char_fn(double lam, double r1, double r2, double r3, double L) {
  return cot(L * std::sqrt(r2 + lam)) - zeta(lam, r1, r2, r3);
}

// Constants of the critical-branch system (r1 < r3 flavor). Callers pass
// swapped rates for the mirrored branch.
void fill_right_critical(double r1, double r2, double r3, double L,
                         EigenResult& out) {
  const double b = L * std::sqrt(r2 - r3);
  out.C1 = 1.0;
  out.C3 = arccot(std::sqrt((r3 - r1) / (r2 - r3)));
  out.C2 = 1.0 / std::sin(out.C3);
  out.C4 = std::sqrt(r2 - r3) * std::cos(b + out.C3) / std::sin(out.C3);
  out.C5 = std::sin(b + out.C3) / std::sin(out.C3);
}

}  // namespace

EigenResult lambda1_analytic(const GrowthParams& params) {
  params.validate_two_interface();
  const double r1 = params.r1, r2 = params.r2, r3 = params.r3, L = params.L;
  const double mx = std::max(r1, r3);
  const double lbar = critical_length(r1, r2, r3);

  EigenResult out;
  out.params = params;

  if (L <= lbar) {
    // Patch too short to detach lambda1 from -max(r1, r3).
    out.lambda1 = -mx;
    if (r1 < r3) {
      out.tag = EigenCase::RightCritical;
      fill_right_critical(r1, r2, r3, L, out);
    } else {
      out.tag = EigenCase::LeftCritical;
      fill_right_critical(r3, r2, r1, L, out);
    }
    return out;
  }

  out.tag = EigenCase::Interior;
  const double lam_hi = std::min(-mx, M_PI * M_PI / (L * L) - r2);
  const double nudge = std::min(1e-13 * (r2 - mx), 1e-13);
  const double lo = -r2 + nudge;
  const double hi = lam_hi - nudge;

  auto f = [&](double lam) { return char_fn(lam, r1, r2, r3, L); };
  double lam;
  if (!(f(lo) > 0.0))
    throw std::logic_error("lambda1_analytic: lower bracket lost its sign");
  if (f(hi) >= 0.0) {
    // Root squeezed between hi and lam_hi, already inside the tolerance.
    lam = 0.5 * (hi + lam_hi);
  } else {
    lam = bisect(f, lo, hi, 1e-12);
  }
  out.lambda1 = lam;

  out.C1 = 1.0;
  out.C3 = arccot(std::sqrt((-r1 - lam) / (r2 + lam)));
  out.C2 = 1.0 / std::sin(out.C3);
  const double beta = L * std::sqrt(r2 + lam);
  out.C4 = std::exp(L * std::sqrt(-r3 - lam)) * std::sin(beta + out.C3) /
           std::sin(out.C3);
  return out;
}

double length_for_lambda1(double r1, double r2, double r3,
                          double lambda_target) {
  const double mx = std::max(r1, r3);
  if (!(r2 > mx))
    throw ValidationError("length_for_lambda1 requires r2 > max(r1, r3)");
  if (!(lambda_target > -r2 && lambda_target < -mx))
    throw ValidationError(
        "length_for_lambda1: lambda_target must lie in (-r2, -max(r1, r3))");
  return arccot(zeta(lambda_target, r1, r2, r3)) /
         std::sqrt(r2 + lambda_target);
}

// ---------------------------------------------------------------------------
// Piecewise eigenfunction

PiecewiseEigenfunction::PiecewiseEigenfunction(const GrowthParams& params,
                                               const EigenResult& result)
    : result_(result) {
  const double lam = result.lambda1;
  const double L = params.L;
  if (params.r1 != result.params.r1 || params.r2 != result.params.r2 ||
      params.r3 != result.params.r3 || params.L != result.params.L)
    throw ValidationError("eigenfunction: result was built for other params");
  switch (result.tag) {
    case EigenCase::Interior:
      alpha_ = L * std::sqrt(-params.r1 - lam);
      beta_ = L * std::sqrt(params.r2 + lam);
      gamma_ = L * std::sqrt(-params.r3 - lam);
      break;
    case EigenCase::RightCritical:
      if (!(params.r1 < params.r3) || !result.C5)
        throw ValidationError("eigenfunction: inconsistent case tag");
      alpha_ = L * std::sqrt(params.r3 - params.r1);
      beta_ = L * std::sqrt(params.r2 - params.r3);
      break;
    case EigenCase::LeftCritical:
      if (!(params.r1 > params.r3) || !result.C5)
        throw ValidationError("eigenfunction: inconsistent case tag");
      // constants describe the r1 <-> r3 swapped system
      alpha_ = L * std::sqrt(params.r1 - params.r3);
      beta_ = L * std::sqrt(params.r2 - params.r1);
      reflected_ = true;
      norm_ = *result.C5;
      break;
  }
}

int PiecewiseEigenfunction::side_of(double z) const {
  if (z <= 0.0) return 0;
  if (z < 1.0) return 1;
  return 2;
}

double PiecewiseEigenfunction::raw_value(double z, int side) const {
  const EigenResult& r = result_;
  switch (side) {
    case 0: return std::exp(alpha_ * z);
    case 1: return r.C2 * std::sin(beta_ * z + r.C3);
    default:
      if (r.tag == EigenCase::Interior) return r.C4 * std::exp(-gamma_ * z);
      return r.C4 * r.params.L * (z - 1.0) + *r.C5;
  }
}

double PiecewiseEigenfunction::raw_derivative(double z, int side) const {
  const EigenResult& r = result_;
  switch (side) {
    case 0: return alpha_ * std::exp(alpha_ * z);
    case 1: return r.C2 * beta_ * std::cos(beta_ * z + r.C3);
    default:
      if (r.tag == EigenCase::Interior)
        return -gamma_ * r.C4 * std::exp(-gamma_ * z);
      return r.C4 * r.params.L;
  }
}

double PiecewiseEigenfunction::raw_second(double z, int side) const {
  const EigenResult& r = result_;
  switch (side) {
    case 0: return alpha_ * alpha_ * std::exp(alpha_ * z);
    case 1: return -beta_ * beta_ * r.C2 * std::sin(beta_ * z + r.C3);
    default:
      if (r.tag == EigenCase::Interior)
        return gamma_ * gamma_ * r.C4 * std::exp(-gamma_ * z);
      return 0.0;
  }
}

double PiecewiseEigenfunction::value(double y) const {
  if (!reflected_) return raw_value(y, side_of(y));
  const double z = 1.0 - y;
  return raw_value(z, side_of(z)) / norm_;
}

double PiecewiseEigenfunction::derivative(double y) const {
  if (!reflected_) return raw_derivative(y, side_of(y));
  const double z = 1.0 - y;
  return -raw_derivative(z, side_of(z)) / norm_;
}

double PiecewiseEigenfunction::second_derivative(double y) const {
  if (!reflected_) return raw_second(y, side_of(y));
  const double z = 1.0 - y;
  return raw_second(z, side_of(z)) / norm_;
}

namespace {
int side_below(double z) { return z <= 0.0 ? 0 : (z <= 1.0 ? 1 : 2); }
int side_above(double z) { return z < 0.0 ? 0 : (z < 1.0 ? 1 : 2); }
}  // namespace

double PiecewiseEigenfunction::value_left(double y) const {
  if (!reflected_) return raw_value(y, side_below(y));
  const double z = 1.0 - y;
  return raw_value(z, side_above(z)) / norm_;
}

double PiecewiseEigenfunction::value_right(double y) const {
  if (!reflected_) return raw_value(y, side_above(y));
  const double z = 1.0 - y;
  return raw_value(z, side_below(z)) / norm_;
}

double PiecewiseEigenfunction::derivative_left(double y) const {
  if (!reflected_) return raw_derivative(y, side_below(y));
  const double z = 1.0 - y;
  return -raw_derivative(z, side_above(z)) / norm_;
}

double PiecewiseEigenfunction::derivative_right(double y) const {
  if (!reflected_) return raw_derivative(y, side_above(y));
  const double z = 1.0 - y;
  return -raw_derivative(z, side_below(z)) / norm_;
}

PiecewiseEigenfunction eigenfunction(const GrowthParams& params,
                                     const EigenResult& result) {
  return PiecewiseEigenfunction(params, result);
}

// ---------------------------------------------------------------------------
// Truncated Dirichlet problem

namespace {

VectorX<double> truncated_diagonal(const StepProfile& m, double L, double R,
                                   int n, double& h, double& off) {
  if (!(R > 0.0)) throw ValidationError("lambda1_truncated requires R > 0");
  if (n < 3) throw ValidationError("lambda1_truncated requires n >= 3");
  m.validate();
  h = 2.0 * R / n;
  const double inv = 1.0 / (L * L * h * h);
  off = -inv;
  VectorX<double> diag(n - 1);
  for (int i = 1; i < n; ++i) {
    const double y = -R + i * h;
    // potential from the midpoints of the two adjacent cells
    const double pot = 0.5 * (m(y - 0.5 * h) + m(y + 0.5 * h));
    diag[i - 1] = 2.0 * inv - pot;
  }
  return diag;
}

}  // namespace

double lambda1_truncated(const StepProfile& m, double L, double R, int n) {
  double h, off;
  const VectorX<double> diag = truncated_diagonal(m, L, R, n, h, off);
  return sturm_smallest_eigenvalue(diag, off, 1e-12);
}

TruncatedEigen truncated_eigenpair(const StepProfile& m, double L, double R,
                                   int n) {
  double h, off;
  const VectorX<double> diag = truncated_diagonal(m, L, R, n, h, off);
  TruncatedEigen te;
  te.R = R;
  te.h = h;
  te.lambda = sturm_smallest_eigenvalue(diag, off, 1e-12);
  te.eigenvector = tridiagonal_eigenvector(diag, off, te.lambda);
  const double at0 = te.value(0.0);
  if (at0 == 0.0)
    throw std::logic_error("truncated eigenvector vanished at y = 0");
  te.eigenvector /= at0;  // phi(0) = 1
  return te;
}

double TruncatedEigen::value(double y) const {
  const int n_nodes = int(eigenvector.size());
  const double pos = (y + R) / h;  // node index space, node i at pos = i + 1
  const double s = pos - 1.0;
  if (s <= -1.0 || s >= n_nodes) return 0.0;
  const int i = int(std::floor(s));
  const double w = s - i;
  const double left = (i >= 0 && i < n_nodes) ? eigenvector[i] : 0.0;
  const double right =
      (i + 1 >= 0 && i + 1 < n_nodes) ? eigenvector[i + 1] : 0.0;
  return left * (1.0 - w) + right * w;
}

double TruncatedEigen::derivative(double y) const {
  return (value(y + h) - value(y - h)) / (2.0 * h);
}

LadderResult lambda1_general(const StepProfile& m, double L,
                             const LadderOptions& opt) {
  m.validate();
  if (opt.R_ladder.size() < 2)
    throw ValidationError("lambda1_general needs an R ladder with >= 2 rungs");

  auto eval_at_R = [&](double R) {
    double h = opt.h0;
    double lam = lambda1_truncated(m, L, R, int(std::llround(2.0 * R / h)));
    for (int k = 0; k < opt.max_refinements; ++k) {
      const double h2 = h / 2.0;
      const double lam2 =
          lambda1_truncated(m, L, R, int(std::llround(2.0 * R / h2)));
      const bool done = std::abs(lam2 - lam) < opt.grid_tol;
      h = h2;
      lam = lam2;
      if (done) break;
    }
    return lam;
  };

  LadderResult res;
  double prev = 0.0;
  for (std::size_t k = 0; k < opt.R_ladder.size(); ++k) {
    const double R = opt.R_ladder[k];
    const double lam = eval_at_R(R);
    if (k > 0 && lam > prev + 1e-6)
      throw std::logic_error(
          "lambda1_general: Dirichlet values must not increase with R");
    res.ladder_values.push_back(lam);
    if (k > 0 && std::abs(lam - prev) < opt.stop_tol) {
      res.lambda = lam;
      res.R = R;
      return res;
    }
    prev = lam;
  }
  std::ostringstream msg;
  msg.precision(12);
  msg << "lambda1_general: R-ladder did not converge; last two values "
      << res.ladder_values[res.ladder_values.size() - 2] << ", "
      << res.ladder_values.back();
  throw NonConvergence(msg.str());
}

}  // namespace kpp
