#ifndef KPP_EIGENVALUE_HPP
#define KPP_EIGENVALUE_HPP

#include "kpp/model.hpp"
#include "kpp/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kpp {

/// Raised when an iterative computation fails to meet its stop rule; the
/// message carries the last two iterates.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Which closed-form branch the eigenpair comes from.
///  Interior      : L > Lbar, lambda1 in (-r2, -max(r1,r3)), bounded phi1
///  RightCritical : r1 < r3 and L <= Lbar, lambda1 = -r3, phi1 linear at +inf
///  LeftCritical  : r1 > r3 and L <= Lbar, lambda1 = -r1, phi1 linear at -inf
enum class EigenCase { Interior, RightCritical, LeftCritical };

std::string to_string(EigenCase c);

/// Principal eigenvalue of -(L^-2 d^2/dy^2 + m) on the line together with
/// the constants of the piecewise eigenfunction, normalized so phi1(0) = 1
/// (C1 = 1 always). C5 only exists on the critical branches; on those
/// branches the stored constants are the ones of the right-critical system
/// (for LeftCritical they describe the r1 <-> r3 swapped profile and the
/// eigenfunction is evaluated through the reflection y -> 1 - y).
struct EigenResult {
  double lambda1 = 0.0;
  EigenCase tag = EigenCase::Interior;
  double C1 = 1.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double C4 = 0.0;
  std::optional<double> C5;
  GrowthParams params;
};

/// Pointwise evaluation of the piecewise eigenfunction and its first two
/// derivatives (exact per piece).
class PiecewiseEigenfunction {
 public:
  PiecewiseEigenfunction(const GrowthParams& params, const EigenResult& result);

  double value(double y) const;
  double derivative(double y) const;
  double second_derivative(double y) const;

  /// One-sided limits at the matching points y=0 and y=1.
  double value_left(double y) const;
  double value_right(double y) const;
  double derivative_left(double y) const;
  double derivative_right(double y) const;

  const EigenResult& result() const { return result_; }

 private:
  double raw_value(double z, int side) const;
  double raw_derivative(double z, int side) const;
  double raw_second(double z, int side) const;
  int side_of(double z) const;

  EigenResult result_;
  // rates of the (possibly swapped) construction
  double alpha_ = 0.0;  // left exponential rate  L*sqrt(-rl - lambda1)
  double beta_ = 0.0;   // interior sine rate     L*sqrt(r2 + lambda1)
  double gamma_ = 0.0;  // right exponential rate L*sqrt(-rr - lambda1), Interior only
  bool reflected_ = false;
  double norm_ = 1.0;  // divisor making phi(0) = 1 after reflection
};

/// Critical patch length Lbar below which the patch cannot move lambda1 away
/// from -max(r1, r3). Zero when r1 = r3.
double critical_length(double r1, double r2, double r3);

/// Closed-form / root-found principal eigenvalue with the eigenfunction
/// constants filled in per case. Requires r2 > max(r1, r3).
EigenResult lambda1_analytic(const GrowthParams& params);

/// Unique L with lambda1_analytic(r1, r2, r3, L) = lambda_target, for
/// lambda_target strictly inside (-r2, -max(r1, r3)).
double length_for_lambda1(double r1, double r2, double r3,
                          double lambda_target);

/// Builds the evaluator for a result produced by lambda1_analytic on the
/// same parameters.
PiecewiseEigenfunction eigenfunction(const GrowthParams& params,
                                     const EigenResult& result);

/// Principal Dirichlet eigenpair of -(L^-2 d^2/dy^2 + m) on (-R, R),
/// discretized on n cells (n-1 interior nodes), potential from cell-midpoint
/// samples of m, eigenvalue by Sturm-sequence bisection to 1e-12.
struct TruncatedEigen {
  double lambda = 0.0;
  double R = 0.0;
  double h = 0.0;               // grid spacing 2R/n
  VectorX<double> eigenvector;  // interior nodes, normalized so phi(0) = 1

  /// Linear interpolation of the eigenvector (0 outside (-R, R)).
  double value(double y) const;
  /// Central difference of the interpolant at the grid scale.
  double derivative(double y) const;
  double max_value() const { return eigenvector.maxCoeff(); }
};

double lambda1_truncated(const StepProfile& m, double L, double R, int n);
TruncatedEigen truncated_eigenpair(const StepProfile& m, double L, double R,
                                   int n);

struct LadderOptions {
  std::vector<double> R_ladder = {10.0, 20.0, 40.0, 80.0};
  double stop_tol = 1e-6;    // |lambda(R_k) - lambda(R_{k-1})|
  double grid_tol = 2.5e-7;  // |lambda(h) - lambda(h/2)| per R
  double h0 = 1.0 / 512.0;   // coarsest spacing, halved until grid_tol
  int max_refinements = 3;
};

struct LadderResult {
  double lambda = 0.0;
  double R = 0.0;
  std::vector<double> ladder_values;
};

/// Generalized principal eigenvalue via the truncated Dirichlet limit on an
/// increasing R-ladder. Values are asserted nonincreasing in R; throws
/// NonConvergence (with the last two values) if the ladder is exhausted
/// before the stop rule triggers.
LadderResult lambda1_general(const StepProfile& m, double L,
                             const LadderOptions& opt = {});

}  // namespace kpp

#endif  // KPP_EIGENVALUE_HPP
