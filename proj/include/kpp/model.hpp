#ifndef KPP_MODEL_HPP
#define KPP_MODEL_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace kpp {

/// Raised when user-supplied data violates a precondition. The CLI maps it
/// to exit code 1, runtime failures (boundary contamination, non-convergence)
/// to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Step growth rate with a moving favorable patch: r1 left of the patch,
/// r2 on [A(t), A(t)+L), r3 to the right.
struct GrowthParams {
  double r1 = 1.0;
  double r2 = 1.0;
  double r3 = 1.0;
  double L = 1.0;

  void validate() const;
  /// Additional standing assumption of the two-interface theory.
  void validate_two_interface() const;
  double max_rate() const { return r1 > r3 ? (r1 > r2 ? r1 : r2)
                                           : (r3 > r2 ? r3 : r2); }
};

struct LinearMotion {
  double cA = 1.0;
};

/// Piecewise-linear motion alternating between two slopes: slope cA1 on
/// [t_{2n}, t_{2n+1}), slope cA2 on [t_{2n+1}, t_{2n+2}), with A(0) = 0 and
/// an explicit finite switch-time list t1 < t2 < ... (t0 = 0 implicit).
/// The last interval extends to +infinity with its active slope.
struct SlowOscillation {
  double cA1 = 1.0;
  double cA2 = 2.0;
  std::vector<double> switch_times;
};

struct Trajectory {
  std::variant<LinearMotion, SlowOscillation> motion;

  static Trajectory linear(double cA);
  static Trajectory slow_oscillation(double cA1, double cA2,
                                     std::vector<double> switch_times);
  void validate() const;
  bool is_linear() const {
    return std::holds_alternative<LinearMotion>(motion);
  }
  const LinearMotion& as_linear() const {
    return std::get<LinearMotion>(motion);
  }
  const SlowOscillation& as_oscillation() const {
    return std::get<SlowOscillation>(motion);
  }
};

/// Patch position A(t). Exact at switch times; Linear gives cA * t.
double eval_A(const Trajectory& traj, double t);

/// Step growth rate r(t, x) with the half-open patch [A(t), A(t)+L).
double eval_r(const GrowthParams& params, const Trajectory& traj, double t,
              double x);

/// Arbitrary rightward patch motions accepted by the simulator; no closed
/// form speed prediction attaches to these.
using TrajectoryFn = std::function<double(double)>;

TrajectoryFn as_fn(const Trajectory& traj);

double eval_r(const GrowthParams& params, const TrajectoryFn& A, double t,
              double x);

/// Piecewise-constant growth profile on the line: values[i] on
/// [breakpoints[i-1], breakpoints[i]), constant near both infinities.
struct StepProfile {
  std::vector<double> breakpoints;  // strictly increasing
  std::vector<double> values;       // size = breakpoints.size() + 1, all > 0

  void validate() const;
  double operator()(double y) const;
  double max_value() const;
};

/// Two-interface profile of the main theorem in patch coordinates
/// (jumps at y = 0 and y = 1).
StepProfile step_profile(const GrowthParams& params);

/// Logistic KPP nonlinearity f = r u (1 - u); the quadratic constant M
/// (= sup r) only feeds verifier tolerances.
struct KppReaction {
  double M = 1.0;

  static KppReaction for_params(const GrowthParams& params) {
    return KppReaction{params.max_rate()};
  }
};

/// f(t, x, u) for the logistic prototype, r already evaluated at (t, x).
double eval_reaction(double r, double u);

/// Scenario configuration (JSON): keys r1, r2, r3, L,
/// trajectory {type, cA | cA1, cA2, switch_times[]}.
struct Scenario {
  GrowthParams params;
  Trajectory traj;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& sc);

}  // namespace kpp

#endif  // KPP_MODEL_HPP
