#ifndef KPP_SPEED_HPP
#define KPP_SPEED_HPP

#include "kpp/eigenvalue.hpp"
#include "kpp/model.hpp"

#include <string>

namespace kpp {

enum class Regime { Slow, Locked, NonlocallyPulled, Fast };

std::string to_string(Regime r);

/// Closed-form spreading-speed prediction: regime label, c*, the three
/// regime thresholds in cA, and the lambda1 the branches were cut with.
struct SpeedPrediction {
  Regime regime = Regime::Slow;
  double c_star = 0.0;
  double threshold_slow = 0.0;    // 2 sqrt(r3)
  double threshold_locked = 0.0;  // 2 sqrt(-lambda1)
  double threshold_fast = 0.0;    // 2 sqrt(r1) + 2 sqrt(-lambda1 - r1)
  double lambda1 = 0.0;
};

/// Decay rate of the e^{-lambda (x - ct)} tail: smaller root of
/// lambda^2 - c lambda + r = 0. Requires c >= 2 sqrt(r).
double decay_rate(double r, double c);

/// Nonlocal-pulling speed transfer. Requires lambda1 < -r1 and
/// c > 2 sqrt(-lambda1 - r1).
double F(double c, double r1, double lambda1);

/// Main-theorem predictor for the moving patch at constant speed cA > 0.
/// The locked branch is closed on both ends; the nonlocally pulled branch is
/// open; the fast branch closed on the left, mirroring the formula.
SpeedPrediction predict_two_interface(const GrowthParams& params, double cA);
SpeedPrediction predict_two_interface(const GrowthParams& params,
                                      const EigenResult& eig, double cA);

/// Single-transition predictor (r2 = r3 reduction), valid for cA >= 0 and
/// also for r1 = r3.
SpeedPrediction predict_single_transition(double r1, double r3, double cA);

}  // namespace kpp

#endif  // KPP_SPEED_HPP
