#include "kpp/speed.hpp"

#include <algorithm>
#include <cmath>

namespace kpp {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Slow: return "Slow";
    case Regime::Locked: return "Locked";
    case Regime::NonlocallyPulled: return "NonlocallyPulled";
    case Regime::Fast: return "Fast";
  }
  return "?";
}

double decay_rate(double r, double c) {
  if (!(r > 0.0)) throw ValidationError("decay_rate requires r > 0");
  if (!(c >= 2.0 * std::sqrt(r)))
    throw ValidationError("decay_rate requires c >= 2 sqrt(r)");
  return 0.5 * (c - std::sqrt(c * c - 4.0 * r));
}

double F(double c, double r1, double lambda1) {
  if (!(lambda1 < -r1)) throw ValidationError("F requires lambda1 < -r1");
  const double a = 2.0 * std::sqrt(-lambda1 - r1);
  if (!(c > a))
    throw ValidationError("F requires c > 2 sqrt(-lambda1 - r1)");
  return 0.5 * (c - a) + 2.0 * r1 / (c - a);
}

namespace {

SpeedPrediction classify(double r1, double r3, double lambda1, double cA) {
  SpeedPrediction p;
  p.lambda1 = lambda1;
  p.threshold_slow = 2.0 * std::sqrt(r3);
  p.threshold_locked = 2.0 * std::sqrt(-lambda1);
  p.threshold_fast =
      2.0 * std::sqrt(r1) + 2.0 * std::sqrt(std::max(0.0, -lambda1 - r1));
  if (cA < p.threshold_slow) {
    p.regime = Regime::Slow;
    p.c_star = p.threshold_slow;
  } else if (cA <= p.threshold_locked) {
    p.regime = Regime::Locked;
    p.c_star = cA;
  } else if (cA < p.threshold_fast) {
    p.regime = Regime::NonlocallyPulled;
    p.c_star = F(cA, r1, lambda1);
  } else {
    p.regime = Regime::Fast;
    p.c_star = 2.0 * std::sqrt(r1);
  }
  return p;
}

}  // namespace

SpeedPrediction predict_two_interface(const GrowthParams& params,
                                      const EigenResult& eig, double cA) {
  params.validate_two_interface();
  if (!(cA > 0.0))
    throw ValidationError("predict_two_interface requires cA > 0");
  return classify(params.r1, params.r3, eig.lambda1, cA);
}

SpeedPrediction predict_two_interface(const GrowthParams& params, double cA) {
  return predict_two_interface(params, lambda1_analytic(params), cA);
}

SpeedPrediction predict_single_transition(double r1, double r3, double cA) {
  if (!(r1 > 0.0 && r3 > 0.0))
    throw ValidationError("predict_single_transition requires r1, r3 > 0");
  if (!(cA >= 0.0))
    throw ValidationError("predict_single_transition requires cA >= 0");
  // One transition is the degenerate patch with lambda1 = -max(r1, r3);
  // the six theorem cases coincide with the generic branch cut.
  return classify(r1, r3, -std::max(r1, r3), cA);
}

}  // namespace kpp
