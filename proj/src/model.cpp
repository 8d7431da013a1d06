#include "kpp/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kpp {

void GrowthParams::validate() const {
  if (!(r1 > 0.0 && r2 > 0.0 && r3 > 0.0))
    throw ValidationError("growth rates r1, r2, r3 must be positive");
  if (!(L > 0.0)) throw ValidationError("patch length L must be positive");
}

void GrowthParams::validate_two_interface() const {
  validate();
  if (!(r2 > std::max(r1, r3)))
    throw ValidationError("two-interface theory requires r2 > max(r1, r3)");
}

Trajectory Trajectory::linear(double cA) {
  Trajectory t{LinearMotion{cA}};
  t.validate();
  return t;
}

Trajectory Trajectory::slow_oscillation(double cA1, double cA2,
                                        std::vector<double> switch_times) {
  Trajectory t{SlowOscillation{cA1, cA2, std::move(switch_times)}};
  t.validate();
  return t;
}

void Trajectory::validate() const {
  if (is_linear()) {
    if (!(as_linear().cA > 0.0))
      throw ValidationError("linear trajectory requires cA > 0");
    return;
  }
  const auto& osc = as_oscillation();
  if (!(0.0 < osc.cA1 && osc.cA1 < osc.cA2))
    throw ValidationError("slow oscillation requires 0 < cA1 < cA2");
  if (osc.switch_times.empty())
    throw ValidationError("slow oscillation requires at least one switch time");
  double prev = 0.0;
  for (double tk : osc.switch_times) {
    if (!(tk > prev))
      throw ValidationError("switch times must be strictly increasing and > 0");
    prev = tk;
  }
}

double eval_A(const Trajectory& traj, double t) {
  if (t < 0.0) throw ValidationError("eval_A: t must be >= 0");
  if (traj.is_linear()) return traj.as_linear().cA * t;
  const auto& osc = traj.as_oscillation();
  double A = 0.0;
  double t_prev = 0.0;
  std::size_t k = 0;
  for (; k < osc.switch_times.size(); ++k) {
    const double slope = (k % 2 == 0) ? osc.cA1 : osc.cA2;
    const double tk = osc.switch_times[k];
    if (t < tk) return A + slope * (t - t_prev);
    A += slope * (tk - t_prev);
    t_prev = tk;
  }
  const double slope = (k % 2 == 0) ? osc.cA1 : osc.cA2;
  return A + slope * (t - t_prev);
}

TrajectoryFn as_fn(const Trajectory& traj) {
  return [traj](double t) { return eval_A(traj, t); };
}

double eval_r(const GrowthParams& params, const TrajectoryFn& A, double t,
              double x) {
  const double a = A(t);
  if (x < a) return params.r1;
  if (x < a + params.L) return params.r2;
  return params.r3;
}

double eval_r(const GrowthParams& params, const Trajectory& traj, double t,
              double x) {
  const double a = eval_A(traj, t);
  if (x < a) return params.r1;
  if (x < a + params.L) return params.r2;
  return params.r3;
}

void StepProfile::validate() const {
  if (values.size() != breakpoints.size() + 1)
    throw ValidationError("step profile needs one value per interval");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw ValidationError("step profile breakpoints must increase strictly");
  for (double v : values)
    if (!(v > 0.0)) throw ValidationError("step profile values must be > 0");
}

double StepProfile::operator()(double y) const {
  // half-open intervals [b_{i-1}, b_i)
  std::size_t i = std::upper_bound(breakpoints.begin(), breakpoints.end(), y) -
                  breakpoints.begin();
  return values[i];
}

double StepProfile::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

StepProfile step_profile(const GrowthParams& params) {
  StepProfile m;
  m.breakpoints = {0.0, 1.0};
  m.values = {params.r1, params.r2, params.r3};
  return m;
}

double eval_reaction(double r, double u) {
  if (u < 0.0) throw ValidationError("eval_reaction: u must be >= 0");
  return r * u * (1.0 - u);
}

namespace {

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario sc;
  sc.params.r1 = j.at("r1").get<double>();
  sc.params.r2 = j.at("r2").get<double>();
  sc.params.r3 = j.at("r3").get<double>();
  sc.params.L = j.at("L").get<double>();
  sc.params.validate();
  const auto& jt = j.at("trajectory");
  const std::string type = jt.at("type").get<std::string>();
  if (type == "linear") {
    sc.traj = Trajectory::linear(jt.at("cA").get<double>());
  } else if (type == "slow_oscillation") {
    sc.traj = Trajectory::slow_oscillation(
        jt.at("cA1").get<double>(), jt.at("cA2").get<double>(),
        jt.at("switch_times").get<std::vector<double>>());
  } else {
    throw ValidationError("unknown trajectory type: " + type);
  }
  return sc;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad scenario JSON: ") + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad scenario JSON: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string scenario_to_json(const Scenario& sc) {
  nlohmann::json j;
  j["r1"] = sc.params.r1;
  j["r2"] = sc.params.r2;
  j["r3"] = sc.params.r3;
  j["L"] = sc.params.L;
  if (sc.traj.is_linear()) {
    j["trajectory"] = {{"type", "linear"}, {"cA", sc.traj.as_linear().cA}};
  } else {
    const auto& osc = sc.traj.as_oscillation();
    j["trajectory"] = {{"type", "slow_oscillation"},
                       {"cA1", osc.cA1},
                       {"cA2", osc.cA2},
                       {"switch_times", osc.switch_times}};
  }
  return j.dump(2);
}

}  // namespace kpp
