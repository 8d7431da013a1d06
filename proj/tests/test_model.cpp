#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kpp/model.hpp"

#include <cmath>
#include <random>

using namespace kpp;

TEST_CASE("linear trajectory evaluates cA t") {
  const Trajectory traj = Trajectory::linear(3.0);
  CHECK(eval_A(traj, 2.0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(eval_A(traj, 0.0) == 0.0);
  CHECK_THROWS_AS(eval_A(traj, -1.0), ValidationError);
}

TEST_CASE("slow oscillation is exact at switch times") {
  const Trajectory t1 = Trajectory::slow_oscillation(1.0, 2.0, {10.0});
  CHECK(eval_A(t1, 10.0) == doctest::Approx(10.0).epsilon(1e-15));
  const Trajectory t2 = Trajectory::slow_oscillation(1.0, 2.0, {10.0, 100.0});
  // hand evaluation of the iterative definition: 10 + 2 * 90
  CHECK(eval_A(t2, 100.0) == doctest::Approx(190.0).epsilon(1e-15));
  // slope cA1 resumes after the second switch
  CHECK(eval_A(t2, 110.0) == doctest::Approx(200.0).epsilon(1e-15));
}

TEST_CASE("slow oscillation validation") {
  CHECK_THROWS_AS(Trajectory::slow_oscillation(2.0, 1.0, {10.0}),
                  ValidationError);
  CHECK_THROWS_AS(Trajectory::slow_oscillation(1.0, 2.0, {}), ValidationError);
  CHECK_THROWS_AS(Trajectory::slow_oscillation(1.0, 2.0, {10.0, 5.0}),
                  ValidationError);
  CHECK_THROWS_AS(Trajectory::linear(-1.0), ValidationError);
}

TEST_CASE("oscillating trajectories stay inside the speed cone") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.2, 3.0);
  for (int rep = 0; rep < 20; ++rep) {
    const double c1 = uni(rng);
    const double c2 = c1 + uni(rng);
    const Trajectory traj =
        Trajectory::slow_oscillation(c1, c2, {5.0, 25.0, 125.0});
    for (double t = 0.5; t < 200.0; t += 1.7) {
      const double A = eval_A(traj, t);
      CHECK(A >= c1 * t - 1e-12);
      CHECK(A < c2 * t);
    }
  }
}

TEST_CASE("step growth rate with the half-open patch") {
  const GrowthParams p{1.0, 9.0, 4.0, 1.0};
  const Trajectory traj = Trajectory::linear(2.0);
  CHECK(eval_r(p, traj, 0.0, -0.5) == 1.0);
  CHECK(eval_r(p, traj, 1.0, 2.5) == 9.0);
  // patch is [A, A+L): its right endpoint already belongs to the r3 zone
  CHECK(eval_r(p, traj, 1.0, 3.0) == 4.0);
  CHECK(eval_r(p, traj, 1.0, 2.0) == 9.0);
}

TEST_CASE("growth rate has exactly two jumps in x") {
  const GrowthParams p{1.0, 9.0, 4.0, 0.7};
  const Trajectory traj = Trajectory::linear(1.3);
  for (double t : {0.0, 0.9, 7.7}) {
    const double A = eval_A(traj, t);
    int jumps = 0;
    double prev = eval_r(p, traj, t, A - 5.0);
    for (double x = A - 5.0; x < A + 5.0; x += 1e-3) {
      const double r = eval_r(p, traj, t, x);
      if (r != prev) ++jumps;
      prev = r;
    }
    CHECK(jumps == 2);
  }
}

TEST_CASE("logistic reaction prototype") {
  CHECK(eval_reaction(1.0, 0.0) == 0.0);
  CHECK(eval_reaction(1.0, 1.0) == 0.0);
  CHECK(eval_reaction(2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(eval_reaction(1.0, -0.1), ValidationError);
}

TEST_CASE("reaction respects the KPP bounds with M = sup r") {
  const GrowthParams p{1.0, 9.0, 4.0, 1.0};
  const KppReaction reaction = KppReaction::for_params(p);
  CHECK(reaction.M == 9.0);
  for (double r : {1.0, 4.0, 9.0})
    for (double u = 0.0; u <= 2.0; u += 0.01) {
      const double f = eval_reaction(r, u);
      CHECK(f <= r * u + 1e-15);
      CHECK(f >= r * u - reaction.M * u * u - 1e-15);
    }
}

TEST_CASE("growth params validation") {
  CHECK_THROWS_AS((GrowthParams{0.0, 9.0, 1.0, 1.0}).validate(),
                  ValidationError);
  CHECK_THROWS_AS((GrowthParams{1.0, 9.0, 1.0, -1.0}).validate(),
                  ValidationError);
  CHECK_THROWS_AS((GrowthParams{4.0, 2.0, 1.0, 1.0}).validate_two_interface(),
                  ValidationError);
  CHECK_NOTHROW((GrowthParams{1.0, 9.0, 4.0, 1.0}).validate_two_interface());
}

TEST_CASE("step profile lookup and validation") {
  StepProfile m;
  m.breakpoints = {0.0, 1.0};
  m.values = {1.0, 9.0, 4.0};
  m.validate();
  CHECK(m(-0.1) == 1.0);
  CHECK(m(0.0) == 9.0);  // half-open cells
  CHECK(m(0.99) == 9.0);
  CHECK(m(1.0) == 4.0);
  CHECK(m.max_value() == 9.0);

  StepProfile bad;
  bad.breakpoints = {0.0, 0.0};
  bad.values = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("scenario JSON round trip") {
  const std::string text = R"({
    "r1": 1.0, "r2": 9.0, "r3": 4.0, "L": 0.5,
    "trajectory": {"type": "slow_oscillation", "cA1": 4.5, "cA2": 5.0,
                   "switch_times": [40.0, 200.0, 1000.0]}
  })";
  const Scenario sc = parse_scenario(text);
  CHECK(sc.params.r2 == 9.0);
  CHECK(sc.traj.as_oscillation().switch_times.size() == 3);
  const Scenario sc2 = parse_scenario(scenario_to_json(sc));
  CHECK(sc2.params.L == sc.params.L);
  CHECK(sc2.traj.as_oscillation().cA2 == 5.0);

  CHECK_THROWS_AS(parse_scenario("{"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("{\"r1\": 1}"), ValidationError);
  CHECK_THROWS_AS(
      parse_scenario(
          R"({"r1":1,"r2":1,"r3":1,"L":1,"trajectory":{"type":"warp"}})"),
      ValidationError);
}
