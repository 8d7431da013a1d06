#include "kpp/eigenvalue.hpp"
#include "kpp/io.hpp"
#include "kpp/model.hpp"
#include "kpp/optimize.hpp"
#include "kpp/sim.hpp"
#include "kpp/speed.hpp"
#include "kpp/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

using nlohmann::json;

namespace {

struct ParamFlags {
  double r1 = 1.0, r2 = 9.0, r3 = 1.0;
  double L = 0.0;
  double lambda1 = 0.0;
  CLI::Option* oL = nullptr;
  CLI::Option* olam = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--r1", r1, "left growth rate")->required();
    cmd->add_option("--r2", r2, "patch growth rate")->required();
    cmd->add_option("--r3", r3, "right growth rate")->required();
    oL = cmd->add_option("--L", L, "patch length");
    olam = cmd->add_option("--lambda1", lambda1,
                           "target principal eigenvalue (inverts to L)");
    oL->excludes(olam);
  }

  kpp::GrowthParams resolve() const {
    kpp::GrowthParams p{r1, r2, r3, 1.0};
    const bool has_L = oL && oL->count() > 0;
    const bool has_lambda1 = olam && olam->count() > 0;
    if (has_L == has_lambda1)
      throw kpp::ValidationError("specify exactly one of --L / --lambda1");
    p.L = has_L ? L : kpp::resolve_length(r1, r2, r3, lambda1);
    p.validate_two_interface();
    return p;
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) vals.push_back(std::stod(item));
  }
  if (vals.empty()) throw kpp::ValidationError("empty list: " + text);
  return vals;
}

std::vector<double> parse_sweep(const std::string& text) {
  // min:max:n
  double lo, hi;
  int n;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 2 ||
      !(hi > lo))
    throw kpp::ValidationError("bad sweep spec (want min:max:n): " + text);
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * i / (n - 1);
  return grid;
}

json prediction_json(const kpp::SpeedPrediction& p) {
  return json{{"regime", kpp::to_string(p.regime)},
              {"c_star", p.c_star},
              {"lambda1", p.lambda1},
              {"thresholds",
               {{"slow", p.threshold_slow},
                {"locked", p.threshold_locked},
                {"fast", p.threshold_fast}}}};
}

json report_json(const kpp::CheckReport& rep) {
  return json{{"samples", rep.samples},
              {"violations", rep.violations},
              {"worst_residual", rep.worst_residual},
              {"angle_ok", rep.angle_ok},
              {"angle_margin", rep.angle_margin},
              {"notes", rep.notes},
              {"pass", rep.pass}};
}

std::string out_path(const std::string& dir, const std::string& name) {
  return dir + "/" + name;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
}

// ---------------------------------------------------------------------------

int cmd_eigen(const ParamFlags& pf, bool numeric, const std::string& emit_fn,
              const std::string& out_dir) {
  const kpp::GrowthParams p = pf.resolve();
  json j;
  j["r1"] = p.r1;
  j["r2"] = p.r2;
  j["r3"] = p.r3;
  j["L"] = p.L;
  j["L_bar"] = kpp::critical_length(p.r1, p.r2, p.r3);
  if (numeric) {
    const kpp::LadderResult lr = kpp::lambda1_general(kpp::step_profile(p), p.L);
    j["method"] = "truncated_dirichlet_ladder";
    j["lambda1"] = lr.lambda;
    j["R_used"] = lr.R;
    j["ladder"] = lr.ladder_values;
  } else {
    const kpp::EigenResult eig = kpp::lambda1_analytic(p);
    j["method"] = "analytic";
    j["lambda1"] = eig.lambda1;
    j["case"] = kpp::to_string(eig.tag);
    j["C1"] = eig.C1;
    j["C2"] = eig.C2;
    j["C3"] = eig.C3;
    j["C4"] = eig.C4;
    if (eig.C5) j["C5"] = *eig.C5;
    if (!emit_fn.empty()) {
      const kpp::PiecewiseEigenfunction phi = kpp::eigenfunction(p, eig);
      kpp::CsvWriter csv(emit_fn, {"y", "phi", "dphi"});
      for (int i = -500; i <= 600; ++i) {
        const double y = i / 100.0;
        csv.row({y, phi.value(y), phi.derivative(y)});
      }
      csv.close();
      ensure_dir(out_dir);
      kpp::write_manifest(out_dir, "eigen", j.dump(), {emit_fn});
    }
  }
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_predict(const ParamFlags& pf, double cA, const std::string& sweep,
                const std::string& out_dir) {
  const kpp::GrowthParams p = pf.resolve();
  const kpp::EigenResult eig = kpp::lambda1_analytic(p);
  if (!sweep.empty()) {
    const std::vector<double> grid = parse_sweep(sweep);
    ensure_dir(out_dir);
    const std::string path = out_path(out_dir, "predict_sweep.csv");
    kpp::CsvWriter csv(path, {"cA", "regime", "c_star"});
    for (double c : grid) {
      const kpp::SpeedPrediction pr = kpp::predict_two_interface(p, eig, c);
      csv.row_mixed({kpp::fmt_g(c), kpp::to_string(pr.regime),
                     kpp::fmt_g(pr.c_star)});
    }
    csv.close();
    json j{{"sweep_csv", path}, {"points", grid.size()}};
    kpp::write_manifest(out_dir, "predict", j.dump(), {path});
    std::cout << j.dump(2) << std::endl;
    return 0;
  }
  const kpp::SpeedPrediction pr = kpp::predict_two_interface(p, eig, cA);
  std::cout << prediction_json(pr).dump(2) << std::endl;
  return 0;
}

int cmd_simulate(const std::string& config, double dx, double dt, double T,
                 double theta, const std::string& emit_trace,
                 int profile_every, bool moving_frame,
                 const std::string& out_dir) {
  const kpp::Scenario sc = kpp::load_scenario(config);
  kpp::SimSettings settings;
  settings.dx = dx;
  settings.dt = dt;
  settings.T = T;
  settings.theta = theta;

  double c_pred = 2.0 * std::sqrt(sc.params.r2);  // safe domain bound
  if (sc.traj.is_linear() && sc.params.r2 > std::max(sc.params.r1, sc.params.r3)) {
    c_pred = kpp::predict_two_interface(sc.params, sc.traj.as_linear().cA).c_star;
  } else if (sc.params.r1 == sc.params.r2 && sc.params.r2 == sc.params.r3) {
    c_pred = 2.0 * std::sqrt(sc.params.r1);
  }
  const kpp::TrajectoryFn A = kpp::as_fn(sc.traj);
  const kpp::Grid grid = kpp::make_grid(sc.params, A, c_pred, settings);

  ensure_dir(out_dir);
  kpp::RunOptions opt;
  opt.theta = theta;
  opt.moving_frame = moving_frame;
  std::vector<std::string> outputs;
  std::unique_ptr<kpp::CsvWriter> profiles;
  long snapshot = 0;
  if (profile_every > 0) {
    profiles = std::make_unique<kpp::CsvWriter>(
        out_path(out_dir, "profiles.csv"),
        std::vector<std::string>{"snapshot", "t", "x", "u"});
    opt.observer_stride = profile_every;
    const int stride = std::max(1, grid.node_count() / 2000);
    opt.observer = [&](const kpp::State& st) {
      for (int i = 0; i < grid.node_count(); i += stride)
        profiles->row({double(snapshot), st.t, grid.node(i), st.u[i]});
      ++snapshot;
    };
  }

  const kpp::FrontTrace trace = kpp::run(grid, sc.params, A, opt);

  json j;
  j["config"] = json::parse(kpp::scenario_to_json(sc));
  j["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max},
               {"dx", grid.dx},       {"dt", grid.dt},
               {"T", grid.T},         {"theta", theta}};
  j["fitted_speed"] = trace.fitted_speed;
  j["fit_rms"] = trace.fit_rms;
  j["final_front_x"] = trace.front_x.back();

  if (!emit_trace.empty()) {
    kpp::CsvWriter csv(emit_trace, {"t", "front_x"});
    for (std::size_t i = 0; i < trace.times.size(); ++i)
      csv.row({trace.times[i], trace.front_x[i]});
    csv.close();
    outputs.push_back(emit_trace);
  }
  if (profiles) {
    profiles->close();
    outputs.push_back(out_path(out_dir, "profiles.csv"));
  }
  if (!outputs.empty()) kpp::write_manifest(out_dir, "simulate", j.dump(), outputs);
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_verify_sweep(const ParamFlags& pf, const std::string& grid_list,
                     kpp::SimSettings settings, const std::string& out_dir) {
  const kpp::GrowthParams p = pf.resolve();
  const std::vector<double> grid = parse_list(grid_list);
  const auto rows = kpp::sweep_speed_curve(p, grid, settings);
  ensure_dir(out_dir);
  const std::string path = out_path(out_dir, "sweep.csv");
  kpp::CsvWriter csv(path, {"cA", "regime", "c_star", "fitted_speed", "rel_gap"});
  json verdicts = json::array();
  bool all_ok = true;
  for (const auto& row : rows) {
    csv.row_mixed({kpp::fmt_g(row.cA), kpp::to_string(row.prediction.regime),
                   kpp::fmt_g(row.prediction.c_star),
                   kpp::fmt_g(row.fitted_speed), kpp::fmt_g(row.rel_gap)});
    const bool ok = row.rel_gap <= 0.10;
    all_ok = all_ok && ok;
    verdicts.push_back({{"cA", row.cA},
                        {"regime", kpp::to_string(row.prediction.regime)},
                        {"c_star", row.prediction.c_star},
                        {"fitted_speed", row.fitted_speed},
                        {"rel_gap", row.rel_gap},
                        {"pass", ok}});
  }
  csv.close();
  json j{{"points", verdicts}, {"pass", all_ok}, {"csv", path}};
  kpp::write_manifest(out_dir, "verify sweep", j.dump(), {path});
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_verify_corollary(const std::string& config, const std::string& kind_s,
                         kpp::SimSettings settings, const std::string& out_dir) {
  const kpp::Scenario sc = kpp::load_scenario(config);
  kpp::CorollaryKind kind;
  if (kind_s == "slow")
    kind = kpp::CorollaryKind::SlowPatch;
  else if (kind_s == "fast")
    kind = kpp::CorollaryKind::FastPatch;
  else
    throw kpp::ValidationError("--kind must be slow or fast");
  const kpp::CorollaryVerdict v = kpp::corollary_bounds(
      sc.params, kpp::as_fn(sc.traj), kind, settings);
  json j{{"applicable", v.applicable},
         {"kind", kind_s},
         {"target_speed", v.target_speed},
         {"fitted_speed", v.fitted_speed},
         {"detail", v.detail},
         {"pass", v.pass}};
  ensure_dir(out_dir);
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_verify_oscillate(const ParamFlags& pf, double cA1, double cA2,
                         const std::string& switches, kpp::SimSettings settings,
                         const std::string& out_dir) {
  const kpp::GrowthParams p = pf.resolve();
  const auto rep = kpp::oscillation_experiment(p, cA1, cA2,
                                               parse_list(switches), settings);
  ensure_dir(out_dir);
  const std::string path = out_path(out_dir, "oscillation.csv");
  kpp::CsvWriter csv(path, {"t_begin", "t_end", "cA", "fitted_speed", "target"});
  for (const auto& iv : rep.intervals)
    csv.row({iv.t_begin, iv.t_end, iv.cA, iv.fitted_speed, iv.target});
  csv.close();
  json j{{"lambda1", rep.lambda1},
         {"F_cA1", rep.F1},
         {"F_cA2", rep.F2},
         {"late_speed_spread", rep.late_speed_spread},
         {"alternation_ok", rep.alternation_ok},
         {"csv", path}};
  kpp::write_manifest(out_dir, "verify oscillate", j.dump(), {path});
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_verify_supersub(const ParamFlags& pf, double cA,
                        const std::string& out_dir) {
  const kpp::GrowthParams p = pf.resolve();
  const kpp::EigenResult eig = kpp::lambda1_analytic(p);
  const double lock_hi = 2.0 * std::sqrt(-eig.lambda1);
  kpp::SampleGrid sgrid;
  json j;
  bool all_pass = true;

  kpp::SuperSolutionStep1 s1{p, cA};
  const kpp::CheckReport r1 = kpp::check_supersolution(s1, sgrid);
  j["step1"] = report_json(r1);
  all_pass = all_pass && r1.pass;

  if (cA > lock_hi) {
    kpp::SuperSolutionStep2 s2;
    s2.params = p;
    s2.eig = eig;
    s2.cA = cA;
    s2.c = kpp::predict_two_interface(p, eig, cA).c_star;
    const kpp::CheckReport r2 = kpp::check_supersolution(s2, sgrid);
    j["step2"] = report_json(r2);
    all_pass = all_pass && r2.pass;
  }

  const double step4_lo = 2.0 * std::sqrt(std::max(p.r1, p.r3));
  const double step4_hi =
      2.0 * std::sqrt(p.r1) + 2.0 * std::sqrt(std::max(0.0, -eig.lambda1 - p.r1));
  if (cA > step4_lo && cA < step4_hi &&
      std::abs(eig.lambda1 + p.r1) > 1e-12) {
    const kpp::SubSolutionSpec sub = kpp::make_default_subsolution(p, cA);
    const kpp::CheckReport r4 = kpp::check_subsolution(sub, sgrid);
    j["step4"] = report_json(r4);
    all_pass = all_pass && r4.pass;
  }

  j["pass"] = all_pass;
  ensure_dir(out_dir);
  std::cout << j.dump(2) << std::endl;
  return all_pass ? 0 : 2;
}

int cmd_verify_interface(const ParamFlags& pf, double cA, double t_max,
                         const std::string& out_dir) {
  const kpp::GrowthParams p = pf.resolve();
  const kpp::SubSolutionSpec sub = kpp::make_default_subsolution(p, cA);
  std::vector<double> ts;
  for (int i = 0; i <= 200; ++i) ts.push_back(t_max * i / 200.0);
  const kpp::InterfaceTrace tr = kpp::solve_interface(sub, ts);
  ensure_dir(out_dir);
  const std::string path = out_path(out_dir, "interface.csv");
  kpp::CsvWriter csv(path, {"t", "X", "slope_left", "slope_right"});
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    csv.row({tr.times[i], tr.X[i], tr.slope_left[i], tr.slope_right[i]});
  csv.close();
  json j{{"properties_ok", tr.properties_ok},
         {"min_gap_to_patch", tr.min_gap_to_patch},
         {"max_gap_to_patch", tr.max_gap_to_patch},
         {"notes", tr.notes},
         {"csv", path}};
  kpp::write_manifest(out_dir, "verify interface", j.dump(), {path});
  std::cout << j.dump(2) << std::endl;
  return tr.properties_ok ? 0 : 2;
}

int cmd_optimize(double r1, double h, double A, double W, int cells,
                 int starts, const std::string& out_dir) {
  kpp::Budget budget{r1, h, A, W, cells};
  const kpp::BruteForceResult bf = kpp::brute_force_optimum(budget);
  bool contiguous = true;
  for (const auto& cand : bf.tied)
    contiguous = contiguous && cand.is_contiguous(budget.h);

  bool local_matches = true;
  for (int s = 0; s < starts; ++s) {
    const auto ls = kpp::local_search(budget, false, 1234 + s);
    if (std::abs(ls.best.lambda1 - bf.best.lambda1) > 1e-8)
      local_matches = false;
  }

  ensure_dir(out_dir);
  const std::string path = out_path(out_dir, "optimal_profile.csv");
  kpp::CsvWriter csv(path, {"cell", "increment"});
  for (std::size_t i = 0; i < bf.best.increments.size(); ++i)
    csv.row({double(i), bf.best.increments[i]});
  csv.close();

  json j{{"lambda1", bf.best.lambda1},
         {"contiguous", contiguous},
         {"tie_count", bf.tied.size()},
         {"candidates", bf.candidates},
         {"local_search_matches", local_matches},
         {"csv", path}};
  kpp::write_manifest(out_dir, "optimize", j.dump(), {path});
  std::cout << j.dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spreading-speed laboratory for the 1D KPP equation with a "
               "moving favorable patch"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "directory for output artifacts");

  // eigen
  auto* eigen_cmd = app.add_subcommand("eigen", "principal eigenvalue");
  ParamFlags eig_pf;
  eig_pf.attach(eigen_cmd);
  bool numeric = false;
  std::string emit_fn;
  eigen_cmd->add_flag("--numeric", numeric, "force the truncated solver");
  eigen_cmd->add_option("--emit-eigenfunction", emit_fn,
                        "write CSV y,phi,dphi");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "closed-form speed");
  ParamFlags pred_pf;
  pred_pf.attach(predict_cmd);
  double cA = 0.0;
  std::string sweep_spec;
  auto* cA_opt = predict_cmd->add_option("--cA", cA, "patch speed");
  predict_cmd->add_option("--sweep", sweep_spec, "cA_min:cA_max:n CSV sweep");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "PDE run with front tracking");
  std::string config;
  double dx = 0.05, dt = 0.01, T = 200.0, theta = 0.01;
  std::string emit_trace;
  int profile_every = 0;
  bool moving_frame = false;
  sim_cmd->add_option("--config", config, "scenario JSON")->required();
  sim_cmd->add_option("--dx", dx, "grid spacing");
  sim_cmd->add_option("--dt", dt, "time step");
  sim_cmd->add_option("--T", T, "horizon");
  sim_cmd->add_option("--theta", theta, "front tracking level");
  sim_cmd->add_option("--emit-trace", emit_trace, "front trace CSV");
  sim_cmd->add_option("--emit-profile-every", profile_every,
                      "profile snapshot stride (steps)");
  sim_cmd->add_flag("--moving-frame", moving_frame,
                    "shift the window with the front");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "scenario harnesses");
  verify_cmd->require_subcommand(1);
  kpp::SimSettings vset;
  double v_cA = 5.0, v_cA1 = 4.5, v_cA2 = 5.0, v_tmax = 100.0;
  std::string v_grid = "1,3,5,6", v_config, v_kind = "slow",
              v_switches = "40,200,1000";

  auto add_sim_flags = [&](CLI::App* c) {
    c->add_option("--dx", vset.dx);
    c->add_option("--dt", vset.dt);
    c->add_option("--T", vset.T);
    c->add_option("--theta", vset.theta);
    c->add_option("--jobs", vset.jobs);
  };
  auto* vsweep = verify_cmd->add_subcommand("sweep", "speed-vs-cA curve");
  ParamFlags vsweep_pf;
  vsweep_pf.attach(vsweep);
  vsweep->add_option("--cA-grid", v_grid, "comma-separated cA values");
  add_sim_flags(vsweep);

  auto* vcor = verify_cmd->add_subcommand("corollary", "slow/fast patch bounds");
  vcor->add_option("--config", v_config, "scenario JSON")->required();
  vcor->add_option("--kind", v_kind, "slow | fast");
  add_sim_flags(vcor);

  auto* vosc = verify_cmd->add_subcommand("oscillate", "speed splitting");
  ParamFlags vosc_pf;
  vosc_pf.attach(vosc);
  vosc->add_option("--cA1", v_cA1, "slow patch speed");
  vosc->add_option("--cA2", v_cA2, "fast patch speed");
  vosc->add_option("--switch-times", v_switches, "comma-separated times");
  add_sim_flags(vosc);

  auto* vss = verify_cmd->add_subcommand("supersub",
                                         "super/sub-solution certification");
  ParamFlags vss_pf;
  vss_pf.attach(vss);
  vss->add_option("--cA", v_cA, "patch speed");

  auto* vif = verify_cmd->add_subcommand("interface", "interface X(t)");
  ParamFlags vif_pf;
  vif_pf.attach(vif);
  vif->add_option("--cA", v_cA, "patch speed");
  vif->add_option("--t-max", v_tmax, "time grid end");

  // optimize
  auto* opt_cmd = app.add_subcommand("optimize", "bang-bang patch shape");
  opt_cmd->set_help_flag("--help", "print help");  // frees -h for the height cap
  double o_r1 = 1.0, o_h = 8.0, o_A = 8.0, o_W = 3.0;
  int o_cells = 12, o_starts = 20;
  opt_cmd->add_option("--r1", o_r1, "base rate")->required();
  opt_cmd->add_option("--h", o_h, "height cap")->required();
  opt_cmd->add_option("--A", o_A, "mass cap")->required();
  opt_cmd->add_option("--W", o_W, "support window width")->required();
  opt_cmd->add_option("--cells", o_cells, "cells")->required();
  opt_cmd->add_option("--starts", o_starts, "local search restarts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // --help exits 0, malformed flags exit 1
  }

  try {
    if (eigen_cmd->parsed())
      return cmd_eigen(eig_pf, numeric, emit_fn, out_dir);
    if (predict_cmd->parsed()) {
      if (sweep_spec.empty() && cA_opt->count() == 0)
        throw kpp::ValidationError("predict needs --cA or --sweep");
      return cmd_predict(pred_pf, cA, sweep_spec, out_dir);
    }
    if (sim_cmd->parsed())
      return cmd_simulate(config, dx, dt, T, theta, emit_trace, profile_every,
                          moving_frame, out_dir);
    if (verify_cmd->parsed()) {
      if (vsweep->parsed())
        return cmd_verify_sweep(vsweep_pf, v_grid, vset, out_dir);
      if (vcor->parsed())
        return cmd_verify_corollary(v_config, v_kind, vset, out_dir);
      if (vosc->parsed())
        return cmd_verify_oscillate(vosc_pf, v_cA1, v_cA2, v_switches, vset,
                                    out_dir);
      if (vss->parsed()) return cmd_verify_supersub(vss_pf, v_cA, out_dir);
      if (vif->parsed())
        return cmd_verify_interface(vif_pf, v_cA, v_tmax, out_dir);
    }
    if (opt_cmd->parsed())
      return cmd_optimize(o_r1, o_h, o_A, o_W, o_cells, o_starts, out_dir);
  } catch (const kpp::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << std::endl;
    return 1;
  } catch (const kpp::NonConvergence& e) {
    std::cerr << "runtime failure: " << e.what() << std::endl;
    return 2;
  } catch (const kpp::RuntimeFailure& e) {
    std::cerr << "runtime failure: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 1;
}
