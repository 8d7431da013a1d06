#include "kpp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace kpp {

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(10);
  ss << v;
  return ss.str();
}

}  // namespace

double resolve_length(double r1, double r2, double r3,
                      double lambda1_target) {
  const double mx = std::max(r1, r3);
  if (std::abs(lambda1_target + mx) < 1e-12) {
    if (r1 == r3)
      throw ValidationError(
          "lambda1 = -max(r1, r3) is unreachable when r1 = r3");
    return 0.5 * critical_length(r1, r2, r3);
  }
  return length_for_lambda1(r1, r2, r3, lambda1_target);
}

Grid make_grid(const GrowthParams& params, const TrajectoryFn& A,
               double c_pred, const SimSettings& s) {
  Grid g;
  g.dx = s.dx;
  g.dt = s.dt;
  g.T = s.T;
  const double right_extent =
      std::max(c_pred * s.T, A(s.T) + params.L) + s.pad_right;
  const double left_extent = 2.0 * std::sqrt(params.r1) * s.T + s.pad_left;
  g.x_min = -s.dx * std::ceil(left_extent / s.dx);
  g.x_max = s.dx * std::ceil(right_extent / s.dx);
  return g;
}

// ---------------------------------------------------------------------------
// Sweep

std::vector<SweepRow> sweep_speed_curve(const GrowthParams& params,
                                        const std::vector<double>& cA_grid,
                                        const SimSettings& settings) {
  params.validate_two_interface();
  const EigenResult eig = lambda1_analytic(params);

  auto run_point = [&](double cA) {
    SweepRow row;
    row.cA = cA;
    row.prediction = predict_two_interface(params, eig, cA);
    const TrajectoryFn A = [cA](double t) { return cA * t; };
    const Grid grid =
        make_grid(params, A, std::max(row.prediction.c_star, cA), settings);
    RunOptions opt;
    opt.theta = settings.theta;
    const FrontTrace trace = run(grid, params, A, opt);
    row.fitted_speed = trace.fitted_speed;
    row.rel_gap =
        std::abs(row.fitted_speed - row.prediction.c_star) /
        row.prediction.c_star;
    return row;
  };

  std::vector<SweepRow> rows(cA_grid.size());
  if (settings.jobs <= 1) {
    for (std::size_t i = 0; i < cA_grid.size(); ++i)
      rows[i] = run_point(cA_grid[i]);
    return rows;
  }
  std::vector<std::future<SweepRow>> futs;
  futs.reserve(cA_grid.size());
  for (double cA : cA_grid)
    futs.push_back(std::async(std::launch::async, run_point, cA));
  for (std::size_t i = 0; i < futs.size(); ++i) rows[i] = futs[i].get();
  return rows;
}

// ---------------------------------------------------------------------------
// Corollaries

CorollaryVerdict corollary_bounds(const GrowthParams& params,
                                  const TrajectoryFn& A, CorollaryKind kind,
                                  const SimSettings& settings, double rel_tol) {
  params.validate();
  CorollaryVerdict v;
  v.kind = kind;

  // envelope hypothesis on samples; the slow-patch quotient only from
  // t_min on (the patch of positive length always violates it near t = 0)
  const int n_samples = 512;
  const double t_min = 0.05 * settings.T;
  bool hypothesis = true;
  if (kind == CorollaryKind::SlowPatch) {
    v.target_speed = 2.0 * std::sqrt(params.r3);
    for (int i = 0; i < n_samples; ++i) {
      const double t =
          t_min + (settings.T - t_min) * (i + 0.5) / n_samples;
      if (A(t) + params.L > v.target_speed * t + 1e-9) {
        hypothesis = false;
        v.detail = "slow envelope violated at t = " + fmt(t);
        break;
      }
    }
  } else {
    if (!(params.r2 >= params.r1))
      throw ValidationError("fast-patch corollary requires r2 >= r1");
    const double threshold =
        2.0 * std::sqrt(params.r1) + 2.0 * std::sqrt(params.r2 - params.r1);
    v.target_speed = 2.0 * std::sqrt(params.r1);
    for (int i = 0; i < n_samples; ++i) {
      const double t = settings.T * (i + 0.5) / n_samples;
      if (A(t) < threshold * t - 1e-9) {
        hypothesis = false;
        v.detail = "fast envelope violated at t = " + fmt(t);
        break;
      }
    }
  }
  if (!hypothesis) {
    v.applicable = false;
    v.pass = false;
    return v;
  }
  v.applicable = true;

  const Grid grid = make_grid(params, A, v.target_speed, settings);
  RunOptions opt;
  opt.theta = settings.theta;
  const FrontTrace trace = run(grid, params, A, opt);
  v.fitted_speed = trace.fitted_speed;
  v.pass = std::abs(v.fitted_speed - v.target_speed) <=
           rel_tol * v.target_speed;
  if (v.detail.empty())
    v.detail = "fitted " + fmt(v.fitted_speed) + " vs target " +
               fmt(v.target_speed);
  return v;
}

// ---------------------------------------------------------------------------
// Oscillation experiment

OscillationReport oscillation_experiment(const GrowthParams& params,
                                         double cA1, double cA2,
                                         const std::vector<double>& switch_times,
                                         const SimSettings& settings) {
  params.validate_two_interface();
  if (!(0.0 < cA1 && cA1 <= cA2))
    throw ValidationError("oscillation requires 0 < cA1 <= cA2");
  if (switch_times.empty())
    throw ValidationError("oscillation requires switch times");

  const EigenResult eig = lambda1_analytic(params);
  const double lam1 = eig.lambda1;
  if (!(lam1 != -params.r1) || std::abs(lam1 + params.r1) < 1e-14)
    throw ValidationError("oscillation theorem requires lambda1 != -r1");
  const double lo = 2.0 * std::sqrt(-lam1);
  const double hi = 2.0 * std::sqrt(params.r1) +
                    2.0 * std::sqrt(-lam1 - params.r1);
  if (!(lo < cA1 && cA2 < hi))
    throw ValidationError(
        "oscillation requires 2 sqrt(-lambda1) < cA1 <= cA2 < "
        "2 sqrt(r1) + 2 sqrt(-lambda1 - r1)");

  // piecewise-linear patch motion; slope cA1 first, alternating at the
  // switch times (cA1 = cA2 degenerates to a single speed)
  std::vector<double> knots{0.0};
  knots.insert(knots.end(), switch_times.begin(), switch_times.end());
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i] > knots[i - 1]))
      throw ValidationError("switch times must increase strictly");
  auto slope_of = [&](std::size_t interval) {
    return interval % 2 == 0 ? cA1 : cA2;
  };
  std::vector<double> A_at_knots(knots.size(), 0.0);
  for (std::size_t i = 1; i < knots.size(); ++i)
    A_at_knots[i] = A_at_knots[i - 1] +
                    slope_of(i - 1) * (knots[i] - knots[i - 1]);
  const TrajectoryFn A = [=](double t) {
    std::size_t i = std::upper_bound(knots.begin(), knots.end(), t) -
                    knots.begin();
    if (i == 0) return 0.0;
    return A_at_knots[i - 1] + slope_of(i - 1) * (t - knots[i - 1]);
  };

  OscillationReport rep;
  rep.lambda1 = lam1;
  rep.F1 = F(cA1, params.r1, lam1);
  rep.F2 = F(cA2, params.r1, lam1);

  SimSettings s = settings;
  s.T = switch_times.back();
  const Grid grid = make_grid(params, A, rep.F1, s);
  RunOptions opt;
  opt.theta = s.theta;
  opt.floor_samples = 0;
  const FrontTrace trace = run(grid, params, A, opt);

  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    IntervalSpeed iv;
    iv.t_begin = knots[i];
    iv.t_end = knots[i + 1];
    iv.fit_t0 = iv.t_begin + 0.6 * (iv.t_end - iv.t_begin);
    iv.cA = slope_of(i);
    iv.target = F(iv.cA, params.r1, lam1);
    iv.fitted_speed = trace.fit_window(iv.fit_t0, iv.t_end).slope;
    rep.intervals.push_back(iv);
  }

  double lo_speed = std::numeric_limits<double>::infinity();
  double hi_speed = -lo_speed;
  bool alternation = true;
  for (std::size_t i = 1; i < rep.intervals.size(); ++i) {
    const auto& iv = rep.intervals[i];
    lo_speed = std::min(lo_speed, iv.fitted_speed);
    hi_speed = std::max(hi_speed, iv.fitted_speed);
    const double other = (iv.cA == cA1) ? rep.F2 : rep.F1;
    if (rep.F1 != rep.F2 && std::abs(iv.fitted_speed - iv.target) >=
                                std::abs(iv.fitted_speed - other))
      alternation = false;
  }
  rep.late_speed_spread =
      rep.intervals.size() > 1 ? hi_speed - lo_speed : 0.0;
  rep.alternation_ok = alternation;
  return rep;
}

// ---------------------------------------------------------------------------
// Super-solutions

namespace {

struct Accum {
  CheckReport rep;
  double tol = 1e-10;

  Accum() { rep.angle_margin = std::numeric_limits<double>::infinity(); }

  // sign = +1 checks N >= -tol (super), sign = -1 checks N <= tol (sub)
  void add(double N, double t, double x, int sign) {
    ++rep.samples;
    const double margin = sign * N;
    if (margin < -tol) {
      ++rep.violations;
      const double severity = -margin;
      if (severity > rep.worst_residual) {
        rep.worst_residual = severity;
        rep.worst_t = t;
        rep.worst_x = x;
      }
    }
  }
  void angle(double margin, const std::string& where) {
    rep.angle_margin = std::min(rep.angle_margin, margin);
    if (margin < -1e-10) {
      rep.angle_ok = false;
      rep.notes.push_back("angle condition violated at " + where +
                          " (margin " + fmt(margin) + ")");
    }
  }
  void finish() {
    if (!std::isfinite(rep.angle_margin)) rep.angle_margin = 0.0;
    rep.pass = rep.violations == 0 && rep.angle_ok;
  }
};

}  // namespace

CheckReport check_supersolution(const SuperSolutionStep1& spec,
                                const SampleGrid& grid) {
  spec.params.validate_two_interface();
  if (!(spec.cA > 0.0)) throw ValidationError("step-1 spec requires cA > 0");
  const double r3 = spec.params.r3;
  const double cbar = std::max(2.0 * std::sqrt(r3), spec.cA);
  const double lam = decay_rate(r3, cbar);
  const Trajectory traj = Trajectory::linear(spec.cA);

  Accum acc;
  acc.angle(2.0 * lam, "x = cbar t + L");  // slope gap, t-independent

  for (int it = 0; it < grid.nt; ++it) {
    const double t = grid.t_max * (it + 0.5) / grid.nt;
    const double xI = cbar * t + spec.params.L;
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double s = -30.0 + 70.0 * (ix + 0.37) / grid.nx;
      const double x = xI + s;
      const double r = eval_r(spec.params, traj, t, x);
      double N;
      if (s < 0.0) {
        N = -eval_reaction(r, 2.0);  // plateau at 2: N = 2 r > 0
      } else {
        const double u = 2.0 * std::exp(-lam * s);
        N = (lam * cbar - lam * lam) * u - eval_reaction(r, u);
      }
      acc.add(N, t, x, +1);
    }
  }
  acc.finish();
  return acc.rep;
}

void SuperSolutionStep2::validate() const {
  params.validate_two_interface();
  const double lam1 = eig.lambda1;
  if (!(cA > 2.0 * std::sqrt(-lam1)))
    throw ValidationError("step-2 spec requires cA > 2 sqrt(-lambda1)");
  if (!(c >= 2.0 * std::sqrt(params.r1) && c < cA))
    throw ValidationError("step-2 spec requires 2 sqrt(r1) <= c < cA");
}

CheckReport check_supersolution(const SuperSolutionStep2& spec,
                                const SampleGrid& grid) {
  spec.validate();
  const GrowthParams& p = spec.params;
  const double lam = decay_rate(p.r1, spec.c);
  const PiecewiseEigenfunction phi = eigenfunction(p, spec.eig);
  const Trajectory traj = Trajectory::linear(spec.cA);

  Accum acc;
  // interface x = ct - ln2/lambda: plateau meets the exponential tail
  acc.angle(2.0 * lam, "x = c t - ln 2 / lambda(c)");
  // interface x = cA t: the patch-frame angle condition, t-independent
  const double phi_slope = phi.derivative_right(0.0) / p.L;
  const double patch_margin = spec.cA / 2.0 - lam - phi_slope;
  acc.angle(patch_margin, "x = cA t");

  const double span3 = 3.0 * p.L + 25.0;
  for (int it = 0; it < grid.nt; ++it) {
    const double t = grid.t_max * (it + 0.5) / grid.nt;
    const double b1 = spec.c * t - std::log(2.0) / lam;
    const double b2 = spec.cA * t;
    const double pref = std::exp(-lam * (spec.cA - spec.c) * t);
    for (int ix = 0; ix < grid.nx; ++ix) {
      // samples across all three pieces
      const double frac = (ix + 0.37) / grid.nx;
      double x, N;
      if (frac < 0.15) {
        x = b1 - 12.0 * (0.15 - frac) / 0.15 - 0.01;
        const double r = eval_r(p, traj, t, x);
        N = -eval_reaction(r, 2.0);
      } else if (frac < 0.55) {
        x = b1 + (b2 - b1) * (frac - 0.15) / 0.40;
        if (x <= b1 || x >= b2) continue;
        const double u = std::exp(-lam * (x - spec.c * t));
        const double r = eval_r(p, traj, t, x);
        N = (lam * spec.c - lam * lam) * u - eval_reaction(r, u);
      } else {
        x = b2 + span3 * (frac - 0.55) / 0.45 + 1e-7;
        const double y = (x - spec.cA * t) / p.L;
        const double E = std::exp(-spec.cA * (x - spec.cA * t) / 2.0);
        const double u = pref * E * phi.value(y);
        const double r = eval_r(p, traj, t, x);
        N = pref * E *
                ((-lam * (spec.cA - spec.c) + spec.cA * spec.cA / 4.0) *
                     phi.value(y) -
                 phi.second_derivative(y) / (p.L * p.L)) -
            eval_reaction(r, u);
      }
      acc.add(N, t, x, +1);
    }
  }
  acc.finish();
  return acc.rep;
}

// ---------------------------------------------------------------------------
// Sub-solution

void SubSolutionSpec::validate() const {
  params.validate_two_interface();
  const double r1 = params.r1;
  const double sq = std::sqrt(c * c - 4.0 * r1);
  if (!(cA > 2.0 * std::sqrt(std::max(r1, params.r3))))
    throw ValidationError("sub-solution requires cA > 2 sqrt(max(r1, r3))");
  if (!(lambda1 < -r1))
    throw ValidationError("sub-solution requires lambda1 < -r1");
  if (!(cA < 2.0 * std::sqrt(r1) + 2.0 * std::sqrt(-lambda1 - r1)))
    throw ValidationError("sub-solution requires cA below the fast threshold");
  if (!(c > 2.0 * std::sqrt(r1) && c < cA))
    throw ValidationError("sub-solution requires 2 sqrt(r1) < c < cA");
  if (!(c < F(cA, r1, lambda1)))
    throw ValidationError("sub-solution requires c < F(cA)");
  if (!(eta > 0.0 && eta < std::min(lambda_c, sq)))
    throw ValidationError(
        "sub-solution requires eta < min(lambda(c), sqrt(c^2 - 4 r1))");
  if (!(S > std::max(1.0, M / (eta * (sq - eta)))))
    throw ValidationError("sub-solution requires S above the claim bound");
  if (!(Rprime > M_PI / (2.0 * std::sqrt(r1))))
    throw ValidationError("sub-solution requires R' > pi / (2 sqrt(r1))");
  if (!(iota > 0.0 && iota <= 1.0))
    throw ValidationError("sub-solution requires iota in (0, 1]");
  const double x0_bound =
      -phiR.R * params.L -
      std::log(S * (lambda_c + eta) / lambda_c) / eta;
  if (!(x0 < x0_bound))
    throw ValidationError("sub-solution requires x0 below the P-monotonicity bound");
  if (!(sigma > 0.0))
    throw ValidationError("sub-solution requires sigma > 0");
  if (!(delta > 0.0)) throw ValidationError("sub-solution requires delta > 0");
  // Dirichlet eigenvalue must keep the patch-frame coefficient below -delta
  const double coef = phiR.lambda - lambda_c * (cA - c) + cA * cA / 4.0;
  if (!(coef <= -delta))
    throw ValidationError("sub-solution requires lambda1^R close enough to lambda1");
}

double SubSolutionSpec::O(double x) const {
  return sigma *
         std::sin(M_PI / (2.0 * Rprime) * (x - support_left()));
}

double SubSolutionSpec::P(double t, double x) const {
  const double s = x - c * t - x0;
  return std::exp(-lambda_c * s) - S * std::exp(-(lambda_c + eta) * s);
}

double SubSolutionSpec::dx_P(double t, double x) const {
  const double s = x - c * t - x0;
  return -lambda_c * std::exp(-lambda_c * s) +
         S * (lambda_c + eta) * std::exp(-(lambda_c + eta) * s);
}

double SubSolutionSpec::Q(double t, double x) const {
  const double y = (x - cA * t) / params.L;
  return gamma * std::exp(-lambda_c * (cA - c) * t) *
         std::exp(-cA * (x - cA * t) / 2.0) * phiR.value(y);
}

double SubSolutionSpec::dx_Q(double t, double x) const {
  const double y = (x - cA * t) / params.L;
  const double env = gamma * std::exp(-lambda_c * (cA - c) * t) *
                     std::exp(-cA * (x - cA * t) / 2.0);
  return env * (-cA / 2.0 * phiR.value(y) + phiR.derivative(y) / params.L);
}

double SubSolutionSpec::interface(double t) const {
  const double L = params.L;
  const double left = cA * t - phiR.R * L;
  const double right = cA * t;
  auto D = [&](double x) { return P(t, x) - Q(t, x); };
  const int n_scan = 4096;
  double lo = left;
  if (!(D(left) > 0.0))
    throw ValidationError("interface: P <= Q at the support edge");
  for (int j = 1; j <= n_scan; ++j) {
    const double x = left + (right - left) * j / n_scan;
    const double d = D(x);
    if (d <= 0.0) {
      // keep lo on the D > 0 side; return the first point where Q >= P so
      // that X stays strictly inside (cA t - R L, cA t)
      double hi = x;
      for (int it = 0; it < 200 && hi - lo > 0; ++it) {
        const double mid = lo + (hi - lo) / 2;
        if (mid == lo || mid == hi) break;
        if (D(mid) > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      return hi;
    }
    lo = x;
  }
  throw ValidationError(
      "interface: no P-Q crossing in (cA t - R L, cA t); construction "
      "parameters inadmissible");
}

double SubSolutionSpec::value(double t, double x) const {
  if (x < support_left()) return 0.0;
  if (x < ramp_end()) return iota * O(x);
  if (x < plateau_end(t)) return iota * sigma / 2.0;
  const double X = interface(t);
  if (x < X) return iota * P(t, x);
  return iota * Q(t, x);
}

SubSolutionSpec make_default_subsolution(const GrowthParams& params, double cA,
                                         double epsilon, double iota) {
  params.validate_two_interface();
  const EigenResult eig = lambda1_analytic(params);
  const double lam1 = eig.lambda1;
  const double r1 = params.r1;
  if (std::abs(lam1 + r1) < 1e-12)
    throw ValidationError("sub-solution recipe requires lambda1 != -r1");
  const double hi = 2.0 * std::sqrt(r1) + 2.0 * std::sqrt(-lam1 - r1);
  if (!(cA > 2.0 * std::sqrt(std::max(r1, params.r3)) && cA < hi))
    throw ValidationError("sub-solution recipe: cA outside the step-4 range");

  SubSolutionSpec sp;
  sp.params = params;
  sp.lambda1 = lam1;
  sp.cA = cA;
  sp.iota = iota;
  sp.M = params.r2;  // r u (1 - u) >= r u - r2 u^2 for u >= 0

  const double c_star = std::min(cA, F(cA, r1, lam1));
  sp.c = c_star - epsilon;
  if (!(sp.c > 2.0 * std::sqrt(r1)))
    throw ValidationError("sub-solution recipe: epsilon too large");
  sp.lambda_c = decay_rate(r1, sp.c);
  const double w = std::sqrt(sp.c * sp.c - 4.0 * r1);

  sp.eta = 0.5 * std::min(sp.lambda_c, w);
  sp.S = 2.0 * std::max(1.0, sp.M / (sp.eta * (w - sp.eta)));
  sp.Rprime = M_PI / std::sqrt(r1);

  // coefficient gap delta and the truncation radius R achieving it
  sp.delta = 0.5 * std::abs(lam1 - sp.lambda_c * (cA - sp.c) + cA * cA / 4.0);
  const StepProfile m = step_profile(params);
  const double h_grid = 1.0 / 512.0;
  bool found = false;
  for (double R : {10.0, 15.0, 20.0, 30.0, 40.0, 60.0, 80.0}) {
    const int n = int(std::llround(2.0 * R / h_grid));
    TruncatedEigen te = truncated_eigenpair(m, params.L, R, n);
    if (std::abs(te.lambda - lam1) < sp.delta / 2.0) {
      sp.phiR = std::move(te);
      found = true;
      break;
    }
  }
  if (!found)
    throw ValidationError(
        "sub-solution recipe: no truncation radius ties lambda1^R to lambda1 "
        "within delta/2");

  // peak of P(0, .) relative to x - c t - x0
  const double s_peak =
      std::log(sp.S * (sp.lambda_c + sp.eta) / sp.lambda_c) / sp.eta;
  const double maxP = std::exp(-sp.lambda_c * s_peak) *
                      (sp.eta / (sp.lambda_c + sp.eta));
  sp.sigma = maxP;  // half of the admissible bound 2 max P

  sp.x0 = 2.0 * (-sp.phiR.R * params.L - s_peak);

  // smallest x1 > 0 with P(0, x1 + x0 + ln S / eta) = sigma / 2
  const double lnS_over_eta = std::log(sp.S) / sp.eta;
  auto gfun = [&](double x) {
    return sp.P(0.0, x + sp.x0 + lnS_over_eta) - sp.sigma / 2.0;
  };
  const double x1_hi = s_peak - lnS_over_eta;
  if (!(x1_hi > 0.0) || !(gfun(x1_hi) > 0.0))
    throw ValidationError("sub-solution recipe: x1 bracket failed");
  sp.x1 = bisect(gfun, 1e-12, x1_hi, 1e-13);

  // gamma from the smallness condition with a factor-1/2 margin
  sp.gamma = 0.5 * sp.delta /
             (sp.M * std::exp(cA * sp.phiR.R * params.L / 2.0) *
              sp.phiR.max_value());

  sp.validate();
  return sp;
}

CheckReport check_subsolution(const SubSolutionSpec& spec,
                              const SampleGrid& grid) {
  spec.validate();
  const GrowthParams& p = spec.params;
  const Trajectory traj = Trajectory::linear(spec.cA);
  const double w = std::sqrt(spec.c * spec.c - 4.0 * p.r1);
  const double coefR =
      spec.phiR.lambda - spec.lambda_c * (spec.cA - spec.c) +
      spec.cA * spec.cA / 4.0;

  Accum acc;
  acc.rep.notes.push_back(
      "patch-frame piece checked through the Dirichlet eigen identity; "
      "coefficient " + fmt(coefR) + " <= -delta = " + fmt(-spec.delta));

  // t-independent interfaces first
  const double slope_O_left = spec.iota * spec.sigma * M_PI /
                              (2.0 * spec.Rprime);  // cos(0) = 1
  acc.angle(slope_O_left, "support left edge");
  const double slope_O_right =
      spec.iota * spec.sigma * M_PI / (2.0 * spec.Rprime) *
      std::cos(M_PI / (2.0 * spec.Rprime) * (spec.ramp_end() - spec.support_left()));
  acc.angle(-slope_O_right, "ramp-plateau joint");
  acc.angle(spec.iota * spec.dx_P(0.0, spec.plateau_end(0.0)),
            "plateau-P joint");

  for (int it = 0; it < grid.nt; ++it) {
    const double t = grid.t_max * (it + 0.5) / grid.nt;
    const double b0 = spec.support_left();
    const double b1 = spec.ramp_end();
    const double b2 = spec.plateau_end(t);
    const double X = spec.interface(t);
    const double b4 = spec.support_right(t);

    // interface angle conditions at X(t) and the support end
    acc.angle(-spec.iota * spec.dx_P(t, X), "P side of X(t)");
    acc.angle(spec.iota * spec.dx_Q(t, X), "Q side of X(t)");
    acc.angle(-spec.iota * spec.dx_Q(t, b4 - 1e-9), "support right edge");
    // continuity at X(t): the crossing is resolved to the position ulp, so
    // the residual is bounded by the local slopes times that resolution
    const double jump = std::abs(spec.P(t, X) - spec.Q(t, X));
    const double jump_tol =
        64.0 * std::numeric_limits<double>::epsilon() *
            std::max(1.0, std::abs(X)) *
            (std::abs(spec.dx_P(t, X)) + std::abs(spec.dx_Q(t, X))) +
        1e-300;
    if (jump > jump_tol)
      acc.rep.notes.push_back("P-Q mismatch " + fmt(jump) + " at t = " + fmt(t));

    for (int ix = 0; ix < grid.nx; ++ix) {
      const double frac = (ix + 0.37) / grid.nx;
      double x, N;
      if (frac < 0.15) {
        // sine ramp
        x = b0 + (b1 - b0) * (frac / 0.15);
        if (x <= b0 || x >= b1) continue;
        const double v = spec.iota * spec.O(x);
        const double r = eval_r(p, traj, t, x);
        N = (M_PI * M_PI / (4.0 * spec.Rprime * spec.Rprime)) * v -
            eval_reaction(r, v);
      } else if (frac < 0.30) {
        // plateau
        x = b1 + (b2 - b1) * ((frac - 0.15) / 0.15);
        if (x <= b1 || x >= b2) continue;
        const double v = spec.iota * spec.sigma / 2.0;
        N = -eval_reaction(eval_r(p, traj, t, x), v);
      } else if (frac < 0.70) {
        // main front piece P
        x = b2 + (X - b2) * ((frac - 0.30) / 0.40);
        if (x <= b2 || x >= X) continue;
        const double s = x - spec.c * t - spec.x0;
        const double E1 = std::exp(-spec.lambda_c * s);
        const double E2 = std::exp(-(spec.lambda_c + spec.eta) * s);
        const double v = spec.iota * (E1 - spec.S * E2);
        const double dt_minus_dxx =
            spec.iota *
            (p.r1 * (E1 - spec.S * E2) -
             spec.S * spec.eta * (w - spec.eta) * E2);
        N = dt_minus_dxx - eval_reaction(eval_r(p, traj, t, x), v);
      } else {
        // patch-frame piece Q via the eigen identity
        x = X + (b4 - X) * ((frac - 0.70) / 0.30);
        if (x <= X || x >= b4) continue;
        const double v = spec.iota * spec.Q(t, x);
        const double r = eval_r(p, traj, t, x);
        N = coefR * v + r * v * v;
      }
      acc.add(N, t, x, -1);
    }
  }
  acc.finish();
  return acc.rep;
}

InterfaceTrace solve_interface(const SubSolutionSpec& spec,
                               const std::vector<double>& t_grid) {
  spec.validate();
  InterfaceTrace tr;
  const double RL = spec.phiR.R * spec.params.L;
  const double lnS_over_eta = std::log(spec.S) / spec.eta;
  bool ok = true;
  double min_gap = std::numeric_limits<double>::infinity();
  double max_gap = -min_gap;
  double min_d = std::numeric_limits<double>::infinity();

  for (double t : t_grid) {
    const double X = spec.interface(t);
    tr.times.push_back(t);
    tr.X.push_back(X);
    const double sl = spec.iota * spec.dx_P(t, X);
    const double sr = spec.iota * spec.dx_Q(t, X);
    tr.slope_left.push_back(sl);
    tr.slope_right.push_back(sr);
    if (!(sl < 0.0)) {
      ok = false;
      tr.notes.push_back("dx P not negative at t = " + fmt(t));
    }
    if (!(sr > 0.0)) {
      ok = false;
      tr.notes.push_back("dx Q not positive at t = " + fmt(t));
    }
    const double gap = spec.cA * t - X;
    if (!(gap > 0.0 && gap < RL)) {
      ok = false;
      tr.notes.push_back("X(t) outside (cA t - R L, cA t) at t = " + fmt(t));
    }
    min_gap = std::min(min_gap, gap);
    max_gap = std::max(max_gap, gap);
    min_d = std::min(min_d, X - spec.c * t - spec.x0);
  }
  if (!(lnS_over_eta < min_d)) {
    ok = false;
    tr.notes.push_back("ln S / eta >= inf (X(t) - c t - x0)");
  }
  // C^1 proxy: the patch-frame offset cA t - X(t) must vary smoothly
  for (std::size_t i = 2; i < tr.X.size(); ++i) {
    const double d1 = (spec.cA * tr.times[i - 1] - tr.X[i - 1]) -
                      (spec.cA * tr.times[i - 2] - tr.X[i - 2]);
    const double d2 = (spec.cA * tr.times[i] - tr.X[i]) -
                      (spec.cA * tr.times[i - 1] - tr.X[i - 1]);
    if (std::abs(d2 - d1) > 0.2 * RL) {
      ok = false;
      tr.notes.push_back("interface offset jumps near t = " +
                         fmt(tr.times[i]));
    }
  }
  tr.min_gap_to_patch = min_gap;
  tr.max_gap_to_patch = max_gap;
  tr.properties_ok = ok;
  return tr;
}

}  // namespace kpp
