#include "kpp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace kpp {

void Budget::validate() const {
  if (!(r1 > 0.0)) throw ValidationError("budget requires r1 > 0");
  if (!(h > 0.0 && A > 0.0)) throw ValidationError("budget requires h, A > 0");
  if (!(W > 0.0 && n >= 1)) throw ValidationError("budget requires W > 0, n >= 1");
  if (A > h * W + 1e-12)
    throw ValidationError("budget requires A <= h W");
}

bool ProfileCandidate::is_bang_bang(double h, double tol) const {
  for (double a : increments)
    if (std::min(a, std::abs(a - h)) > tol) return false;
  return true;
}

bool ProfileCandidate::is_contiguous(double h, double tol) const {
  int first = -1, last = -1;
  for (int i = 0; i < int(increments.size()); ++i) {
    if (increments[i] > h * 0.5) {
      if (first < 0) first = i;
      last = i;
    } else if (increments[i] > tol) {
      return false;  // fractional cell breaks the bang-bang pattern
    }
  }
  if (first < 0) return true;  // empty profile
  for (int i = first; i <= last; ++i)
    if (!(increments[i] > h * 0.5)) return false;
  return true;
}

StepProfile profile_of(const Budget& budget,
                       const std::vector<double>& increments) {
  const double w = budget.cell_width();
  StepProfile m;
  m.breakpoints.reserve(budget.n + 1);
  m.values.reserve(budget.n + 2);
  m.values.push_back(budget.r1);
  for (int i = 0; i < budget.n; ++i) {
    m.breakpoints.push_back(i * w);
    m.values.push_back(budget.r1 + increments[i]);
  }
  m.breakpoints.push_back(budget.W);
  m.values.push_back(budget.r1);
  return m;
}

double evaluate_candidate(const Budget& budget,
                          const std::vector<double>& increments,
                          const EvalSchedule& sched) {
  return lambda1_truncated(profile_of(budget, increments), 1.0, sched.R,
                           sched.n_grid());
}

BruteForceResult brute_force_optimum(const Budget& budget,
                                     const EvalSchedule& sched) {
  budget.validate();
  if (budget.n > 16)
    throw ValidationError("brute force limited to n <= 16 cells");
  const int n = budget.n;
  const int k = budget.k();

  BruteForceResult res;
  res.best.lambda1 = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, std::vector<double>>> all;

  // enumerate all k-subsets as bitmasks, in canonical (increasing) order
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (int(std::popcount(mask)) != k) continue;
    std::vector<double> inc(n, 0.0);
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) inc[i] = budget.h;
    const double lam = evaluate_candidate(budget, inc, sched);
    ++res.candidates;
    all.emplace_back(lam, std::move(inc));
    if (lam < res.best.lambda1) {
      res.best.lambda1 = lam;
      res.best.increments = all.back().second;
    }
  }
  for (auto& [lam, inc] : all) {
    if (lam <= res.best.lambda1 + res.tie_tol)
      res.tied.push_back(ProfileCandidate{std::move(inc), lam});
  }
  return res;
}

LocalSearchResult local_search(const Budget& budget, bool relaxed,
                               std::uint64_t seed, const EvalSchedule& sched) {
  budget.validate();
  const int n = budget.n;
  const double w = budget.cell_width();
  std::mt19937_64 rng(seed);

  std::vector<double> inc(n, 0.0);
  if (relaxed) {
    // feasible interior start: uniform mass A spread over all cells
    const double level = std::min(budget.h, budget.A / (n * w));
    std::fill(inc.begin(), inc.end(), level);
  } else {
    std::vector<int> cells(n);
    std::iota(cells.begin(), cells.end(), 0);
    std::shuffle(cells.begin(), cells.end(), rng);
    for (int j = 0; j < budget.k(); ++j) inc[cells[j]] = budget.h;
  }

  LocalSearchResult res;
  res.best.increments = inc;
  res.best.lambda1 = evaluate_candidate(budget, inc, sched);

  bool improved = true;
  while (improved) {
    improved = false;
    ++res.iterations;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        // move mass from cell i to cell j
        const double room = budget.h - res.best.increments[j];
        const double avail = res.best.increments[i];
        if (room <= 1e-12 || avail <= 1e-12) continue;
        for (double frac : {1.0, 0.5}) {
          const double d = frac * std::min(avail, room);
          if (d <= 1e-12) continue;
          std::vector<double> trial = res.best.increments;
          trial[i] -= d;
          trial[j] += d;
          const double lam = evaluate_candidate(budget, trial, sched);
          if (lam < res.best.lambda1 - 1e-12) {
            res.best.increments = std::move(trial);
            res.best.lambda1 = lam;
            ++res.accepted_moves;
            improved = true;
            break;
          }
          if (!relaxed) break;  // bang-bang space: whole-cell exchange only
        }
      }
    }
    if (res.iterations > 200) break;
  }
  return res;
}

}  // namespace kpp
