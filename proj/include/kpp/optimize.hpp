#ifndef KPP_OPTIMIZE_HPP
#define KPP_OPTIMIZE_HPP

#include "kpp/eigenvalue.hpp"
#include "kpp/model.hpp"

#include <cstdint>
#include <vector>

namespace kpp {

/// Height/mass budget for perturbations m - r1 >= 0 supported on [0, W],
/// discretized into n equal cells.
struct Budget {
  double r1 = 1.0;
  double h = 1.0;  // L-infinity cap on m - r1
  double A = 1.0;  // L1 cap on m - r1
  double W = 1.0;  // support window [0, W]
  int n = 8;       // cells

  void validate() const;
  double cell_width() const { return W / n; }
  /// Raised cells affordable in the bang-bang space.
  int k() const { return int(A / (h * cell_width()) + 1e-9); }
};

/// Fixed evaluation schedule: all candidates share one (R, grid) so the
/// truncation bias cancels in comparisons.
struct EvalSchedule {
  double R = 24.0;
  double h_grid = 1.0 / 256.0;
  int n_grid() const { return int(2.0 * R / h_grid + 0.5); }
};

struct ProfileCandidate {
  std::vector<double> increments;  // per cell, in [0, h]
  double lambda1 = 0.0;

  bool is_bang_bang(double h, double tol = 1e-9) const;
  /// True when the raised cells form one contiguous run.
  bool is_contiguous(double h, double tol = 1e-9) const;
};

StepProfile profile_of(const Budget& budget,
                       const std::vector<double>& increments);
double evaluate_candidate(const Budget& budget,
                          const std::vector<double>& increments,
                          const EvalSchedule& sched);

struct BruteForceResult {
  ProfileCandidate best;
  std::vector<ProfileCandidate> tied;  // all minimizers within tie_tol
  double tie_tol = 1e-9;
  long candidates = 0;
};

/// Exhaustive scan of all C(n, k) bang-bang profiles. Rejects n > 16.
BruteForceResult brute_force_optimum(const Budget& budget,
                                     const EvalSchedule& sched = {});

struct LocalSearchResult {
  ProfileCandidate best;
  int accepted_moves = 0;
  int iterations = 0;
};

/// Coordinate-exchange descent from a random feasible start (bang-bang
/// space), or projected pairwise mass transfers in [0, h] when relaxed.
LocalSearchResult local_search(const Budget& budget, bool relaxed,
                               std::uint64_t seed,
                               const EvalSchedule& sched = {});

}  // namespace kpp

#endif  // KPP_OPTIMIZE_HPP
