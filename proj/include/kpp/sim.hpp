#ifndef KPP_SIM_HPP
#define KPP_SIM_HPP

#include "kpp/model.hpp"
#include "kpp/numeric.hpp"

#include <functional>
#include <vector>

namespace kpp {

/// Runtime failures of a well-posed computation (domain contamination and
/// the like); the CLI maps these to exit code 2.
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Grid {
  double x_min = -50.0;
  double x_max = 50.0;
  double dx = 0.05;
  double dt = 0.01;
  double T = 100.0;

  void validate(double sup_r) const;
  int node_count() const;
  double node(int i) const { return x_min + i * dx; }
};

struct State {
  double t = 0.0;
  Eigen::ArrayXd u;
};

/// Compactly supported initial bump: 1 on [a, b], linear ramp to 0 over one
/// cell on each side.
struct BumpInit {
  double a = -1.0;
  double b = 1.0;
};

State init(const Grid& grid, const BumpInit& u0);

struct RunOptions {
  double theta = 0.01;        // front tracking level
  double sample_dt = 0.5;     // front sampling interval
  double fit_start_frac = 0.5;  // least-squares window [frac*T, T]
  double boundary_guard = 1e-8;
  bool moving_frame = false;  // shift the window with the front; left edge
                              // pinned to the saturated bulk (u = 1)
  int floor_blocks = 1024;    // spatial resolution of persistence data
  int floor_samples = 160;    // time resolution of persistence data
  std::function<void(const State&)> observer;
  int observer_stride = 0;  // steps between observer calls, 0 = off
};

struct FrontTrace {
  std::vector<double> times;
  std::vector<double> front_x;
  double theta = 0.0;
  double T = 0.0;
  double fitted_speed = 0.0;
  double fit_rms = 0.0;
  // persistence data: block minima of u over x >= 0 at coarse sample times
  std::vector<double> floor_times;
  std::vector<Eigen::ArrayXd> floor_blocks;
  double floor_block_width = 0.0;

  /// Fit the front speed over [t0, t1] (least squares slope).
  LineFit fit_window(double t0, double t1) const;
};

/// One IMEX step: logistic reaction explicit with r at the half-step time,
/// diffusion implicit (backward Euler, tridiagonal solve), Dirichlet ends.
class Simulator {
 public:
  Simulator(const Grid& grid, const GrowthParams& params, TrajectoryFn A,
            State state, bool bulk_left_boundary = false);

  void step();
  const State& state() const { return state_; }
  const Grid& grid() const { return grid_; }
  /// Rightmost level crossing of u at level theta, linearly interpolated.
  double front_position(double theta) const;
  /// Shift the window right by k cells (moving-frame mode).
  void shift_window(int k);

 private:
  Grid grid_;
  GrowthParams params_;
  TrajectoryFn A_;
  State state_;
  bool bulk_left_;
  Eigen::ArrayXd ustar_, cprime_, dsol_;
  double mu_ = 0.0;
};

/// Integrate to the horizon with front tracking and speed fitting. The
/// domain must stay uncontaminated: u at the right edge below the guard.
FrontTrace run(const Grid& grid, const GrowthParams& params,
               const TrajectoryFn& A, const RunOptions& opt = {},
               const BumpInit& u0 = {});

FrontTrace run(const Grid& grid, const GrowthParams& params,
               const Trajectory& traj, const RunOptions& opt = {},
               const BumpInit& u0 = {});

/// Finite-time proxy for the liminf-inf persistence criterion:
/// min over sampled t in [T/2, T] of min over x in [0, c_probe t] of u.
double persistence_floor(const FrontTrace& trace, double c_probe);

}  // namespace kpp

#endif  // KPP_SIM_HPP
