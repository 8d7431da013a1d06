#include "kpp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kpp {

void Grid::validate(double sup_r) const {
  if (!(x_min < x_max)) throw ValidationError("grid requires x_min < x_max");
  if (!(dx > 0.0 && dt > 0.0)) throw ValidationError("grid requires dx, dt > 0");
  if (!(T > 0.0)) throw ValidationError("grid requires T > 0");
  if (node_count() < 5) throw ValidationError("grid too small");
  // the explicit logistic update stays monotone and bounded iff dt sup r <= 1
  if (dt * sup_r > 1.0)
    throw ValidationError("grid requires dt <= 1 / sup r for the reaction step");
}

int Grid::node_count() const {
  return int(std::llround((x_max - x_min) / dx)) + 1;
}

State init(const Grid& grid, const BumpInit& u0) {
  if (!(u0.b > u0.a)) throw ValidationError("initial bump must be nonempty");
  if (!(u0.a - grid.dx > grid.x_min && u0.b + grid.dx < grid.x_max))
    throw ValidationError("initial bump support must lie inside the domain");
  const int n = grid.node_count();
  State s;
  s.t = 0.0;
  s.u = Eigen::ArrayXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.node(i);
    double v = 0.0;
    if (x >= u0.a && x <= u0.b) {
      v = 1.0;
    } else if (x > u0.a - grid.dx && x < u0.a) {
      v = 1.0 - (u0.a - x) / grid.dx;
    } else if (x > u0.b && x < u0.b + grid.dx) {
      v = 1.0 - (x - u0.b) / grid.dx;
    }
    s.u[i] = v;
  }
  return s;
}

Simulator::Simulator(const Grid& grid, const GrowthParams& params,
                     TrajectoryFn A, State state, bool bulk_left_boundary)
    : grid_(grid),
      params_(params),
      A_(std::move(A)),
      state_(std::move(state)),
      bulk_left_(bulk_left_boundary) {
  params_.validate();
  grid_.validate(params_.max_rate());
  const int n = grid_.node_count();
  if (state_.u.size() != n)
    throw ValidationError("state inconsistent with grid");
  mu_ = grid_.dt / (grid_.dx * grid_.dx);
  // forward-elimination coefficients of the constant tridiagonal
  // (1 + 2 mu, -mu); reused every step
  const int m = n - 2;
  cprime_.resize(m);
  dsol_.resize(m);
  ustar_.resize(n);
  const double b = 1.0 + 2.0 * mu_;
  double beta = b;
  cprime_[0] = -mu_ / beta;
  for (int i = 1; i < m; ++i) {
    beta = b + mu_ * cprime_[i - 1];
    cprime_[i] = -mu_ / beta;
  }
}

void Simulator::step() {
  const int n = grid_.node_count();
  const int m = n - 2;
  const double dt = grid_.dt;
  const double t_half = state_.t + 0.5 * dt;
  const double a = A_(t_half);

  // explicit logistic reaction, r frozen at the half-step time
  auto seg_update = [&](int lo, int hi, double r) {
    if (hi <= lo) return;
    auto u = state_.u.segment(lo, hi - lo);
    ustar_.segment(lo, hi - lo) = u + dt * r * u * (1.0 - u);
  };
  auto index_above = [&](double x) {
    const double q = (x - grid_.x_min) / grid_.dx;
    return std::clamp(int(std::ceil(q - 1e-12)), 0, n);
  };
  const int i1 = index_above(a);
  const int i2 = index_above(a + params_.L);
  seg_update(0, i1, params_.r1);
  seg_update(i1, i2, params_.r2);
  seg_update(i2, n, params_.r3);

  // implicit diffusion on interior nodes, Dirichlet values at the ends
  const double left_bc = bulk_left_ ? 1.0 : 0.0;
  ustar_[0] = left_bc;
  ustar_[n - 1] = 0.0;
  const double b = 1.0 + 2.0 * mu_;
  double beta = b;
  dsol_[0] = (ustar_[1] + mu_ * left_bc) / beta;
  for (int i = 1; i < m; ++i) {
    beta = b + mu_ * cprime_[i - 1];
    dsol_[i] = (ustar_[i + 1] + mu_ * dsol_[i - 1]) / beta;
  }
  for (int i = m - 2; i >= 0; --i) dsol_[i] -= cprime_[i] * dsol_[i + 1];
  state_.u.segment(1, m) = dsol_;
  state_.u[0] = left_bc;
  state_.u[n - 1] = 0.0;
  state_.t += dt;
}

double Simulator::front_position(double theta) const {
  const int n = grid_.node_count();
  for (int i = n - 1; i >= 0; --i) {
    if (state_.u[i] >= theta) {
      if (i == n - 1) return grid_.node(i);
      const double ui = state_.u[i];
      const double uj = state_.u[i + 1];
      return grid_.node(i) + grid_.dx * (ui - theta) / (ui - uj);
    }
  }
  return grid_.x_min;
}

void Simulator::shift_window(int k) {
  if (k <= 0) return;
  const int n = grid_.node_count();
  k = std::min(k, n - 1);
  Eigen::ArrayXd shifted = Eigen::ArrayXd::Zero(n);
  shifted.head(n - k) = state_.u.tail(n - k);
  state_.u = shifted;
  state_.u[0] = 1.0;
  grid_.x_min += k * grid_.dx;
  grid_.x_max += k * grid_.dx;
}

LineFit FrontTrace::fit_window(double t0, double t1) const {
  std::vector<double> ts, xs;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= t0 - 1e-12 && times[i] <= t1 + 1e-12) {
      ts.push_back(times[i]);
      xs.push_back(front_x[i]);
    }
  }
  VectorX<double> tv = Eigen::Map<VectorX<double>>(ts.data(), ts.size());
  VectorX<double> xv = Eigen::Map<VectorX<double>>(xs.data(), xs.size());
  return fit_line(tv, xv);
}

FrontTrace run(const Grid& grid, const GrowthParams& params,
               const TrajectoryFn& A, const RunOptions& opt,
               const BumpInit& u0) {
  Simulator sim(grid, params, A, init(grid, u0), opt.moving_frame);

  FrontTrace trace;
  trace.theta = opt.theta;
  trace.T = grid.T;

  const long n_steps = std::llround(grid.T / grid.dt);
  const long sample_stride =
      std::max<long>(1, std::llround(opt.sample_dt / grid.dt));
  const long floor_stride =
      opt.floor_samples > 0
          ? std::max<long>(sample_stride,
                           std::llround(grid.T / (opt.floor_samples * grid.dt)))
          : 0;

  const int n = grid.node_count();
  const int i_zero = std::clamp(
      int(std::ceil((0.0 - grid.x_min) / grid.dx - 1e-12)), 0, n - 1);
  const int nodes_right = n - i_zero;
  const int blocks = std::min(opt.floor_blocks, nodes_right);
  const int block_nodes = (nodes_right + blocks - 1) / blocks;
  trace.floor_block_width = block_nodes * grid.dx;

  auto record = [&](const Simulator& s, bool with_floor) {
    trace.times.push_back(s.state().t);
    trace.front_x.push_back(s.front_position(opt.theta));
    if (with_floor && !opt.moving_frame) {
      Eigen::ArrayXd mins(blocks);
      for (int bidx = 0; bidx < blocks; ++bidx) {
        const int lo = i_zero + bidx * block_nodes;
        const int len = std::min(block_nodes, n - lo);
        mins[bidx] = len > 0
                         ? s.state().u.segment(lo, len).minCoeff()
                         : 0.0;
      }
      trace.floor_times.push_back(s.state().t);
      trace.floor_blocks.push_back(std::move(mins));
    }
  };

  record(sim, floor_stride > 0);
  for (long k = 1; k <= n_steps; ++k) {
    sim.step();
    if (opt.observer && opt.observer_stride > 0 &&
        k % opt.observer_stride == 0)
      opt.observer(sim.state());
    if (k % sample_stride == 0 || k == n_steps) {
      const bool with_floor =
          floor_stride > 0 && (k % floor_stride == 0 || k == n_steps);
      // boundary contamination guard
      const int nn = sim.grid().node_count();
      if (sim.state().u[nn - 2] > opt.boundary_guard) {
        std::ostringstream msg;
        msg << "domain too small: u(x_max) = " << sim.state().u[nn - 2]
            << " exceeds the guard " << opt.boundary_guard << " at t = "
            << sim.state().t;
        throw RuntimeFailure(msg.str());
      }
      if (opt.moving_frame) {
        const double front = sim.front_position(opt.theta);
        const double ahead = sim.grid().x_max - front;
        const double margin = 0.25 * (sim.grid().x_max - sim.grid().x_min);
        if (ahead < margin) {
          const int shift = int(std::ceil((margin - ahead) / grid.dx));
          sim.shift_window(shift);
        }
      }
      record(sim, with_floor);
    }
  }

  const LineFit fit =
      trace.fit_window(opt.fit_start_frac * grid.T, grid.T + 1.0);
  trace.fitted_speed = fit.slope;
  trace.fit_rms = fit.rms_residual;
  return trace;
}

FrontTrace run(const Grid& grid, const GrowthParams& params,
               const Trajectory& traj, const RunOptions& opt,
               const BumpInit& u0) {
  return run(grid, params, as_fn(traj), opt, u0);
}

double persistence_floor(const FrontTrace& trace, double c_probe) {
  if (!(c_probe > 0.0))
    throw ValidationError("persistence_floor requires c_probe > 0");
  if (trace.floor_times.empty())
    throw ValidationError("trace carries no persistence data");
  double floor = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trace.floor_times.size(); ++k) {
    const double t = trace.floor_times[k];
    if (t < 0.5 * trace.T) continue;
    const double x_hi = c_probe * t;
    const auto& mins = trace.floor_blocks[k];
    const int last_block = std::min<int>(
        int(mins.size()) - 1, int(std::floor(x_hi / trace.floor_block_width)));
    for (int b = 0; b <= last_block; ++b) floor = std::min(floor, mins[b]);
  }
  return floor;
}

}  // namespace kpp
