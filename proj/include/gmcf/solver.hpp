#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "gmcf/grid_function.hpp"
#include "gmcf/transport.hpp"

namespace gmcf {

enum class Scheme { Explicit, SemiImplicit, Picard };

struct SolverConfig {
  Scheme scheme = Scheme::SemiImplicit;
  double dt = 0.0;          // time step (time units); <= 0 selects the scheme default
  double final_time = 0.0;  // T (time units)
  double picard_tolerance = 1e-10;
  int picard_max_iterations = 50;
  double cfl_safety = 1.0;
  double blowup_ceiling = 1e3;  // sup |du| that ends a run
  int output_every = 1;         // steps between stored snapshots
  double linear_tolerance = 1e-10;
  /// Optional variable step: the step taken from time t is
  /// min(step_schedule(t), T - t). Overrides dt when set.
  std::function<double(double t)> step_schedule;
};

/// Default step for a grid spacing: 0.25 h^2 explicit, h otherwise.
double default_time_step(Scheme scheme, double h);

/// a_ij(r) = delta_ij - r_i r_j / (1 + |r|^2).
Matd coefficients(const Vecd& du);

/// sum_ij a_ij(du) u_ij + f(x, u, t) . (-du, 1) at every active node, in
/// active order.
Eigen::VectorXd discrete_operator(const GridFunction& u, const TransportField& f, double t);

/// Advances one step of size dt from u.time().
GridFunction step(const GridFunction& u, const TransportField& f, const SolverConfig& cfg, double dt);
inline GridFunction step(const GridFunction& u, const TransportField& f, const SolverConfig& cfg) {
  return step(u, f, cfg, cfg.dt);
}

enum class RunStatus { Completed, BlowupDetected };

struct SolutionTrajectory {
  std::vector<GridFunction> snapshots;
  RunStatus status = RunStatus::Completed;
  double dt = 0.0;  // uniform step, or the last step taken under a schedule
  int steps = 0;
  /// (t, sup |du|) after every step, starting with t = 0.
  std::vector<std::pair<double, double>> gradient_history;

  const GridFunction& front() const { return snapshots.front(); }
  const GridFunction& back() const { return snapshots.back(); }
  std::size_t size() const { return snapshots.size(); }
};

using SnapshotHook = std::function<void(const GridFunction&)>;

SolutionTrajectory run(const GridFunction& u0, const TransportField& f, const SolverConfig& cfg,
                       const std::vector<SnapshotHook>& hooks = {});

/// sup |du| over active nodes.
double sup_gradient(const GridFunction& u);

struct ComparisonReport {
  bool holds = true;
  double sup_f = 0.0;
  double min_slack = 0.0;  // min over snapshots of bound - sup |u|
};

/// Checks sup|u(., t)| <= sup|f| t + sup|u0| + tol at every snapshot. sup|f|
/// comes from the field's bound when it has one, otherwise from sampling f
/// on the trajectory's nodes and heights.
ComparisonReport comparison_bound_check(const SolutionTrajectory& traj, const TransportField& f,
                                        const GridFunction& u0, double tol);

}  // namespace gmcf
