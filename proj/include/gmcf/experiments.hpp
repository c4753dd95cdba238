#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gmcf/diagnostics.hpp"
#include "gmcf/manufactured.hpp"
#include "gmcf/solver.hpp"

namespace gmcf {

// Manufactured convergence -----------------------------------------------------

struct ConvergenceSetup {
  std::function<Domain(int nodes)> domain;
  /// Spatial ladder. Each level runs at dt and dt/2 and compares the
  /// extrapolation 2 u(dt/2) - u(dt) with the exact solution, which removes
  /// the first-order time error from the measured spatial error.
  std::vector<int> space_nodes;
  double space_dt = 0.0;
  double space_final_time = 0.0;
  /// Temporal ladder on one fixed grid.
  int time_nodes = 0;
  std::vector<double> time_steps;
  double time_final_time = 0.0;
  /// C in the comparison tolerance 1e-8 + C h checked on every run.
  double comparison_constant = 10.0;
};

struct ConvergenceLevel {
  double size = 0.0;  // h for the spatial ladder, dt for the temporal one
  double error = 0.0; // max over active nodes at the final time
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> space;
  std::vector<ConvergenceLevel> time;
  double spatial_order = 0.0;
  double temporal_order = 0.0;
  bool comparison_holds = true;
};

/// Least-squares slope of log(error) against log(size).
double fitted_order(const std::vector<ConvergenceLevel>& levels);

/// Semi-implicit scheme against the exact self-similar solution.
ConvergenceReport convergence_study(const SelfSimilarSolution& sol, const ConvergenceSetup& setup);

// Self-similar blow-up ------------------------------------------------------------

struct BlowupSetup {
  NormExponents exps;          // supercritical: gap() < 0
  double amplitude = 1.0;      // bump height A
  double profile_radius = 0.5; // bump radius r in the self-similar variable
  double domain_radius = 1.0;
  std::vector<int> ladder{64, 128, 256};
  double step_fraction = 0.02; // dt = step_fraction * (1 - t)
  double solver_gap = 0.05;    // the solver stops at t = 1 - solver_gap
  double ceiling = 1e3;        // sup |du| that counts as blow-up
  std::vector<double> deltas{1e-1, 1e-2, 1e-3};
  std::vector<double> norm_gaps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  int per_decade = 40;
  int cells = 400;
  double comparison_constant = 10.0;
};

struct BlowupReport {
  Rational eps0;
  Rational alpha0;
  double expected_gradient_exponent = 0.0;  // alpha0 - 1/2
  std::vector<double> fitted_gradient_exponent;  // one per ladder level
  double final_gradient_error = 0.0;        // finest level, relative, at the last solver time
  std::vector<double> partial_norms;        // transport norm over [0, 1 - delta]
  bool cauchy = false;
  double inner_slope = 0.0;                 // fitted d log ||f||_{L^p(Gamma_t)} / d log(1 - t)
  double inner_slope_closed_form = 0.0;     // scaling_exponent(exps, alpha0)
  bool blowup_detected = false;
  double blowup_gap = 0.0;                  // 1 - t when sup |du| first exceeds the ceiling
  std::string blowup_source;                // "solver" or "exact continuation"
  bool companion_bound_holds = false;       // subcritical companion run keeps the gradient bound
  double companion_final_time = 0.0;
  bool comparison_holds = true;
};

/// Runs the solver with the exact transport at alpha0 on a disk ladder,
/// fits the gradient growth law, checks the transport norm partial sums and
/// continues the exact solution in 1 - t past the solver's last time until
/// sup |du| exceeds the ceiling. The companion run uses the same transport
/// truncated to [0, 1/2], where it is bounded and any (p, q) is subcritical.
BlowupReport blowup_experiment(const BlowupSetup& setup);

}  // namespace gmcf
