#include "gmcf/experiments.hpp"

#include <cmath>

namespace gmcf {

namespace {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double max_error(const GridFunction& u, const Eigen::VectorXd& approx, const SelfSimilarSolution& sol, double t) {
  const Domain& d = u.domain();
  double err = 0.0;
  const auto& active = d.grid().active;
  for (std::size_t i = 0; i < active.size(); ++i) {
    const double exact = sol.exact_fields(d.node_position(active[i]), t).u;
    err = std::max(err, std::abs(approx[static_cast<Index>(i)] - exact));
  }
  return err;
}

SolutionTrajectory solve(const GridFunction& u0, const TransportField& f, double dt, double T) {
  SolverConfig cfg;
  cfg.scheme = Scheme::SemiImplicit;
  cfg.dt = dt;
  cfg.final_time = T;
  cfg.output_every = 1 << 30;
  return run(u0, f, cfg);
}

bool comparison_holds(const SolutionTrajectory& traj, const TransportField& f, const GridFunction& u0, double c) {
  return comparison_bound_check(traj, f, u0, 1e-8 + c * u0.domain().spacing()).holds;
}

}  // namespace

double fitted_order(const std::vector<ConvergenceLevel>& levels) {
  if (levels.size() < 2) fail(ErrorCode::InsufficientSnapshots, "an order fit needs two levels");
  std::vector<double> x, y;
  for (const auto& l : levels) {
    if (!(l.error > 0.0)) fail(ErrorCode::DegenerateSample, "zero error level in an order fit");
    x.push_back(l.size);
    y.push_back(l.error);
  }
  return loglog_slope(x, y);
}

ConvergenceReport convergence_study(const SelfSimilarSolution& sol, const ConvergenceSetup& setup) {
  if (!setup.domain) fail(ErrorCode::ConfigInvalid, "convergence study without a domain");
  const TransportField f = sol.transport_field();
  ConvergenceReport rep;

  for (int nodes : setup.space_nodes) {
    const Domain d = setup.domain(nodes);
    const GridFunction u0 = sol.sample(d, 0.0);
    const double T = setup.space_final_time;
    const auto coarse_run = solve(u0, f, setup.space_dt, T);
    const auto fine_run = solve(u0, f, 0.5 * setup.space_dt, T);
    rep.comparison_holds = rep.comparison_holds && comparison_holds(coarse_run, f, u0, setup.comparison_constant) &&
                           comparison_holds(fine_run, f, u0, setup.comparison_constant);
    const Eigen::VectorXd coarse = coarse_run.back().active_values();
    const GridFunction& fine = fine_run.back();
    const Eigen::VectorXd extrapolated = 2.0 * fine.active_values() - coarse;
    rep.space.push_back({d.spacing(), max_error(fine, extrapolated, sol, T)});
  }

  if (!setup.time_steps.empty()) {
    const Domain d = setup.domain(setup.time_nodes);
    const GridFunction u0 = sol.sample(d, 0.0);
    for (double dt : setup.time_steps) {
      const auto traj = solve(u0, f, dt, setup.time_final_time);
      rep.comparison_holds = rep.comparison_holds && comparison_holds(traj, f, u0, setup.comparison_constant);
      const GridFunction& u = traj.back();
      rep.time.push_back({dt, max_error(u, u.active_values(), sol, setup.time_final_time)});
    }
  }

  if (rep.space.size() >= 2) rep.spatial_order = fitted_order(rep.space);
  if (rep.time.size() >= 2) rep.temporal_order = fitted_order(rep.time);
  return rep;
}

BlowupReport blowup_experiment(const BlowupSetup& setup) {
  if (setup.exps.subcritical() || setup.exps.gap() == Rational(0)) {
    fail(ErrorCode::ConfigInvalid, "blow-up experiment needs n/p + 2/q > 1");
  }
  if (setup.exps.p.is_infinite() || setup.exps.q.is_infinite()) {
    fail(ErrorCode::ConfigInvalid, "blow-up experiment needs finite p and q");
  }
  const BlowupParameters params{setup.exps};
  BlowupReport rep;
  rep.eps0 = params.eps0();
  rep.alpha0 = params.alpha0();
  const double alpha = to_double(rep.alpha0);
  rep.expected_gradient_exponent = alpha - 0.5;

  const SelfSimilarSolution sol(alpha, BumpProfile{setup.exps.n, setup.amplitude, setup.profile_radius});
  const TransportField f = sol.transport_field();
  auto make_domain = [&](int nodes) {
    return setup.exps.n == 1 ? Domain::interval(-setup.domain_radius, setup.domain_radius, nodes)
                             : Domain::disk(setup.domain_radius, nodes);
  };

  SolverConfig cfg;
  cfg.scheme = Scheme::SemiImplicit;
  cfg.final_time = 1.0 - setup.solver_gap;
  cfg.blowup_ceiling = setup.ceiling;
  cfg.output_every = 1 << 30;
  const double frac = setup.step_fraction;
  cfg.step_schedule = [frac](double t) { return frac * (1.0 - t); };

  double last_sup = 0.0;
  double last_gap = 1.0;
  for (int nodes : setup.ladder) {
    const Domain d = make_domain(nodes);
    const GridFunction u0 = sol.sample(d, 0.0);
    const auto traj = run(u0, f, cfg);
    rep.comparison_holds = rep.comparison_holds && comparison_holds(traj, f, u0, setup.comparison_constant);
    std::vector<double> gaps, sups;
    for (const auto& [t, g] : traj.gradient_history) {
      gaps.push_back(1.0 - t);
      sups.push_back(g);
    }
    rep.fitted_gradient_exponent.push_back(loglog_slope(gaps, sups));
    last_gap = gaps.back();
    last_sup = sups.back();
    if (traj.status == RunStatus::BlowupDetected) {
      rep.blowup_detected = true;
      rep.blowup_gap = last_gap;
      rep.blowup_source = "solver";
    }
  }
  rep.final_gradient_error = std::abs(last_sup - sol.sup_gradient_at_gap(last_gap)) / sol.sup_gradient_at_gap(last_gap);

  for (double delta : setup.deltas) {
    rep.partial_norms.push_back(self_similar_transport_norm(sol, setup.exps, delta, setup.per_decade, setup.cells));
  }
  rep.cauchy = rep.partial_norms.size() >= 3;
  for (std::size_t k = 2; k < rep.partial_norms.size(); ++k) {
    const double prev = rep.partial_norms[k - 1] - rep.partial_norms[k - 2];
    const double next = rep.partial_norms[k] - rep.partial_norms[k - 1];
    if (!(next >= 0.0 && next <= 0.5 * prev)) rep.cauchy = false;
  }

  std::vector<double> norms;
  for (double tau : setup.norm_gaps) norms.push_back(sol.inner_norm_at_gap(setup.exps.p, tau, setup.cells));
  rep.inner_slope = loglog_slope(setup.norm_gaps, norms);
  rep.inner_slope_closed_form = scaling_exponent(setup.exps, alpha);

  // Past the solver's last time the exact solution is the oracle.
  if (!rep.blowup_detected) {
    double tau = last_gap;
    while (tau > 1e-300 && !(sol.sup_gradient_at_gap(tau) > setup.ceiling)) tau *= 0.5;
    if (sol.sup_gradient_at_gap(tau) > setup.ceiling) {
      rep.blowup_detected = true;
      rep.blowup_gap = tau;
      rep.blowup_source = "exact continuation";
    }
  }

  SolverConfig companion = cfg;
  companion.final_time = 0.5;
  const Domain coarse = make_domain(setup.ladder.front());
  const GridFunction u0 = sol.sample(coarse, 0.0);
  const auto traj = run(u0, f, companion);
  const auto bound = gradient_bound_monitor(traj, u0);
  rep.companion_bound_holds = !bound.first_violation;
  rep.comparison_holds = rep.comparison_holds && comparison_holds(traj, f, u0, setup.comparison_constant);
  rep.companion_final_time = traj.back().time();
  return rep;
}

}  // namespace gmcf
