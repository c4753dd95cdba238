#include "gmcf/solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "gmcf/graph.hpp"

namespace gmcf {

double default_time_step(Scheme scheme, double h) {
  return scheme == Scheme::Explicit ? 0.25 * h * h : h;
}

Matd coefficients(const Vecd& du) {
  if (!du.allFinite()) fail(ErrorCode::NonFiniteInput, "non-finite gradient");
  const Index n = du.size();
  return Matd::Identity(n, n) - du * du.transpose() / (1.0 + du.squaredNorm());
}

double sup_gradient(const GridFunction& u) {
  double m = 0.0;
  for (const Index k : u.grid().active) m = std::max(m, grid_gradient(u, k).norm());
  return m;
}

namespace {

// Stencil of sum a_ij d_ij at node k as (storage index, weight) pairs.
void operator_stencil(const GridLayout& g, Index k, const Matd& a,
                      std::vector<std::pair<Index, double>>& out) {
  const double ih2 = 1.0 / (g.spacing * g.spacing);
  out.clear();
  out.emplace_back(k - 1, a(0, 0) * ih2);
  out.emplace_back(k + 1, a(0, 0) * ih2);
  double centre = -2.0 * a(0, 0) * ih2;
  if (g.dim == 2) {
    const Index s = g.nx;
    out.emplace_back(k - s, a(1, 1) * ih2);
    out.emplace_back(k + s, a(1, 1) * ih2);
    centre -= 2.0 * a(1, 1) * ih2;
    const double m = 2.0 * a(0, 1) * 0.25 * ih2;
    out.emplace_back(k + s + 1, m);
    out.emplace_back(k + s - 1, -m);
    out.emplace_back(k - s + 1, -m);
    out.emplace_back(k - s - 1, m);
  }
  out.emplace_back(k, centre);
}

// Ghost value as a combination of active unknowns (by active number).
std::vector<std::vector<std::pair<Index, double>>> ghost_expansion(const GridLayout& g) {
  std::vector<std::vector<std::pair<Index, double>>> out(static_cast<std::size_t>(g.size()));
  for (const GhostRule& r : g.ghosts) {
    auto& e = out[static_cast<std::size_t>(r.node)];
    double anchor_w = 1.0;
    for (const auto& [node, w] : r.terms) {
      e.emplace_back(g.active_number[static_cast<std::size_t>(node)], w);
      anchor_w -= w;
    }
    e.emplace_back(g.active_number[static_cast<std::size_t>(r.anchor)], anchor_w);
  }
  return out;
}

struct Linearization {
  Eigen::VectorXd apply;   // A(dw) u at active nodes
  Eigen::VectorXd forcing; // f(x, w, t) . (-dw, 1) at active nodes
  std::vector<Eigen::Triplet<double>> triplets;  // entries of A(dw) over active unknowns
};

// Frozen-coefficient operator A(dw) acting on u, plus the transport forcing
// evaluated on w.
Linearization linearize(const GridFunction& w, const GridFunction& u, const TransportField& f, double t,
                        bool with_matrix) {
  const Domain& dom = w.domain();
  const GridLayout& g = w.grid();
  const auto n_act = static_cast<Index>(g.active.size());
  Linearization lin;
  lin.apply.resize(n_act);
  lin.forcing.resize(n_act);
  std::vector<std::vector<std::pair<Index, double>>> expansion;
  if (with_matrix) expansion = ghost_expansion(g);
  std::vector<std::pair<Index, double>> st;
  for (Index a = 0; a < n_act; ++a) {
    const Index k = g.active[static_cast<std::size_t>(a)];
    const Vecd dw = grid_gradient(w, k);
    const Matd coef = coefficients(dw);
    operator_stencil(g, k, coef, st);
    double acc = 0.0;
    for (const auto& [node, c] : st) {
      acc += c * u[node];
      if (!with_matrix) continue;
      const Index col = g.active_number[static_cast<std::size_t>(node)];
      if (col >= 0) {
        lin.triplets.emplace_back(a, col, c);
      } else {
        for (const auto& [acol, gw] : expansion[static_cast<std::size_t>(node)]) {
          lin.triplets.emplace_back(a, acol, c * gw);
        }
      }
    }
    lin.apply[a] = acc;
    Vecd normal_dir(g.dim + 1);
    normal_dir.head(g.dim) = -dw;
    normal_dir(g.dim) = 1.0;
    const Vecd fv = f(dom.node_position(k), w[k], t);
    lin.forcing[a] = fv.dot(normal_dir);
  }
  return lin;
}

// Solves (I - dt A) x = b.
Eigen::VectorXd solve_shifted(const GridLayout& g, const std::vector<Eigen::Triplet<double>>& a_entries,
                              double dt, const Eigen::VectorXd& b, double tol) {
  const auto n = static_cast<Index>(g.active.size());
  if (g.dim == 1) {
    // Tridiagonal after the mirror ghosts fold onto their neighbours.
    Eigen::VectorXd lower = Eigen::VectorXd::Zero(n), diag = Eigen::VectorXd::Ones(n),
                    upper = Eigen::VectorXd::Zero(n);
    for (const auto& e : a_entries) {
      const Index r = e.row(), c = e.col();
      if (c == r) diag[r] -= dt * e.value();
      else if (c == r - 1) lower[r] -= dt * e.value();
      else if (c == r + 1) upper[r] -= dt * e.value();
      else fail(ErrorCode::LinearSolveFailure, "1-D operator is not tridiagonal");
    }
    Eigen::VectorXd cp(n), dp(n), x(n);
    cp[0] = upper[0] / diag[0];
    dp[0] = b[0] / diag[0];
    for (Index i = 1; i < n; ++i) {
      const double m = diag[i] - lower[i] * cp[i - 1];
      if (m == 0.0 || !std::isfinite(m)) fail(ErrorCode::LinearSolveFailure, "zero pivot in tridiagonal solve");
      cp[i] = upper[i] / m;
      dp[i] = (b[i] - lower[i] * dp[i - 1]) / m;
    }
    x[n - 1] = dp[n - 1];
    for (Index i = n - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
  }
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(a_entries.size() + static_cast<std::size_t>(n));
  for (const auto& e : a_entries) entries.emplace_back(e.row(), e.col(), -dt * e.value());
  for (Index i = 0; i < n; ++i) entries.emplace_back(i, i, 1.0);
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::DiagonalPreconditioner<double>> solver;
  solver.setTolerance(tol);
  solver.setMaxIterations(1000);
  solver.compute(m);
  const Eigen::VectorXd x = solver.solveWithGuess(b, b);
  if (solver.info() != Eigen::Success || !x.allFinite()) {
    fail(ErrorCode::LinearSolveFailure, "iterative solve did not reach the residual tolerance");
  }
  return x;
}

GridFunction advance(const GridFunction& u, const Eigen::VectorXd& delta, double t_new) {
  GridFunction out(u.domain(), t_new);
  out.set_active_values(u.active_values() + delta);
  return out;
}

}  // namespace

Eigen::VectorXd discrete_operator(const GridFunction& u, const TransportField& f, double t) {
  const Linearization lin = linearize(u, u, f, t, false);
  return lin.apply + lin.forcing;
}

GridFunction step(const GridFunction& u, const TransportField& f, const SolverConfig& cfg, double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::ConfigInvalid, "time step must be positive");
  const GridLayout& g = u.grid();
  const double t0 = u.time();
  const double t1 = t0 + dt;
  switch (cfg.scheme) {
    case Scheme::Explicit: {
      double max_aii = 0.0;
      for (const Index k : g.active) {
        const Matd a = coefficients(grid_gradient(u, k));
        max_aii = std::max(max_aii, a.diagonal().maxCoeff());
      }
      const double h = g.spacing;
      if (dt > cfg.cfl_safety * h * h / (2.0 * g.dim * max_aii) * (1.0 + 1e-12)) {
        fail(ErrorCode::CflViolation, "explicit step exceeds the parabolic stability limit");
      }
      const Linearization lin = linearize(u, u, f, t0, false);
      GridFunction out = advance(u, dt * (lin.apply + lin.forcing), t1);
      out.check_finite();
      return out;
    }
    case Scheme::SemiImplicit: {
      // Increment form: (I - dt A) delta = dt (A u + F), exact for constants.
      const Linearization lin = linearize(u, u, f, t0, true);
      const Eigen::VectorXd delta =
          solve_shifted(g, lin.triplets, dt, dt * (lin.apply + lin.forcing), cfg.linear_tolerance);
      GridFunction out = advance(u, delta, t1);
      out.check_finite();
      return out;
    }
    case Scheme::Picard: {
      GridFunction w = u;
      for (int it = 0; it < cfg.picard_max_iterations; ++it) {
        const Linearization lin = linearize(w, u, f, t1, true);
        const Eigen::VectorXd delta =
            solve_shifted(g, lin.triplets, dt, dt * (lin.apply + lin.forcing), cfg.linear_tolerance);
        GridFunction next = advance(u, delta, t1);
        next.check_finite();
        const double change = (next.active_values() - w.active_values()).lpNorm<Eigen::Infinity>();
        w = std::move(next);
        if (change < cfg.picard_tolerance) return w;
      }
      fail(ErrorCode::PicardDivergence, "Picard iteration did not contract within the iteration limit");
    }
  }
  fail(ErrorCode::ConfigInvalid, "unknown scheme");
}

SolutionTrajectory run(const GridFunction& u0, const TransportField& f, const SolverConfig& cfg,
                       const std::vector<SnapshotHook>& hooks) {
  u0.check_finite();
  if (cfg.final_time < 0.0) fail(ErrorCode::ConfigInvalid, "final time must be nonnegative");
  SolutionTrajectory traj;
  GridFunction u = u0;
  u.close();
  const double t_start = u.time();
  auto emit = [&](const GridFunction& s) {
    traj.snapshots.push_back(s);
    for (const auto& hook : hooks) hook(s);
  };
  emit(u);
  traj.gradient_history.emplace_back(t_start, sup_gradient(u));
  if (cfg.final_time == 0.0) return traj;

  const int every = std::max(cfg.output_every, 1);
  // Returns false when the run must stop.
  auto after_step = [&](int k, bool last) {
    traj.steps = k;
    const double grad = sup_gradient(u);
    traj.gradient_history.emplace_back(u.time(), grad);
    if (grad > cfg.blowup_ceiling) {
      traj.status = RunStatus::BlowupDetected;
      emit(u);
      return false;
    }
    if (k % every == 0 || last) emit(u);
    return true;
  };
  const double t_end = t_start + cfg.final_time;

  if (cfg.step_schedule) {
    for (int k = 1;; ++k) {
      const double t = u.time();
      const double want = cfg.step_schedule(t);
      if (!(want > 0.0)) fail(ErrorCode::ConfigInvalid, "step schedule returned a non-positive step");
      // Absorb a final sliver into this step rather than taking a tiny one.
      const bool last = t + want * (1.0 + 1e-9) >= t_end;
      const double dt = last ? t_end - t : want;
      u = step(u, f, cfg, dt);
      if (last) u.set_time(t_end);
      traj.dt = dt;
      if (!after_step(k, last) || last) return traj;
    }
  }

  const double nominal = cfg.dt > 0.0 ? cfg.dt : default_time_step(cfg.scheme, u.grid().spacing);
  const auto steps = static_cast<int>(std::ceil(cfg.final_time / nominal - 1e-9));
  const double dt = cfg.final_time / std::max(steps, 1);
  traj.dt = dt;
  for (int k = 1; k <= steps; ++k) {
    u = step(u, f, cfg, dt);
    u.set_time(t_start + k * dt);
    if (!after_step(k, k == steps)) return traj;
  }
  return traj;
}

ComparisonReport comparison_bound_check(const SolutionTrajectory& traj, const TransportField& f,
                                        const GridFunction& u0, double tol) {
  ComparisonReport rep;
  if (f.sup_bound()) {
    rep.sup_f = *f.sup_bound();
  } else {
    for (const GridFunction& s : traj.snapshots) {
      for (const Index k : s.grid().active) {
        rep.sup_f = std::max(rep.sup_f, f(s.domain().node_position(k), s[k], s.time()).norm());
      }
    }
  }
  const double u0_sup = u0.sup_abs();
  const double t0 = u0.time();
  rep.min_slack = INFINITY;
  for (const GridFunction& s : traj.snapshots) {
    const double slack = rep.sup_f * (s.time() - t0) + u0_sup - s.sup_abs();
    rep.min_slack = std::min(rep.min_slack, slack);
    if (slack < -tol) rep.holds = false;
  }
  return rep;
}

}  // namespace gmcf
