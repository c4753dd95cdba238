#include "gmcf/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "gmcf/diagnostics.hpp"
#include "gmcf/experiments.hpp"
#include "gmcf/graph.hpp"

namespace gmcf {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x) { return format_number(x); }

std::string fixed(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

std::string criterion_name(int id) {
  switch (id) {
    case 5: return "manufactured-convergence";
    case 6: return "maximum-principle";
    case 7: return "gradient-bound";
    case 8: return "monotonicity";
    case 9: return "boundary-sign";
    case 10: return "evolution-residual";
    case 11: return "self-similar-optimality";
    case 12: return "scaling-covariance";
  }
  return "unknown";
}

bool wants(const RunConfig& cfg, int id) {
  return std::find(cfg.diagnostics.criteria.begin(), cfg.diagnostics.criteria.end(), id) !=
         cfg.diagnostics.criteria.end();
}

bool wants(const RunConfig& cfg, const std::string& quantity) {
  return std::find(cfg.diagnostics.quantities.begin(), cfg.diagnostics.quantities.end(), quantity) !=
         cfg.diagnostics.quantities.end();
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ConfigInvalid, "output.directory: cannot write " + path.string());
  return out;
}

void write_quantity(const fs::path& dir, const std::string& file, const MonitoredQuantity& q) {
  auto out = open_csv(dir / file);
  q.write_csv(out);
}

void write_snapshots(const fs::path& dir, const SolutionTrajectory& traj) {
  fs::create_directories(dir / "snapshots");
  auto index = open_csv(dir / "snapshots" / "index.csv");
  index << "index,t,path\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const GridFunction& u = traj.snapshots[i];
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%05zu.csv", i);
    index << i << ',' << fmt(u.time()) << ',' << name << '\n';
    auto out = open_csv(dir / "snapshots" / name);
    const Domain& d = u.domain();
    out << (d.dim() == 1 ? "x,u,v,h\n" : "x,y,u,v,h\n");
    const GraphQuantities g = compute_quantities(u);
    for (const auto k : d.grid().active) {
      const Vecd x = d.node_position(k);
      for (int j = 0; j < d.dim(); ++j) out << fmt(x(j)) << ',';
      out << fmt(u[k]) << ',' << fmt(g.v[k]) << ',' << fmt(g.h[k]) << '\n';
    }
  }
}

struct Context {
  const RunConfig& cfg;
  fs::path dir;
  ExperimentResult& result;

  void put(const std::string& key, const std::string& value) { result.summary.emplace_back(key, value); }
  void criterion(int id, bool pass, const std::string& detail) {
    result.criteria.push_back({id, criterion_name(id), pass, detail});
  }
  double tol_constant() const { return cfg.diagnostics.tolerance_constant; }
};

void comparison_criterion(Context& ctx, const SolutionTrajectory& traj, const TransportField& f,
                          const GridFunction& u0) {
  const double h = u0.domain().spacing();
  const double tol = 1e-8 + ctx.tol_constant() * h;
  const auto rep = comparison_bound_check(traj, f, u0, tol);
  ctx.put("sup_f", fmt(rep.sup_f));
  ctx.put("comparison_min_slack", fmt(rep.min_slack));
  ctx.criterion(6, rep.holds, "min slack " + fixed("%.3e", rep.min_slack) + ", tolerance " + fixed("%.3e", tol));
}

void single_run(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Domain d = cfg.domain.build();
  const GridFunction u0 = cfg.initial_data(d);
  const TransportField f = cfg.transport_field();
  const double h = d.spacing();
  const auto& dg = cfg.diagnostics;

  const SolutionTrajectory traj = run(u0, f, cfg.solver.solver);
  ctx.put("steps", std::to_string(traj.steps));
  ctx.put("final_time", fmt(traj.back().time()));
  ctx.put("status", traj.status == RunStatus::BlowupDetected ? "BlowupDetected" : "Completed");
  if (cfg.output.snapshots) write_snapshots(ctx.dir, traj);

  comparison_criterion(ctx, traj, f, u0);

  const auto bound = gradient_bound_monitor(traj, u0);
  write_quantity(ctx.dir, "sup_v.csv", bound.sup_v);
  ctx.put("gradient_bound", fmt(bound.bound));
  ctx.put("max_sup_v", fmt(bound.running_max.back()));
  ctx.put("certified_time", fmt(bound.certified_time));
  if (bound.first_violation) ctx.put("first_violation", fmt(*bound.first_violation));
  if (wants(cfg, 7)) {
    const double du0 = sup_gradient(u0);
    const bool pre = du0 <= 1.0;
    ctx.criterion(7, pre && bound.certified_time > 0.0,
                  std::string(pre ? "" : "initial slope exceeds 1, ") + "certified on [0, " +
                      fixed("%.4g", bound.certified_time) + "]");
  }

  const auto exps = dg.exponents(cfg.dim());
  if (wants(cfg, "inner-transport-norm")) {
    write_quantity(ctx.dir, "inner_transport_norm.csv", inner_transport_series(traj, f, *exps));
  }
  if (wants(cfg, "transport-norm") && traj.back().time() > traj.front().time()) {
    ctx.put("transport_norm", fmt(transport_norm(traj, f, *exps, traj.back().time())));
  }

  Vecd pole;
  if (!dg.pole.empty()) pole = Eigen::Map<const Vecd>(dg.pole.data(), static_cast<Index>(dg.pole.size()));
  const KernelSpec spec{pole, dg.s, dg.kernel_radius};
  if (wants(cfg, "monotonicity")) {
    write_quantity(ctx.dir, "monotonicity.csv", monotonicity_quantity(traj, spec, Weight::V, dg.kernel_terms));
  }
  if (wants(cfg, "weighted-monotonicity")) {
    write_quantity(ctx.dir, "weighted_monotonicity.csv", weighted_quantity(traj, spec, dg.c13, dg.kernel_terms));
  }
  if (wants(cfg, "boundary-flux")) {
    write_quantity(ctx.dir, "boundary_flux.csv", boundary_flux_quantity(traj, spec, dg.boundary_samples));
  }
  if (wants(cfg, 8)) {
    if (!f.is_zero()) fail(ErrorCode::ConfigInvalid, "transport.kind: the monotonicity criterion needs f = 0");
    if (static_cast<int>(dg.pole.size()) != cfg.dim() + 1) {
      fail(ErrorCode::ConfigInvalid, "diagnostics.pole: needs n + 1 coordinates");
    }
    const double reach = dg.s - traj.front().time();
    if (!(dg.kernel_radius / 16.0 >= 6.0 * std::sqrt(reach))) {
      fail(ErrorCode::ConfigInvalid, "diagnostics.kernel_radius: the cutoff plateau must cover 6 sqrt(s - t)");
    }
    if (!(d.depth(pole.head(cfg.dim())) >= dg.kernel_radius / 8.0)) {
      fail(ErrorCode::ConfigInvalid, "diagnostics.pole: the kernel support must stay inside the domain");
    }
    const auto q = monotonicity_quantity(traj, spec, Weight::V, KernelTerms::Rho1);
    write_quantity(ctx.dir, "monotonicity_rho1.csv", q);
    const auto vals = q.values();
    double worst = 0.0;
    for (std::size_t i = 1; i < vals.size(); ++i) worst = std::max(worst, vals[i] - vals[i - 1]);
    const double tol = ctx.tol_constant() * (h + traj.dt);
    ctx.put("monotonicity_max_increase", fmt(worst));
    ctx.criterion(8, vals.size() >= 2 && worst <= tol,
                  "largest increase " + fixed("%.3e", worst) + ", tolerance " + fixed("%.3e", tol) + " over " +
                      std::to_string(vals.size()) + " snapshots");
  }

  if (wants(cfg, "evolution-residual")) {
    write_quantity(ctx.dir, "evolution_residual.csv", evolution_residual(traj, f, dg.margin));
  }
  if (wants(cfg, "boundary-sign") || wants(cfg, 9)) {
    const auto rep = boundary_sign_check(traj, dg.boundary_samples);
    write_quantity(ctx.dir, "boundary_sign.csv", rep.series);
    ctx.put("boundary_sign_max", fmt(rep.max_direct));
    ctx.put("boundary_sign_disagreement", fmt(rep.max_disagreement));
    if (wants(cfg, 9)) {
      const double tol = thresholds::sign_floor + ctx.tol_constant() * h;
      const bool pass = rep.max_direct <= tol && rep.max_disagreement <= ctx.tol_constant() * h;
      ctx.criterion(9, pass,
                    "max " + fixed("%.3e", rep.max_direct) + ", identity gap " +
                        fixed("%.3e", rep.max_disagreement) + ", tolerance " + fixed("%.3e", tol));
    }
  }
  if (wants(cfg, "holder")) {
    const int n = cfg.dim();
    Vecd lo(n + 1), hi(n + 1);
    double height = 0.0;
    for (const auto& u : traj.snapshots) height = std::max(height, u.sup_abs());
    if (n == 1) {
      lo << d.lower(), -height - 1.0;
      hi << d.upper(), height + 1.0;
    } else {
      lo << -d.radius(), -d.radius(), -height - 1.0;
      hi << d.radius(), d.radius(), height + 1.0;
    }
    const auto pairs = sample_pairs(lo, hi, traj.front().time(), traj.back().time(), dg.holder_pairs, dg.seed);
    ctx.put("holder_constant", fmt(holder_constant_estimate(f, dg.holder_alpha, pairs)));
  }
}

void convergence_run(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const auto sol = *cfg.self_similar();
  ConvergenceSetup setup;
  setup.domain = [&](int nodes) { return cfg.domain.build(nodes); };
  setup.space_nodes = cfg.solver.levels;
  setup.space_dt = cfg.solver.level_steps.front();
  setup.space_final_time = cfg.solver.solver.final_time;
  setup.time_nodes = cfg.solver.time_nodes > 0 ? cfg.solver.time_nodes : cfg.solver.levels.back();
  setup.time_steps = cfg.solver.time_steps;
  setup.time_final_time = cfg.solver.time_final_time > 0.0 ? cfg.solver.time_final_time : setup.space_final_time;
  setup.comparison_constant = ctx.tol_constant();
  const auto rep = convergence_study(sol, setup);

  auto out = open_csv(ctx.dir / "convergence.csv");
  out << "ladder,size,error\n";
  for (const auto& l : rep.space) out << "space," << fmt(l.size) << ',' << fmt(l.error) << '\n';
  for (const auto& l : rep.time) out << "time," << fmt(l.size) << ',' << fmt(l.error) << '\n';
  ctx.put("spatial_order", fixed("%.4f", rep.spatial_order));
  ctx.put("temporal_order", fixed("%.4f", rep.temporal_order));
  ctx.criterion(6, rep.comparison_holds, "every study run");
  if (wants(cfg, 5)) {
    const bool pass = rep.spatial_order >= thresholds::spatial_order && rep.temporal_order >= thresholds::temporal_order;
    ctx.criterion(5, pass,
                  "space " + fixed("%.3f", rep.spatial_order) + " (>= 1.8), time " + fixed("%.3f", rep.temporal_order) +
                      " (>= 0.8)");
  }
}

void residual_run(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const auto sol = *cfg.self_similar();
  const TransportField f = sol.transport_field();
  std::vector<ConvergenceLevel> levels;
  bool comparison = true;
  auto out = open_csv(ctx.dir / "residual_study.csv");
  out << "nodes,h,dt,residual\n";
  for (std::size_t i = 0; i < cfg.solver.levels.size(); ++i) {
    const Domain d = cfg.domain.build(cfg.solver.levels[i]);
    const GridFunction u0 = sol.sample(d, 0.0);
    SolverConfig sc = cfg.solver.solver;
    sc.dt = cfg.solver.level_steps[i];
    sc.output_every = 1;
    const auto traj = run(u0, f, sc);
    comparison = comparison &&
                 comparison_bound_check(traj, f, u0, 1e-8 + ctx.tol_constant() * d.spacing()).holds;
    const auto r = evolution_residual(traj, f, cfg.diagnostics.margin);
    double worst = 0.0;
    for (double x : r.values()) worst = std::max(worst, x);
    levels.push_back({d.spacing() + sc.dt, worst});
    out << cfg.solver.levels[i] << ',' << fmt(d.spacing()) << ',' << fmt(sc.dt) << ',' << fmt(worst) << '\n';
  }
  const double order = fitted_order(levels);
  ctx.put("residual_order", fixed("%.4f", order));
  ctx.criterion(6, comparison, "every study run");
  if (wants(cfg, 10)) {
    ctx.criterion(10, order >= thresholds::residual_order, "fitted order " + fixed("%.3f", order) + " (>= 0.8)");
  }
}

void blowup_run(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  BlowupSetup setup;
  setup.exps = *cfg.diagnostics.exponents(cfg.dim());
  setup.amplitude = cfg.transport.profile_amplitude;
  setup.profile_radius = cfg.transport.profile_radius;
  setup.domain_radius = cfg.domain.kind == DomainKind::Disk ? cfg.domain.radius
                                                            : std::min(-cfg.domain.lower, cfg.domain.upper);
  setup.ladder = cfg.solver.levels;
  if (cfg.solver.step_fraction > 0.0) setup.step_fraction = cfg.solver.step_fraction;
  setup.solver_gap = cfg.solver.solver_gap;
  setup.ceiling = cfg.solver.solver.blowup_ceiling;
  setup.comparison_constant = ctx.tol_constant();
  const auto rep = blowup_experiment(setup);

  const double fitted = rep.fitted_gradient_exponent.back();
  const double grad_rel = std::abs(fitted - rep.expected_gradient_exponent) / std::abs(rep.expected_gradient_exponent);
  const double slope_rel = std::abs(rep.inner_slope - rep.inner_slope_closed_form) / std::abs(rep.inner_slope_closed_form);

  auto out = open_csv(ctx.dir / "blowup.csv");
  out << "p,q,eps0,alpha0,expected_gradient_exponent,fitted_gradient_exponent,inner_slope,closed_form_slope\n";
  out << setup.exps.p.str() << ',' << setup.exps.q.str() << ',' << to_string(rep.eps0) << ','
      << to_string(rep.alpha0) << ',' << fmt(rep.expected_gradient_exponent) << ',' << fmt(fitted) << ','
      << fmt(rep.inner_slope) << ',' << fmt(rep.inner_slope_closed_form) << '\n';
  auto ladder = open_csv(ctx.dir / "blowup_ladder.csv");
  ladder << "nodes,fitted_gradient_exponent\n";
  for (std::size_t i = 0; i < setup.ladder.size(); ++i) {
    ladder << setup.ladder[i] << ',' << fmt(rep.fitted_gradient_exponent[i]) << '\n';
  }
  auto norms = open_csv(ctx.dir / "transport_partial_norms.csv");
  norms << "delta,norm\n";
  for (std::size_t i = 0; i < setup.deltas.size(); ++i) {
    norms << fmt(setup.deltas[i]) << ',' << fmt(rep.partial_norms[i]) << '\n';
  }

  ctx.put("eps0", fmt(to_double(rep.eps0)));
  ctx.put("eps0_exact", to_string(rep.eps0));
  ctx.put("alpha0", fmt(to_double(rep.alpha0)));
  ctx.put("alpha0_exact", to_string(rep.alpha0));
  ctx.put("fitted_gradient_exponent", fixed("%.5f", fitted));
  ctx.put("expected_gradient_exponent", fmt(rep.expected_gradient_exponent));
  ctx.put("inner_slope", fixed("%.5f", rep.inner_slope));
  ctx.put("inner_slope_closed_form", fmt(rep.inner_slope_closed_form));
  ctx.put("transport_norm_cauchy", rep.cauchy ? "yes" : "no");
  ctx.put("status", rep.blowup_detected ? "BlowupDetected" : "Completed");
  if (rep.blowup_detected) {
    ctx.put("blowup_gap", fmt(rep.blowup_gap));
    ctx.put("blowup_source", rep.blowup_source);
  }
  ctx.put("companion_bound_holds", rep.companion_bound_holds ? "yes" : "no");
  ctx.criterion(6, rep.comparison_holds, "every study run");
  if (wants(cfg, 11)) {
    const bool pass = grad_rel <= thresholds::gradient_exponent_relative &&
                      slope_rel <= thresholds::inner_slope_relative && rep.cauchy && rep.blowup_detected &&
                      rep.companion_bound_holds;
    ctx.criterion(11, pass,
                  "gradient exponent " + fixed("%.5f", fitted) + " vs " + fmt(rep.expected_gradient_exponent) + " (" +
                      fixed("%.1f", 100 * grad_rel) + "%), inner slope " + fixed("%.5f", rep.inner_slope) + " vs " +
                      fmt(rep.inner_slope_closed_form) + " (" + fixed("%.1f", 100 * slope_rel) + "%), Cauchy " +
                      (rep.cauchy ? "yes" : "no") + ", " + (rep.blowup_detected ? "BlowupDetected" : "no blow-up"));
  }
}

void scaling_run(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const double lambda = cfg.solver.scale;
  const Domain d = cfg.domain.build();
  const Domain dl = cfg.domain.kind == DomainKind::Interval
                        ? Domain::interval(cfg.domain.lower / lambda, cfg.domain.upper / lambda, cfg.domain.nodes,
                                           cfg.domain.cutoff_radius ? std::optional<double>(*cfg.domain.cutoff_radius / lambda)
                                                                    : std::nullopt)
                        : Domain::disk(cfg.domain.radius / lambda, cfg.domain.nodes);
  const TransportField f = cfg.transport_field();
  const TransportField fl("rescaled", f.dim(), [f, lambda](const Vecd& y, double z, double s) {
    return Vecd(lambda * f(lambda * y, lambda * z, lambda * lambda * s));
  });
  const GridFunction u0 = cfg.initial_data(d);
  // The rescaled grid has the same node count, so its nodes are the base
  // nodes divided by lambda, in the same order.
  if (dl.grid().active.size() != d.grid().active.size()) {
    fail(ErrorCode::GridMismatch, "rescaled grid has a different active set");
  }
  const GridFunction w0 = GridFunction::from_active(dl, u0.active_values() / lambda, 0.0);
  SolverConfig sa = cfg.solver.solver;
  sa.output_every = 1;
  SolverConfig sb = sa;
  sb.dt = sa.dt / (lambda * lambda);
  sb.final_time = sa.final_time / (lambda * lambda);
  const auto a = run(u0, f, sa);
  const auto b = run(w0, fl, sb);

  // Discretization error of sup |du| from the same run on the refined grid.
  const Domain fine = cfg.domain.build(2 * cfg.domain.nodes - 1);
  const auto af = run(cfg.initial_data(fine), f, sa);

  double gap = 0.0, disc = 0.0;
  const std::size_t m = std::min({a.gradient_history.size(), b.gradient_history.size(), af.gradient_history.size()});
  auto out = open_csv(ctx.dir / "scaling.csv");
  out << "t,sup_du,s,sup_dw,sup_du_refined\n";
  for (std::size_t i = 0; i < m; ++i) {
    gap = std::max(gap, std::abs(a.gradient_history[i].second - b.gradient_history[i].second));
    disc = std::max(disc, std::abs(a.gradient_history[i].second - af.gradient_history[i].second));
    out << fmt(a.gradient_history[i].first) << ',' << fmt(a.gradient_history[i].second) << ','
        << fmt(b.gradient_history[i].first) << ',' << fmt(b.gradient_history[i].second) << ','
        << fmt(af.gradient_history[i].second) << '\n';
  }
  const bool aligned = a.gradient_history.size() == b.gradient_history.size();
  ctx.put("scaling_gap", fmt(gap));
  ctx.put("discretization_error", fmt(disc));
  const double h = d.spacing();
  bool comparison = comparison_bound_check(a, f, u0, 1e-8 + ctx.tol_constant() * h).holds &&
                    comparison_bound_check(b, fl, w0, 1e-8 + ctx.tol_constant() * dl.spacing()).holds;
  ctx.criterion(6, comparison, "both runs");
  if (wants(cfg, 12)) {
    ctx.criterion(12, aligned && gap <= 2.0 * disc + 1e-12,
                  "max |sup dw - sup du| " + fixed("%.3e", gap) + ", 2 x discretization error " +
                      fixed("%.3e", 2.0 * disc));
  }
}

void write_summary(const ExperimentResult& r) {
  std::ofstream out(r.directory / "summary.txt");
  out << "run = " << r.name << '\n';
  for (const auto& [k, v] : r.summary) out << k << " = " << v << '\n';
  if (r.error) out << "error = " << *r.error << '\n';
  for (const auto& c : r.criteria) {
    out << "criterion " << c.id << ' ' << c.name << ": " << (c.pass ? "PASS" : "FAIL") << " (" << c.detail << ")\n";
  }
  out << "exit = " << r.exit_code << '\n';
}

}  // namespace

int combine_exit(int a, int b) {
  for (int code : {ExitConfigError, ExitRuntimeError, ExitCriterionFailure}) {
    if (a == code || b == code) return code;
  }
  return ExitSuccess;
}

fs::path output_root() {
  if (const char* root = std::getenv("GMCF_OUTPUT_ROOT"); root && *root) return root;
  return fs::current_path();
}

ExperimentResult run_experiment(const RunConfig& cfg) {
  return run_experiment(cfg, output_root() / cfg.output.directory);
}

ExperimentResult run_experiment(const RunConfig& cfg, const fs::path& directory) {
  ExperimentResult result;
  result.name = cfg.name;
  result.directory = directory;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) {
    result.exit_code = ExitConfigError;
    result.error = "output.directory: cannot create " + directory.string();
    return result;
  }
  Context ctx{cfg, directory, result};
  try {
    switch (cfg.solver.study) {
      case Study::Single: single_run(ctx); break;
      case Study::Convergence: convergence_run(ctx); break;
      case Study::Residual: residual_run(ctx); break;
      case Study::Blowup: blowup_run(ctx); break;
      case Study::Scaling: scaling_run(ctx); break;
    }
    for (int id : cfg.diagnostics.criteria) {
      const bool reported = std::any_of(result.criteria.begin(), result.criteria.end(),
                                        [id](const CriterionResult& c) { return c.id == id; });
      if (!reported) result.criteria.push_back({id, criterion_name(id), false, "not produced by this study"});
    }
    for (const auto& c : result.criteria) {
      if (!c.pass) result.exit_code = ExitCriterionFailure;
    }
  } catch (const Error& e) {
    result.error = e.what();
    result.exit_code = e.code() == ErrorCode::ConfigInvalid ? ExitConfigError : ExitRuntimeError;
  } catch (const std::exception& e) {
    result.error = e.what();
    result.exit_code = ExitRuntimeError;
  }
  write_summary(result);
  return result;
}

SuiteResult verify_suite(const fs::path& dir, unsigned jobs) {
  SuiteResult suite;
  std::vector<fs::path> configs;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".ini") configs.push_back(entry.path());
    }
  } else {
    suite.exit_code = ExitConfigError;
    suite.report.push_back("error: " + dir.string() + " is not a directory");
    return suite;
  }
  std::sort(configs.begin(), configs.end());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

  auto one = [](const fs::path& path) {
    try {
      const RunConfig cfg = load_config(path);
      return run_experiment(cfg);
    } catch (const Error& e) {
      ExperimentResult r;
      r.name = path.stem().string();
      r.error = e.what();
      r.exit_code = e.code() == ErrorCode::ConfigInvalid ? ExitConfigError : ExitRuntimeError;
      return r;
    }
  };

  suite.runs.resize(configs.size());
  for (std::size_t start = 0; start < configs.size(); start += jobs) {
    std::vector<std::future<ExperimentResult>> batch;
    for (std::size_t i = start; i < std::min(configs.size(), start + jobs); ++i) {
      batch.push_back(std::async(std::launch::async, one, configs[i]));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) suite.runs[start + i] = batch[i].get();
  }

  for (const auto& r : suite.runs) {
    if (r.error) suite.report.push_back(r.name + ": error: " + *r.error);
    for (const auto& c : r.criteria) {
      suite.report.push_back(r.name + ": criterion " + std::to_string(c.id) + ' ' + c.name + ": " +
                             (c.pass ? "PASS" : "FAIL") + " (" + c.detail + ")");
      ++suite.criteria_checked;
    }
    suite.exit_code = combine_exit(suite.exit_code, r.exit_code);
  }
  return suite;
}

}  // namespace gmcf
