#include "gmcf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "gmcf/errors.hpp"
#include "gmcf/graph.hpp"

namespace gmcf {

std::string_view to_string(QuantityTag tag) {
  switch (tag) {
    case QuantityTag::SupV: return "sup_v";
    case QuantityTag::InnerTransportNorm: return "inner_transport_norm";
    case QuantityTag::Monotonicity: return "monotonicity";
    case QuantityTag::WeightedMonotonicity: return "weighted_monotonicity";
    case QuantityTag::BoundaryFlux: return "boundary_flux";
    case QuantityTag::EvolutionResidual: return "evolution_residual";
    case QuantityTag::BoundarySign: return "boundary_sign";
  }
  return "unknown";
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void MonitoredQuantity::append(double t, double value) {
  if (!std::isfinite(t) || !std::isfinite(value)) {
    fail(ErrorCode::NonFiniteInput, std::string(to_string(tag)) + ": non-finite sample");
  }
  if (!series.empty() && !(t > series.back().first)) {
    fail(ErrorCode::TimeOrderViolation, std::string(to_string(tag)) + ": times must increase");
  }
  series.emplace_back(t, value);
}

std::vector<double> MonitoredQuantity::times() const {
  std::vector<double> out;
  for (const auto& [t, v] : series) out.push_back(t);
  return out;
}

std::vector<double> MonitoredQuantity::values() const {
  std::vector<double> out;
  for (const auto& [t, v] : series) out.push_back(v);
  return out;
}

void MonitoredQuantity::write_csv(std::ostream& out) const {
  out << "t,value,tag,pole_1,pole_2,pole_3,s,p,q\n";
  std::string meta;
  for (int i = 0; i < 3; ++i) {
    meta += ',';
    if (pole && i < pole->size()) meta += format_number((*pole)(i));
  }
  meta += ',';
  if (s) meta += format_number(*s);
  meta += ',';
  if (exps) meta += exps->p.str();
  meta += ',';
  if (exps) meta += exps->q.str();
  for (const auto& [t, v] : series) {
    out << format_number(t) << ',' << format_number(v) << ',' << to_string(tag) << meta << '\n';
  }
}

// Transport norms ----------------------------------------------------------

double inner_transport_norm(const GridFunction& u, const TransportField& f, const Exponent& p) {
  const Domain& d = u.domain();
  const GridLayout& g = u.grid();
  if (p.is_infinite()) {
    double m = 0.0;
    for (const Index k : g.active) m = std::max(m, f(d.node_position(k), u[k], u.time()).norm());
    return m;
  }
  const double pe = p.to_double();
  Eigen::VectorXd integrand = Eigen::VectorXd::Zero(g.size());
  for (const Index k : g.active) integrand[k] = std::pow(f(d.node_position(k), u[k], u.time()).norm(), pe);
  return std::pow(surface_integral(u, integrand), 1.0 / pe);
}

MonitoredQuantity inner_transport_series(const SolutionTrajectory& traj, const TransportField& f,
                                         const NormExponents& exps) {
  MonitoredQuantity m;
  m.tag = QuantityTag::InnerTransportNorm;
  m.exps = exps;
  for (const GridFunction& s : traj.snapshots) m.append(s.time(), inner_transport_norm(s, f, exps.p));
  return m;
}

double transport_norm(const SolutionTrajectory& traj, const TransportField& f, const NormExponents& exps,
                      double tau) {
  if (traj.snapshots.empty()) fail(ErrorCode::EmptyInterval, "empty trajectory");
  const double t0 = traj.front().time();
  const double slack = 1e-12 * std::max(1.0, std::abs(traj.back().time()));
  if (!(tau > t0) || tau > traj.back().time() + slack) {
    fail(ErrorCode::EmptyInterval, "norm interval must lie inside the trajectory and have positive length");
  }
  std::vector<double> ts, ns;
  for (const GridFunction& s : traj.snapshots) {
    ts.push_back(s.time());
    ns.push_back(inner_transport_norm(s, f, exps.p));
  }
  if (exps.q.is_infinite()) {
    double m = 0.0;
    for (std::size_t i = 0; i < ts.size() && ts[i] <= tau + slack; ++i) m = std::max(m, ns[i]);
    return m;
  }
  const double q = exps.q.to_double();
  double acc = 0.0;
  for (std::size_t i = 1; i < ts.size() && ts[i - 1] < tau; ++i) {
    const double a = std::pow(ns[i - 1], q);
    double b = std::pow(ns[i], q);
    double right = ts[i];
    if (ts[i] > tau) {
      b = a + (b - a) * (tau - ts[i - 1]) / (ts[i] - ts[i - 1]);
      right = tau;
    }
    acc += 0.5 * (a + b) * (right - ts[i - 1]);
  }
  return std::pow(acc, 1.0 / q);
}

// Gradient bound ------------------------------------------------------------

GradientBoundReport gradient_bound_monitor(const SolutionTrajectory& traj, const GridFunction& u0) {
  GradientBoundReport rep;
  const double g0 = sup_gradient(u0);
  rep.bound = 4.0 * (1.0 + g0 * g0);
  rep.sup_v.tag = QuantityTag::SupV;
  double running = 0.0;
  for (const GridFunction& s : traj.snapshots) {
    const double g = sup_gradient(s);
    const double v = std::sqrt(1.0 + g * g);
    rep.sup_v.append(s.time(), v);
    running = std::max(running, v);
    rep.running_max.push_back(running);
    if (v > rep.bound) {
      if (!rep.first_violation) rep.first_violation = s.time();
    } else if (!rep.first_violation) {
      rep.certified_time = s.time() - traj.front().time();
    }
  }
  return rep;
}

// Kernel-weighted integrals -------------------------------------------------

namespace {

double kernel_sum(const KernelSpec& spec, const Domain& domain, const Vecd& X, double t, KernelTerms terms) {
  if (terms == KernelTerms::Rho1) {
    const double r2 = (X - spec.pole).squaredNorm();
    const auto eta = cutoff<double>(r2, spec.cutoff_radius);
    if (eta.value == 0.0) return 0.0;
    return eta.value * eval_rho<double>(spec, X, t).value;
  }
  const auto k = eval_truncated<double>(spec, domain, X, t);
  return k.rho1.value + k.rho2.value;
}

// Sub-cell offsets for 4x refinement along each axis, restricted to the part
// of the node's cell inside the domain.
std::vector<Vecd> sub_offsets(const Domain& d, const Vecd& x, double h) {
  constexpr int m = 4;
  std::vector<Vecd> out;
  const int n = d.dim();
  const int jmax = n == 2 ? m : 1;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < jmax; ++j) {
      Vecd o(n);
      o(0) = h * ((i + 0.5) / m - 0.5);
      if (n == 2) o(1) = h * ((j + 0.5) / m - 0.5);
      if (d.contains(x + o)) out.push_back(o);
    }
  }
  if (n == 1 && out.size() < static_cast<std::size_t>(m)) {
    // Interval end cell of width h/2: place the sub-points inside it.
    out.clear();
    const double side = x(0) - d.lower() < 0.5 * h ? 1.0 : -1.0;
    for (int i = 0; i < m; ++i) out.push_back(Vecd::Constant(1, side * 0.5 * h * (i + 0.5) / m));
  }
  return out;
}

}  // namespace

double kernel_integral(const GridFunction& u, const KernelSpec& spec, Weight weight, KernelTerms terms) {
  const Domain& d = u.domain();
  const GridLayout& g = u.grid();
  const int n = d.dim();
  if (spec.pole.size() != n + 1) fail(ErrorCode::GridMismatch, "pole needs n + 1 coordinates");
  const double t = u.time();
  const double tau = detail::time_gap(spec, t);
  const double refine_radius = 4.0 * std::sqrt(tau) + g.spacing;
  const Vecd y = spec.pole.head(n);
  double acc = 0.0;
  for (const Index k : g.active) {
    const double w = g.quadrature_weight[static_cast<std::size_t>(k)];
    const Vecd x = d.node_position(k);
    const Vecd du = grid_gradient(u, k);
    Vecd X(n + 1);
    if ((x - y).norm() > refine_radius) {
      X.head(n) = x;
      X(n) = u[k];
      const double phi = weight == Weight::V ? std::sqrt(1.0 + du.squaredNorm()) : 1.0;
      const double v = std::sqrt(1.0 + du.squaredNorm());
      acc += w * phi * v * kernel_sum(spec, d, X, t, terms);
      continue;
    }
    // Second-order Taylor reconstruction of u inside the cell.
    const Matd hess = grid_hessian(u, k);
    const auto offsets = sub_offsets(d, x, g.spacing);
    double local = 0.0;
    for (const Vecd& o : offsets) {
      X.head(n) = x + o;
      X(n) = u[k] + du.dot(o) + 0.5 * o.dot(hess * o);
      const Vecd dl = du + hess * o;
      const double v = std::sqrt(1.0 + dl.squaredNorm());
      const double phi = weight == Weight::V ? v : 1.0;
      local += phi * v * kernel_sum(spec, d, X, t, terms);
    }
    acc += w * local / static_cast<double>(offsets.size());
  }
  return acc;
}

MonitoredQuantity monotonicity_quantity(const SolutionTrajectory& traj, const KernelSpec& spec, Weight weight,
                                        KernelTerms terms) {
  if (traj.snapshots.empty() || traj.back().time() < spec.s) {
    fail(ErrorCode::PoleNotCovered, "trajectory must reach the pole time s");
  }
  MonitoredQuantity m;
  m.tag = QuantityTag::Monotonicity;
  m.pole = spec.pole;
  m.s = spec.s;
  for (const GridFunction& snap : traj.snapshots) {
    if (!(snap.time() < spec.s)) break;
    m.append(snap.time(), kernel_integral(snap, spec, weight, terms));
  }
  return m;
}

double eta_weight(double s, double t, double c) {
  return std::exp(-c * (std::pow(s, 0.25) - std::pow(s - t, 0.25)));
}

MonitoredQuantity weighted_quantity(const SolutionTrajectory& traj, const KernelSpec& spec, double c13,
                                    KernelTerms terms) {
  MonitoredQuantity m = monotonicity_quantity(traj, spec, Weight::V, terms);
  m.tag = QuantityTag::WeightedMonotonicity;
  for (auto& [t, v] : m.series) v *= eta_weight(spec.s, t, c13);
  return m;
}

namespace {

struct BoundaryState {
  Vecd point;
  Vecd normal;
  Vecd du;
  Matd hessian;
  double height = 0.0;
};

// Active node nearest to a boundary point of the disk.
Index nearest_active(const GridLayout& g, const Vecd& p) {
  const auto ci = static_cast<Index>(std::lround((p(0) - g.origin_x) / g.spacing));
  const auto cj = static_cast<Index>(std::lround((p(1) - g.origin_y) / g.spacing));
  Index best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (Index di = -2; di <= 2; ++di) {
    for (Index dj = -2; dj <= 2; ++dj) {
      const Index i = ci + di, j = cj + dj;
      if (i < -g.pad || j < -g.pad || i + g.pad >= g.nx || j + g.pad >= g.ny) continue;
      const Index k = g.index(i, j);
      if (g.active_number[static_cast<std::size_t>(k)] < 0) continue;
      const double dx = g.x(k) - p(0), dy = g.y(k) - p(1);
      const double dist = dx * dx + dy * dy;
      if (dist < best_d) {
        best_d = dist;
        best = k;
      }
    }
  }
  if (best < 0) fail(ErrorCode::GridMismatch, "no active node near the boundary point");
  return best;
}

std::vector<BoundaryState> boundary_states(const GridFunction& u, int samples) {
  const Domain& d = u.domain();
  const GridLayout& g = u.grid();
  std::vector<BoundaryState> out;
  if (d.kind() == DomainKind::Interval) {
    for (const Index k : {g.active.front(), g.active.back()}) {
      BoundaryState b;
      b.point = d.node_position(k);
      b.normal = Vecd::Constant(1, k == g.active.front() ? -1.0 : 1.0);
      b.du = grid_gradient(u, k);
      b.hessian = grid_hessian(u, k);
      b.height = u[k];
      out.push_back(b);
    }
    return out;
  }
  for (const auto& [p, nu] : d.boundary_samples(samples)) {
    const Index k = nearest_active(g, p);
    const Vecd off = p - d.node_position(k);
    BoundaryState b;
    b.point = p;
    b.normal = nu;
    b.hessian = grid_hessian(u, k);
    const Vecd du = grid_gradient(u, k);
    b.du = du + b.hessian * off;
    b.height = u[k] + du.dot(off);
    out.push_back(b);
  }
  return out;
}

// D_Gamma v . nu with dv = d^2u du / v.
double direct_boundary_value(const BoundaryState& b) {
  const double v = std::sqrt(1.0 + b.du.squaredNorm());
  const Vecd dv = b.hessian * b.du / v;
  return dv.dot(b.normal) - dv.dot(b.du) * b.du.dot(b.normal) / (v * v);
}

// B(du, du) / v with B = -(I - nu nu) / r on the disk and 0 on the interval.
double identity_boundary_value(const Domain& d, const BoundaryState& b) {
  if (d.kind() == DomainKind::Interval) return 0.0;
  const double v = std::sqrt(1.0 + b.du.squaredNorm());
  const Vecd tangential = b.du - b.du.dot(b.normal) * b.normal;
  return -tangential.squaredNorm() / (d.radius() * v);
}

}  // namespace

MonitoredQuantity boundary_flux_quantity(const SolutionTrajectory& traj, const KernelSpec& spec, int samples) {
  MonitoredQuantity m;
  m.tag = QuantityTag::BoundaryFlux;
  m.pole = spec.pole;
  m.s = spec.s;
  for (const GridFunction& snap : traj.snapshots) {
    if (!(snap.time() < spec.s)) break;
    const Domain& d = snap.domain();
    double acc = 0.0;
    for (const BoundaryState& b : boundary_states(snap, samples)) {
      Vecd X(d.dim() + 1);
      X.head(d.dim()) = b.point;
      X(d.dim()) = b.height;
      const double k = kernel_sum(spec, d, X, snap.time(), KernelTerms::Rho1PlusRho2);
      double measure = 1.0;
      if (d.kind() == DomainKind::Disk) {
        const Vecd tangent = (Vecd(2) << -b.normal(1), b.normal(0)).finished();
        const double slope = b.du.dot(tangent);
        measure = 2.0 * M_PI * d.radius() / samples * std::sqrt(1.0 + slope * slope);
      }
      acc += k * direct_boundary_value(b) * measure;
    }
    m.append(snap.time(), acc);
  }
  return m;
}

// Pointwise identities ------------------------------------------------------

namespace {

struct LevelFields {
  GraphQuantities q;
  GridFunction v;
};

LevelFields level_fields(const GridFunction& u) {
  LevelFields out{compute_quantities(u), GridFunction(u.domain(), u.time())};
  out.v.values() = out.q.v;
  out.v.close();
  return out;
}

}  // namespace

MonitoredQuantity evolution_residual(const SolutionTrajectory& traj, const TransportField& f, double margin) {
  if (traj.size() < 3) fail(ErrorCode::InsufficientSnapshots, "evolution residual needs three snapshots");
  MonitoredQuantity m;
  m.tag = QuantityTag::EvolutionResidual;
  const Domain& d = traj.front().domain();
  const GridLayout& g = d.grid();
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    const GridFunction& um = traj.snapshots[i - 1];
    const GridFunction& u = traj.snapshots[i];
    const GridFunction& up = traj.snapshots[i + 1];
    const double span = up.time() - um.time();
    const LevelFields lm = level_fields(um), l0 = level_fields(u), lp = level_fields(up);
    const GridFunction lb = laplace_beltrami(u, l0.v);
    const Eigen::MatrixXd tg = tangential_gradient(u, l0.v);
    GridFunction fn(d, u.time());
    for (const Index k : g.active) {
      fn[k] = f(d.node_position(k), u[k], u.time()).dot(l0.q.unit_normal(k));
    }
    fn.close();
    double worst = 0.0;
    for (const Index k : g.active) {
      if (d.depth(d.node_position(k)) < margin) continue;
      const double v = l0.q.v[k];
      const Vecd du = l0.q.gradient(k);
      const double dtv = (lp.q.v[k] - lm.q.v[k]) / span;
      const double dtu = (up[k] - um[k]) / span;
      const Vecd dv = grid_gradient(l0.v, k);
      const double r = dtv - lb[k] - (du.dot(dv) / v) * (dtu / v) + l0.q.a2[k] * v +
                       2.0 * tg.row(k).squaredNorm() / v - du.dot(grid_gradient(fn, k));
      worst = std::max(worst, std::abs(r));
    }
    m.append(u.time(), worst);
  }
  return m;
}

BoundarySignReport boundary_sign_check(const SolutionTrajectory& traj, int samples) {
  BoundarySignReport rep;
  rep.series.tag = QuantityTag::BoundarySign;
  rep.max_direct = -std::numeric_limits<double>::infinity();
  rep.max_identity = -std::numeric_limits<double>::infinity();
  for (const GridFunction& snap : traj.snapshots) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const BoundaryState& b : boundary_states(snap, samples)) {
      const double direct = direct_boundary_value(b);
      const double identity = identity_boundary_value(snap.domain(), b);
      worst = std::max(worst, direct);
      rep.max_identity = std::max(rep.max_identity, identity);
      rep.max_disagreement = std::max(rep.max_disagreement, std::abs(direct - identity));
    }
    rep.max_direct = std::max(rep.max_direct, worst);
    rep.series.append(snap.time(), worst);
  }
  return rep;
}

// Hoelder quotient -----------------------------------------------------------

double holder_constant_estimate(const TransportField& f, double a,
                                const std::vector<std::pair<SpaceTimePoint, SpaceTimePoint>>& pairs) {
  if (!(a > 0.0 && a <= 1.0)) fail(ErrorCode::ConfigInvalid, "Hoelder exponent must lie in (0, 1]");
  double best = 0.0;
  for (const auto& [p, q] : pairs) {
    const double denom = std::pow((p.X - q.X).norm(), a) + std::pow(std::abs(p.t - q.t), 0.5 * a);
    if (denom == 0.0) continue;  // DegenerateSample: coincident pair
    const int n = static_cast<int>(p.X.size()) - 1;
    const Vecd fp = f(p.X.head(n), p.X(n), p.t), fq = f(q.X.head(n), q.X(n), q.t);
    best = std::max(best, (fp - fq).norm() / denom);
  }
  return best;
}

std::vector<std::pair<SpaceTimePoint, SpaceTimePoint>> sample_pairs(const Vecd& lo, const Vecd& hi, double t_lo,
                                                                    double t_hi, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] {
    SpaceTimePoint p;
    p.X = lo + (hi - lo).cwiseProduct(Vecd::NullaryExpr(lo.size(), [&] { return unit(rng); }));
    p.t = t_lo + (t_hi - t_lo) * unit(rng);
    return p;
  };
  std::vector<std::pair<SpaceTimePoint, SpaceTimePoint>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SpaceTimePoint a = draw();
    SpaceTimePoint b = draw();
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

}  // namespace gmcf
