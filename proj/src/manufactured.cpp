#include "gmcf/manufactured.hpp"

#include <algorithm>
#include <cmath>

#include "gmcf/errors.hpp"

namespace gmcf {

namespace {

// s = 1 - |xi|^2 / r^2, clamped to zero outside the support.
double bump_s(const BumpProfile& b, const Vecd& xi) {
  return std::max(0.0, 1.0 - xi.squaredNorm() / (b.radius * b.radius));
}

void require_gap(double tau) {
  if (!(tau > 0.0)) fail(ErrorCode::TimeAtSingularity, "self-similar fields need t < 1");
}

}  // namespace

double BumpProfile::value(const Vecd& xi) const {
  const double s = bump_s(*this, xi);
  return amplitude * s * s * s * s;
}

Vecd BumpProfile::gradient(const Vecd& xi) const {
  const double s = bump_s(*this, xi);
  return (-8.0 * amplitude * s * s * s / (radius * radius)) * xi;
}

Matd BumpProfile::hessian(const Vecd& xi) const {
  const double s = bump_s(*this, xi);
  const double r2 = radius * radius;
  Matd h = (48.0 * amplitude * s * s / (r2 * r2)) * (xi * xi.transpose());
  h.diagonal().array() -= 8.0 * amplitude * s * s * s / r2;
  return h;
}

double BumpProfile::sup_gradient() const {
  return 8.0 * std::abs(amplitude) / radius * std::pow(6.0 / 7.0, 3) / std::sqrt(7.0);
}

SelfSimilarSolution::SelfSimilarSolution(double alpha, BumpProfile profile) : alpha_(alpha), profile_(profile) {
  if (!(profile_.radius > 0.0) || (profile_.dim != 1 && profile_.dim != 2))
    fail(ErrorCode::ConfigInvalid, "bump profile needs dim in {1, 2} and a positive radius");
}

ExactFields SelfSimilarSolution::fields_at_gap(const Vecd& x, double tau) const {
  require_gap(tau);
  const double root = std::sqrt(tau);
  const Vecd xi = x / root;
  const double phi = profile_.value(xi);
  const Vecd dphi = profile_.gradient(xi);
  ExactFields e;
  e.u = std::pow(tau, alpha_) * phi;
  e.du = std::pow(tau, alpha_ - 0.5) * dphi;
  e.d2u = std::pow(tau, alpha_ - 1.0) * profile_.hessian(xi);
  e.dt_u = std::pow(tau, alpha_ - 1.0) * (-alpha_ * phi + 0.5 * dphi.dot(xi));
  return e;
}

ExactFields SelfSimilarSolution::exact_fields(const Vecd& x, double t) const {
  if (!(t < 1.0)) fail(ErrorCode::TimeAtSingularity, "self-similar fields need t < 1");
  return fields_at_gap(x, 1.0 - t);
}

double SelfSimilarSolution::transport_at_gap(const Vecd& x, double tau) const {
  require_gap(tau);
  const Vecd xi = x / std::sqrt(tau);
  const double phi = profile_.value(xi);
  const Vecd dphi = profile_.gradient(xi);
  const Matd d2phi = profile_.hessian(xi);
  const double a = alpha_;
  const double quad = dphi.dot(d2phi * dphi);
  return std::pow(tau, a - 1.0) * (-a * phi + 0.5 * dphi.dot(xi)) - std::pow(tau, a - 1.0) * d2phi.trace() +
         std::pow(tau, 3.0 * a - 2.0) * quad / (1.0 + std::pow(tau, 2.0 * a - 1.0) * dphi.squaredNorm());
}

Vecd SelfSimilarSolution::exact_transport(const Vecd& x, double t) const {
  if (!(t < 1.0)) fail(ErrorCode::TimeAtSingularity, "self-similar transport needs t < 1");
  Vecd f = Vecd::Zero(x.size() + 1);
  f(x.size()) = transport_at_gap(x, 1.0 - t);
  return f;
}

TransportField SelfSimilarSolution::transport_field() const {
  const SelfSimilarSolution copy = *this;
  return TransportField("self-similar", dim(),
                        [copy](const Vecd& x, double, double t) { return copy.exact_transport(x, t); });
}

double SelfSimilarSolution::sup_gradient_at_gap(double tau) const {
  require_gap(tau);
  return std::pow(tau, alpha_ - 0.5) * profile_.sup_gradient();
}

GridFunction SelfSimilarSolution::sample(const Domain& domain, double t) const {
  return GridFunction::sample(domain, [&](const Vecd& x) { return exact_fields(x, t).u; }, t);
}

double SelfSimilarSolution::inner_norm_at_gap(const Exponent& p, double tau, int cells) const {
  require_gap(tau);
  const double r = profile_.radius;
  const double hx = 2.0 * r / cells;
  const int n = dim();
  const double a = alpha_;
  double acc = 0.0;
  Vecd xi(n);
  const int jmax = n == 2 ? cells : 1;
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < jmax; ++j) {
      xi(0) = -r + (i + 0.5) * hx;
      if (n == 2) xi(1) = -r + (j + 0.5) * hx;
      if (xi.squaredNorm() >= r * r) continue;
      const double g = std::abs(transport_at_gap(std::sqrt(tau) * xi, tau));
      if (p.is_infinite()) {
        acc = std::max(acc, g);
        continue;
      }
      const double v = std::sqrt(1.0 + std::pow(tau, 2.0 * a - 1.0) * profile_.gradient(xi).squaredNorm());
      acc += std::pow(g, p.to_double()) * v;
    }
  }
  if (p.is_infinite()) return acc;
  // dx = tau^{n/2} dxi.
  acc *= std::pow(hx, n) * std::pow(tau, 0.5 * n);
  return std::pow(acc, 1.0 / p.to_double());
}

double scaling_exponent(const NormExponents& exps, double alpha) {
  const double inv_p = to_double(exps.p.reciprocal());
  return 3.0 * alpha - 2.0 + exps.n * inv_p / 2.0 + (2.0 * alpha - 1.0) * inv_p;
}

double self_similar_transport_norm(const SelfSimilarSolution& sol, const NormExponents& exps, double delta,
                                   int per_decade, int cells) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::EmptyInterval, "need 0 < delta < 1");
  // Substitute tau = exp(s): int_delta^1 N(tau)^q dtau = int N^q tau ds.
  const double span = -std::log10(delta);
  const int m = std::max(2, static_cast<int>(std::ceil(span * per_decade)));
  const double ds = -std::log(delta) / m;
  double acc = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double tau = std::exp(std::log(delta) + k * ds);
    const double inner = sol.inner_norm_at_gap(exps.p, tau, cells);
    if (exps.q.is_infinite()) {
      acc = std::max(acc, inner);
      continue;
    }
    const double w = (k == 0 || k == m) ? 0.5 : 1.0;
    acc += w * std::pow(inner, exps.q.to_double()) * tau * ds;
  }
  return exps.q.is_infinite() ? acc : std::pow(acc, 1.0 / exps.q.to_double());
}

}  // namespace gmcf
