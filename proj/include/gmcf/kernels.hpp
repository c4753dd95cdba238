#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gmcf/domain.hpp"
#include "gmcf/errors.hpp"
#include "gmcf/types.hpp"

namespace gmcf {

/// Pole (Y, s) and cutoff radius R of the truncated kernels. The pole has
/// n + 1 coordinates; the cutoff equals 1 on B_{R/16} and vanishes off B_{R/8}.
struct KernelSpec {
  Vecd pole;
  double s = 0.0;
  double cutoff_radius = 1.0;
};

template <typename Scalar>
struct KernelValues {
  Scalar value{};
  Vec<Scalar> gradient;
  Mat<Scalar> hessian;
  Scalar time_derivative{};
};

template <typename Scalar>
struct TruncatedKernels {
  KernelValues<Scalar> rho1;
  KernelValues<Scalar> rho2;
};

/// Radial cutoff eta as a function of r^2, with first and second derivatives
/// in r^2. Quintic smoothstep between (R/16)^2 and (R/8)^2.
template <typename Scalar>
struct CutoffValue {
  Scalar value{};
  Scalar d1{};
  Scalar d2{};
};

template <typename Scalar>
CutoffValue<Scalar> cutoff(Scalar r2, double radius) {
  const Scalar lo = static_cast<Scalar>(radius / 16.0);
  const Scalar hi = static_cast<Scalar>(radius / 8.0);
  CutoffValue<Scalar> c;
  if (r2 <= lo * lo) {
    c.value = Scalar(1);
    return c;
  }
  if (r2 >= hi * hi) return c;
  const Scalar width = hi * hi - lo * lo;
  const Scalar x = (r2 - lo * lo) / width;
  const Scalar x2 = x * x;
  c.value = Scalar(1) - x2 * x * (Scalar(10) - Scalar(15) * x + Scalar(6) * x2);
  c.d1 = -Scalar(30) * x2 * (x - Scalar(1)) * (x - Scalar(1)) / width;
  c.d2 = -Scalar(60) * x * (Scalar(2) * x - Scalar(1)) * (x - Scalar(1)) / (width * width);
  return c;
}

namespace detail {

template <typename Scalar>
Scalar time_gap(const KernelSpec& spec, Scalar t) {
  const Scalar tau = static_cast<Scalar>(spec.s) - t;
  if (!(tau > Scalar(0))) fail(ErrorCode::TimeOrderViolation, "kernel evaluated at t >= s");
  return tau;
}

/// Kernel K(phi) = eta(phi) G(phi) with G the Gaussian in the squared
/// distance phi; derivatives by the chain rule through phi.
template <typename Scalar>
KernelValues<Scalar> assemble(Scalar phi, const Vec<Scalar>& dphi, const Mat<Scalar>& d2phi,
                              Scalar tau, int n, const CutoffValue<Scalar>& eta) {
  using std::exp;
  using std::pow;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar g = pow(Scalar(4) * pi * tau, -Scalar(n) / Scalar(2)) * exp(-phi / (Scalar(4) * tau));
  const Scalar g1 = -g / (Scalar(4) * tau);
  const Scalar g2 = g / (Scalar(16) * tau * tau);
  const Scalar k0 = eta.value * g;
  const Scalar k1 = eta.d1 * g + eta.value * g1;
  const Scalar k2 = eta.d2 * g + Scalar(2) * eta.d1 * g1 + eta.value * g2;
  KernelValues<Scalar> out;
  out.value = k0;
  out.gradient = k1 * dphi;
  out.hessian = k2 * dphi * dphi.transpose() + k1 * d2phi;
  out.time_derivative = eta.value * (Scalar(n) / (Scalar(2) * tau) - phi / (Scalar(4) * tau * tau)) * g;
  return out;
}

template <typename Scalar>
CutoffValue<Scalar> no_cutoff() {
  return CutoffValue<Scalar>{Scalar(1), Scalar(0), Scalar(0)};
}

/// Squared distance |X~ - Y|^2 with its gradient and Hessian in X.
template <typename Scalar>
struct ReflectedDistance {
  Scalar phi{};
  Vec<Scalar> gradient;
  Mat<Scalar> hessian;
  Vec<Scalar> offset;  // X~ - Y
  Mat<Scalar> q_lifted;
};

template <typename Scalar>
ReflectedDistance<Scalar> reflected_distance(const KernelSpec& spec, const Domain& domain,
                                             const Vec<Scalar>& X) {
  const Index n = domain.dim();
  if (X.size() != n + 1 || spec.pole.size() != n + 1) {
    fail(ErrorCode::GridMismatch, "kernel points need n + 1 coordinates");
  }
  const ReflectionData<Scalar> r = reflect<Scalar>(domain, Vec<Scalar>(X.head(n)));
  const Vec<Scalar> Y = spec.pole.cast<Scalar>();
  ReflectedDistance<Scalar> out;
  out.offset = Vec<Scalar>(n + 1);
  out.offset.head(n) = r.reflected - Y.head(n);
  out.offset(n) = X(n) - Y(n);
  out.phi = out.offset.squaredNorm();

  const Vec<Scalar>& nu = r.normal;
  const Mat<Scalar> jac = Mat<Scalar>::Identity(n, n) - Scalar(2) * nu * nu.transpose() + Scalar(2) * r.q;
  const Vec<Scalar> z = out.offset.head(n);
  out.gradient = Vec<Scalar>(n + 1);
  out.gradient.head(n) = Scalar(2) * jac * z;
  out.gradient(n) = Scalar(2) * out.offset(n);

  // D_ij |X~-Y|^2 = 2 (I + 4Q + 4Q^2)_ij + 2 sum_k (d_j J_ik) Z_k,
  // d_j J_ik = -2 d_j(nu_i nu_k) + 2 d_j q_ik.
  out.hessian = Mat<Scalar>::Zero(n + 1, n + 1);
  const Mat<Scalar> I = Mat<Scalar>::Identity(n, n);
  Mat<Scalar> top = Scalar(2) * (I + Scalar(4) * r.q + Scalar(4) * r.q * r.q);
  for (Index j = 0; j < n; ++j) {
    const Mat<Scalar>& dq = r.q_derivative[static_cast<std::size_t>(j)];
    for (Index i = 0; i < n; ++i) {
      Scalar acc{};
      for (Index k = 0; k < n; ++k) {
        const Scalar d_nunu = r.normal_jacobian(i, j) * nu(k) + nu(i) * r.normal_jacobian(k, j);
        acc += (-Scalar(2) * d_nunu + Scalar(2) * dq(i, k)) * z(k);
      }
      top(i, j) += Scalar(2) * acc;
    }
  }
  out.hessian.topLeftCorner(n, n) = top;
  out.hessian(n, n) = Scalar(2);
  out.q_lifted = Mat<Scalar>::Zero(n + 1, n + 1);
  out.q_lifted.topLeftCorner(n, n) = r.q;
  return out;
}

}  // namespace detail

/// Backward heat kernel rho_{(Y,s)}(X, t) with analytic derivatives.
template <typename Scalar>
KernelValues<Scalar> eval_rho(const KernelSpec& spec, const Vec<Scalar>& X, Scalar t) {
  const Scalar tau = detail::time_gap(spec, t);
  const int n = static_cast<int>(X.size()) - 1;
  const Vec<Scalar> d = X - spec.pole.cast<Scalar>();
  return detail::assemble<Scalar>(d.squaredNorm(), Scalar(2) * d,
                                  Scalar(2) * Mat<Scalar>::Identity(n + 1, n + 1), tau, n,
                                  detail::no_cutoff<Scalar>());
}

/// Reflected kernel: the Gaussian evaluated at the reflected point X~.
template <typename Scalar>
KernelValues<Scalar> eval_rho_tilde(const KernelSpec& spec, const Domain& domain,
                                    const Vec<Scalar>& X, Scalar t) {
  const Scalar tau = detail::time_gap(spec, t);
  const auto rd = detail::reflected_distance<Scalar>(spec, domain, X);
  return detail::assemble<Scalar>(rd.phi, rd.gradient, rd.hessian, tau, domain.dim(),
                                  detail::no_cutoff<Scalar>());
}

/// rho_1 = eta(|X - Y|) rho and rho_2 = eta(|X~ - Y|) rho~. Where the
/// reflection is undefined (spatial depth >= R_dom/2), the pole lies in the
/// closed domain and R <= 4 R_dom, |X~ - Y| would exceed R/8, so rho_2 is
/// zero there.
template <typename Scalar>
TruncatedKernels<Scalar> eval_truncated(const KernelSpec& spec, const Domain& domain,
                                        const Vec<Scalar>& X, Scalar t) {
  const Scalar tau = detail::time_gap(spec, t);
  const int n = domain.dim();
  const double R = spec.cutoff_radius;
  TruncatedKernels<Scalar> out;

  const Vec<Scalar> d = X - spec.pole.cast<Scalar>();
  const Scalar phi1 = d.squaredNorm();
  const auto eta1 = cutoff<Scalar>(phi1, R);
  if (eta1.value == Scalar(0) && eta1.d1 == Scalar(0)) {
    out.rho1 = KernelValues<Scalar>{Scalar(0), Vec<Scalar>::Zero(n + 1), Mat<Scalar>::Zero(n + 1, n + 1), Scalar(0)};
  } else {
    out.rho1 = detail::assemble<Scalar>(phi1, Scalar(2) * d,
                                        Scalar(2) * Mat<Scalar>::Identity(n + 1, n + 1), tau, n, eta1);
  }

  out.rho2 = KernelValues<Scalar>{Scalar(0), Vec<Scalar>::Zero(n + 1), Mat<Scalar>::Zero(n + 1, n + 1), Scalar(0)};
  const Vec<Scalar> x = X.head(n);
  if (!(static_cast<double>(domain.depth(x.template cast<double>())) < 0.5 * domain.curvature_radius())) {
    if (!domain.contains(spec.pole.head(n)) || R > 4.0 * domain.curvature_radius()) {
      fail(ErrorCode::PointTooDeep, "reflection undefined and rho_2 not known to vanish");
    }
    return out;
  }
  // Interval midpoint: two nearest endpoints. Fine as long as neither
  // reflection reaches the cutoff support.
  if (domain.kind() == DomainKind::Interval &&
      x(0) - static_cast<Scalar>(domain.lower()) == static_cast<Scalar>(domain.upper()) - x(0)) {
    const Scalar half = static_cast<Scalar>(0.5 * (domain.upper() - domain.lower()));
    const Scalar y = static_cast<Scalar>(spec.pole(0));
    const Scalar near = std::min(y - (static_cast<Scalar>(domain.lower()) - half),
                                 static_cast<Scalar>(domain.upper()) + half - y);
    if (near >= static_cast<Scalar>(R / 8.0)) return out;
    fail(ErrorCode::PointTooDeep, "midpoint has two nearest endpoints");
  }
  const auto rd = detail::reflected_distance<Scalar>(spec, domain, X);
  const auto eta2 = cutoff<Scalar>(rd.phi, R);
  if (eta2.value == Scalar(0) && eta2.d1 == Scalar(0)) return out;
  out.rho2 = detail::assemble<Scalar>(rd.phi, rd.gradient, rd.hessian, tau, n, eta2);
  return out;
}

/// (w . D rho)^2 / rho + (I - w w) : D^2 rho + d_t rho for given kernel values.
template <typename Scalar>
Scalar huisken_expression(const KernelValues<Scalar>& k, const Vec<Scalar>& w) {
  const Index m = w.size();
  const Scalar wd = w.dot(k.gradient);
  const Mat<Scalar> proj = Mat<Scalar>::Identity(m, m) - w * w.transpose();
  // (wd / value) * wd avoids underflow of wd^2 far from the pole.
  return (wd / k.value) * wd + proj.cwiseProduct(k.hessian).sum() + k.time_derivative;
}

/// Vanishes identically for the untruncated kernel.
template <typename Scalar>
Scalar huisken_identity_residual(const KernelSpec& spec, const Vec<Scalar>& X, Scalar t,
                                 const Vec<Scalar>& w) {
  return huisken_expression(eval_rho<Scalar>(spec, X, t), w);
}

/// The same expression for the reflected kernel, divided by rho~ (evaluated
/// in closed form so it stays finite where rho~ underflows).
template <typename Scalar>
Scalar reflected_expression_ratio(const KernelSpec& spec, const Domain& domain,
                                  const Vec<Scalar>& X, Scalar t, const Vec<Scalar>& w) {
  const Scalar tau = detail::time_gap(spec, t);
  const auto rd = detail::reflected_distance<Scalar>(spec, domain, X);
  const Index m = w.size();
  const Mat<Scalar> proj = Mat<Scalar>::Identity(m, m) - w * w.transpose();
  const int n = domain.dim();
  return rd.gradient.squaredNorm() / (Scalar(16) * tau * tau) -
         proj.cwiseProduct(rd.hessian).sum() / (Scalar(4) * tau) +
         Scalar(n) / (Scalar(2) * tau) - rd.phi / (Scalar(4) * tau * tau);
}

/// LHS - c8 (|X~-Y|/(s-t) + |X~-Y|^3/(s-t)^2) rho~ for the reflected kernel.
template <typename Scalar>
Scalar reflected_inequality_margin(const KernelSpec& spec, const Domain& domain,
                                   const Vec<Scalar>& X, Scalar t, const Vec<Scalar>& w, Scalar c8) {
  using std::sqrt;
  const Scalar tau = detail::time_gap(spec, t);
  const auto k = eval_rho_tilde<Scalar>(spec, domain, X, t);
  const auto rd = detail::reflected_distance<Scalar>(spec, domain, X);
  const Scalar z = sqrt(rd.phi);
  return huisken_expression(k, w) - c8 * (z / tau + z * z * z / (tau * tau)) * k.value;
}

/// Smallest c8 >= 0 making the margin nonpositive at one sample.
template <typename Scalar>
Scalar reflected_inequality_constant(const KernelSpec& spec, const Domain& domain,
                                     const Vec<Scalar>& X, Scalar t, const Vec<Scalar>& w) {
  using std::sqrt;
  const Scalar tau = detail::time_gap(spec, t);
  const Scalar ratio = reflected_expression_ratio<Scalar>(spec, domain, X, t, w);
  if (ratio <= Scalar(0)) return Scalar(0);
  const auto rd = detail::reflected_distance<Scalar>(spec, domain, X);
  const Scalar z = sqrt(rd.phi);
  const Scalar scale = z / tau + z * z * z / (tau * tau);
  if (scale == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
  return ratio / scale;
}

}  // namespace gmcf
