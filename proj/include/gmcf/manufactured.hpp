#pragma once

#include "gmcf/exponents.hpp"
#include "gmcf/grid_function.hpp"
#include "gmcf/transport.hpp"

namespace gmcf {

/// phi(xi) = A (1 - |xi|^2 / r^2)^4 for |xi| < r, zero outside. C^3.
struct BumpProfile {
  int dim = 1;
  double amplitude = 1.0;
  double radius = 0.5;

  double value(const Vecd& xi) const;
  Vecd gradient(const Vecd& xi) const;
  Matd hessian(const Vecd& xi) const;
  /// max |d phi|, attained at |xi| = r / sqrt(7).
  double sup_gradient() const;
};

struct ExactFields {
  double u = 0.0;
  Vecd du;
  Matd d2u;
  double dt_u = 0.0;
};

/// u(x, t) = (1 - t)^alpha phi(x / sqrt(1 - t)) with the vertical transport
/// f = (0, ..., 0, g) that makes it an exact solution. Every evaluator has a
/// form taking the gap tau = 1 - t directly so that tau far below machine
/// epsilon relative to 1 stays representable.
class SelfSimilarSolution {
 public:
  SelfSimilarSolution(double alpha, BumpProfile profile);

  double alpha() const { return alpha_; }
  const BumpProfile& profile() const { return profile_; }
  int dim() const { return profile_.dim; }

  ExactFields fields_at_gap(const Vecd& x, double tau) const;
  ExactFields exact_fields(const Vecd& x, double t) const;

  /// g = f . (-du, 1).
  double transport_at_gap(const Vecd& x, double tau) const;
  Vecd exact_transport(const Vecd& x, double t) const;
  TransportField transport_field() const;

  /// sup_x |du(x, 1 - tau)| = tau^{alpha - 1/2} sup |d phi|.
  double sup_gradient_at_gap(double tau) const;

  GridFunction sample(const Domain& domain, double t) const;

  /// (int_Omega |g|^p v dx)^{1/p} at gap tau (sup |g| for p = infinity),
  /// integrated in the self-similar variable xi on a midpoint grid with
  /// `cells` cells across the support diameter.
  double inner_norm_at_gap(const Exponent& p, double tau, int cells) const;

 private:
  double alpha_;
  BumpProfile profile_;
};

/// 3 alpha - 2 + n/(2p) + (2 alpha - 1)/p.
double scaling_exponent(const NormExponents& exps, double alpha);

/// Iterated L^q_t L^p_x norm of the exact transport over [0, 1 - delta],
/// integrating the gap on a logarithmic grid with `per_decade` points per
/// decade (p, q finite).
double self_similar_transport_norm(const SelfSimilarSolution& sol, const NormExponents& exps, double delta,
                                   int per_decade, int cells);

}  // namespace gmcf
