#pragma once

#include <cmath>

#include <Eigen/Core>

#include "gmcf/grid_function.hpp"

namespace gmcf {

/// Pointwise geometry of the graph x_{n+1} = u(x) from du and d^2u.
template <typename Scalar>
struct SurfaceGeometry {
  Scalar v{};
  Scalar h{};
  Scalar a2{};
  Vec<Scalar> normal;
  /// Inverse metric g^{ij} = delta_ij - u_i u_j / v^2.
  Mat<Scalar> inverse_metric;
};

template <typename Scalar>
SurfaceGeometry<Scalar> surface_geometry(const Vec<Scalar>& du, const Mat<Scalar>& d2u) {
  using std::sqrt;
  const Index n = du.size();
  SurfaceGeometry<Scalar> g;
  g.v = sqrt(Scalar(1) + du.squaredNorm());
  g.inverse_metric = Mat<Scalar>::Identity(n, n) - du * du.transpose() / (g.v * g.v);
  g.h = -(g.inverse_metric.cwiseProduct(d2u)).sum() / g.v;
  const Mat<Scalar> m = g.inverse_metric * d2u;
  // g^{ik} g^{jl} u_ij u_kl = tr(G U G U) for symmetric G, U.
  g.a2 = (m * m).trace() / (g.v * g.v);
  g.normal.resize(n + 1);
  g.normal.head(n) = -du / g.v;
  g.normal(n) = Scalar(1) / g.v;
  return g;
}

/// Node-wise graph quantities on the full padded storage. Entries are
/// meaningful where GridLayout::full_stencil is set (every active node).
struct GraphQuantities {
  int dim = 1;
  Eigen::MatrixXd du;       // one row per node, dim columns
  Eigen::MatrixXd d2u;      // columns: u_xx, u_xy, u_yy
  Eigen::VectorXd v;
  Eigen::VectorXd h;
  Eigen::VectorXd a2;
  Eigen::MatrixXd normal;   // dim + 1 columns

  Vecd gradient(Index k) const { return du.row(k).transpose(); }
  Matd hessian(Index k) const;
  Vecd unit_normal(Index k) const { return normal.row(k).transpose(); }
};

GraphQuantities compute_quantities(const GridFunction& u);

/// Centred first differences of phi at node k.
Vecd grid_gradient(const GridFunction& phi, Index k);
/// Centred second differences (4-point stencil for the mixed term).
Matd grid_hessian(const GridFunction& phi, Index k);

/// (1/v) sum_i d_i (v g^{ij} d_j phi) in flux form, at active nodes.
/// Ghost entries of the result are zero.
GridFunction laplace_beltrami(const GridFunction& u, const GridFunction& phi);

/// D_Gamma phi = D phi - (D phi . n) n for an ambient gradient D phi.
inline Vecd tangential_gradient(const Vecd& ambient_gradient, const Vecd& normal) {
  return ambient_gradient - ambient_gradient.dot(normal) * normal;
}

/// Tangential gradient of a field phi(x) that does not depend on x_{n+1};
/// one row per node, n + 1 columns.
Eigen::MatrixXd tangential_gradient(const GridFunction& u, const GridFunction& phi);

/// Integral over the graph of per-node values: int_Omega g v dx. In 1-D the
/// graph is integrated as a polyline (trapezoid in arc length); in 2-D with
/// masked midpoint weights. `integrand` is indexed by storage node.
double surface_integral(const GridFunction& u, const Eigen::VectorXd& integrand);
double surface_area(const GridFunction& u);

}  // namespace gmcf
