#include "gmcf/graph.hpp"

#include <cmath>

namespace gmcf {

Matd GraphQuantities::hessian(Index k) const {
  Matd m(dim, dim);
  if (dim == 1) {
    m(0, 0) = d2u(k, 0);
  } else {
    m << d2u(k, 0), d2u(k, 1), d2u(k, 1), d2u(k, 2);
  }
  return m;
}

Vecd grid_gradient(const GridFunction& phi, Index k) {
  const GridLayout& g = phi.grid();
  const double inv2h = 0.5 / g.spacing;
  Vecd d(g.dim);
  d(0) = (phi[k + 1] - phi[k - 1]) * inv2h;
  if (g.dim == 2) d(1) = (phi[k + g.nx] - phi[k - g.nx]) * inv2h;
  return d;
}

Matd grid_hessian(const GridFunction& phi, Index k) {
  const GridLayout& g = phi.grid();
  const double ih2 = 1.0 / (g.spacing * g.spacing);
  Matd m(g.dim, g.dim);
  m(0, 0) = (phi[k + 1] - 2.0 * phi[k] + phi[k - 1]) * ih2;
  if (g.dim == 2) {
    const Index s = g.nx;
    m(1, 1) = (phi[k + s] - 2.0 * phi[k] + phi[k - s]) * ih2;
    m(0, 1) = 0.25 * (phi[k + s + 1] - phi[k + s - 1] - phi[k - s + 1] + phi[k - s - 1]) * ih2;
    m(1, 0) = m(0, 1);
  }
  return m;
}

GraphQuantities compute_quantities(const GridFunction& u) {
  u.check_finite();
  const GridLayout& g = u.grid();
  const Index size = g.size();
  GraphQuantities q;
  q.dim = g.dim;
  q.du = Eigen::MatrixXd::Zero(size, g.dim);
  q.d2u = Eigen::MatrixXd::Zero(size, 3);
  q.v = Eigen::VectorXd::Ones(size);
  q.h = Eigen::VectorXd::Zero(size);
  q.a2 = Eigen::VectorXd::Zero(size);
  q.normal = Eigen::MatrixXd::Zero(size, g.dim + 1);
  q.normal.col(g.dim).setOnes();
  for (Index k = 0; k < size; ++k) {
    if (!g.full_stencil[static_cast<std::size_t>(k)]) continue;
    const Vecd du = grid_gradient(u, k);
    const Matd d2u = grid_hessian(u, k);
    const SurfaceGeometry<double> s = surface_geometry<double>(du, d2u);
    q.du.row(k) = du.transpose();
    q.d2u(k, 0) = d2u(0, 0);
    if (g.dim == 2) {
      q.d2u(k, 1) = d2u(0, 1);
      q.d2u(k, 2) = d2u(1, 1);
    }
    q.v[k] = s.v;
    q.h[k] = s.h;
    q.a2[k] = s.a2;
    q.normal.row(k) = s.normal.transpose();
  }
  return q;
}

namespace {

// Flux v g^{a j} d_j phi through the face between k and k + e_axis.
double face_flux(const GridFunction& u, const GridFunction& phi, Index k, int axis) {
  const GridLayout& g = u.grid();
  const double h = g.spacing;
  const Index along = axis == 0 ? 1 : g.nx;
  const Index k2 = k + along;
  if (g.dim == 1) {
    const double ux = (u[k2] - u[k]) / h;
    const double px = (phi[k2] - phi[k]) / h;
    return px / std::sqrt(1.0 + ux * ux);
  }
  const Index across = axis == 0 ? g.nx : 1;
  Eigen::Vector2d du, dphi;
  du(axis) = (u[k2] - u[k]) / h;
  dphi(axis) = (phi[k2] - phi[k]) / h;
  du(1 - axis) = (u[k + across] - u[k - across] + u[k2 + across] - u[k2 - across]) / (4.0 * h);
  dphi(1 - axis) = (phi[k + across] - phi[k - across] + phi[k2 + across] - phi[k2 - across]) / (4.0 * h);
  const double v2 = 1.0 + du.squaredNorm();
  // v g^{a j} d_j phi = v dphi_a - du_a (du . dphi) / v
  const double v = std::sqrt(v2);
  return v * dphi(axis) - du(axis) * du.dot(dphi) / v;
}

}  // namespace

GridFunction laplace_beltrami(const GridFunction& u, const GridFunction& phi) {
  if (!u.domain().same_grid(phi.domain())) fail(ErrorCode::GridMismatch, "fields live on different grids");
  const GridLayout& g = u.grid();
  const double h = g.spacing;
  GridFunction out(u.domain(), u.time());
  for (const Index k : g.active) {
    double div = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
      const Index step = axis == 0 ? 1 : g.nx;
      div += (face_flux(u, phi, k, axis) - face_flux(u, phi, k - step, axis)) / h;
    }
    const Vecd du = grid_gradient(u, k);
    out[k] = div / std::sqrt(1.0 + du.squaredNorm());
  }
  return out;
}

Eigen::MatrixXd tangential_gradient(const GridFunction& u, const GridFunction& phi) {
  if (!u.domain().same_grid(phi.domain())) fail(ErrorCode::GridMismatch, "fields live on different grids");
  const GraphQuantities q = compute_quantities(u);
  const GridLayout& g = u.grid();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.size(), g.dim + 1);
  for (Index k = 0; k < g.size(); ++k) {
    if (!g.full_stencil[static_cast<std::size_t>(k)]) continue;
    Vecd ambient = Vecd::Zero(g.dim + 1);
    ambient.head(g.dim) = grid_gradient(phi, k);
    out.row(k) = tangential_gradient(ambient, q.unit_normal(k)).transpose();
  }
  return out;
}

double surface_integral(const GridFunction& u, const Eigen::VectorXd& integrand) {
  const GridLayout& g = u.grid();
  if (integrand.size() != g.size()) fail(ErrorCode::GridMismatch, "integrand size does not match the grid");
  double sum = 0.0;
  if (g.dim == 1) {
    const double h = g.spacing;
    for (std::size_t a = 0; a + 1 < g.active.size(); ++a) {
      const Index k = g.active[a];
      const double du = u[k + 1] - u[k];
      sum += 0.5 * (integrand[k] + integrand[k + 1]) * std::sqrt(h * h + du * du);
    }
    return sum;
  }
  for (Index k = 0; k < g.size(); ++k) {
    const double w = g.quadrature_weight[static_cast<std::size_t>(k)];
    if (w == 0.0) continue;
    const Vecd du = grid_gradient(u, k);
    sum += w * integrand[k] * std::sqrt(1.0 + du.squaredNorm());
  }
  return sum;
}

double surface_area(const GridFunction& u) {
  return surface_integral(u, Eigen::VectorXd::Ones(u.grid().size()));
}

}  // namespace gmcf
