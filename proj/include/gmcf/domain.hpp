#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "gmcf/errors.hpp"
#include "gmcf/types.hpp"

namespace gmcf {

enum class DomainKind { Interval, Disk };

enum class NodeKind : unsigned char { Active, Ghost, Unused };

/// Ghost value = u[anchor] + sum_k weight_k * (u[node_k] - u[anchor]).
/// The anchored form reproduces constants exactly in floating point.
struct GhostRule {
  Index node = -1;
  Index anchor = -1;
  std::vector<std::pair<Index, double>> terms;
};

/// Uniform Cartesian grid covering the bounding box of the domain, padded
/// with ghost layers. Storage is flat with x fastest; 1-D grids have one row.
struct GridLayout {
  int dim = 1;
  int nodes_per_axis = 0;
  int pad = 0;
  Index nx = 0;  // padded extent along x
  Index ny = 1;  // padded extent along y (1 for intervals)
  double spacing = 0.0;
  double origin_x = 0.0;  // coordinate of logical node (0, 0)
  double origin_y = 0.0;

  std::vector<NodeKind> kind;
  std::vector<Index> active;          // storage indices of active nodes
  std::vector<Index> active_number;   // storage index -> position in `active`, or -1
  std::vector<GhostRule> ghosts;
  std::vector<unsigned char> full_stencil;  // node and its 3^n neighbours all usable
  std::vector<double> quadrature_weight;    // midpoint/trapezoid weights on active nodes

  Index size() const { return nx * ny; }
  Index stride_y() const { return dim == 2 ? nx : 0; }
  Index index(Index i, Index j = 0) const {
    return (i + pad) + (dim == 2 ? (j + pad) * nx : 0);
  }
  Index logical_i(Index k) const { return k % nx - pad; }
  Index logical_j(Index k) const { return dim == 2 ? k / nx - pad : 0; }
  double x(Index k) const { return origin_x + static_cast<double>(logical_i(k)) * spacing; }
  double y(Index k) const { return origin_y + static_cast<double>(logical_j(k)) * spacing; }
  bool usable(Index k) const { return kind[static_cast<std::size_t>(k)] != NodeKind::Unused; }
};

/// Convex base domain: an interval (n = 1) or a disk centred at the origin
/// (n = 2). Immutable; copies share the grid layout.
class Domain {
 public:
  /// `cutoff_radius` is the finite surrogate for the boundary curvature radius
  /// of an interval (default (b - a) / 2).
  static Domain interval(double a, double b, int nodes,
                         std::optional<double> cutoff_radius = std::nullopt);
  static Domain disk(double radius, int nodes_per_axis);

  DomainKind kind() const { return kind_; }
  int dim() const { return kind_ == DomainKind::Interval ? 1 : 2; }
  double lower() const { return a_; }
  double upper() const { return b_; }
  double radius() const { return radius_; }
  /// R: reciprocal of the largest principal curvature of the boundary.
  double curvature_radius() const { return curvature_radius_; }
  double spacing() const { return grid_->spacing; }
  double measure() const;

  const GridLayout& grid() const { return *grid_; }
  bool same_grid(const Domain& other) const { return grid_ == other.grid_; }

  Vecd node_position(Index k) const;
  bool contains(const Vecd& x) const;
  /// Distance to the boundary for points of the closed domain.
  double depth(const Vecd& x) const;
  /// Boundary sample points with outward normals; the interval returns its two
  /// endpoints, the disk `count` equally spaced points.
  std::vector<std::pair<Vecd, Vecd>> boundary_samples(int count) const;

 private:
  Domain() = default;
  void build_grid(int nodes);

  DomainKind kind_ = DomainKind::Interval;
  double a_ = 0.0;
  double b_ = 1.0;
  double radius_ = 0.0;
  double curvature_radius_ = 0.0;
  std::shared_ptr<const GridLayout> grid_;
};

template <typename Scalar>
struct BoundaryPoint {
  Vec<Scalar> position;
  Vec<Scalar> normal;
  /// B(w, w) = w^T B w on tangent vectors; nonpositive for convex domains.
  Mat<Scalar> second_fundamental_form;
};

template <typename Scalar>
struct ReflectionData {
  Vec<Scalar> point;
  Vec<Scalar> projection;
  Vec<Scalar> reflected;
  Vec<Scalar> normal;
  Scalar distance{};
  /// Q = D(zeta) - (I - nu (x) nu).
  Mat<Scalar> q;
  /// (i, j) entry is d_j nu_i, with nu evaluated at zeta(x).
  Mat<Scalar> normal_jacobian;
  /// q_derivative[j](i, k) = d_j q_ik.
  std::array<Mat<Scalar>, 2> q_derivative;
};

namespace detail {

template <typename Scalar>
void check_tube(const Domain& domain, Scalar depth) {
  if (!(static_cast<double>(depth) < 0.5 * domain.curvature_radius())) {
    fail(ErrorCode::PointTooDeep,
         "point lies outside the tube N_{R/2} where the projection is unique");
  }
}

}  // namespace detail

/// Nearest boundary point with its outward normal and second fundamental form.
template <typename Scalar>
BoundaryPoint<Scalar> project_to_boundary(const Domain& domain, const Vec<Scalar>& x) {
  using std::sqrt;
  if (x.size() != domain.dim()) fail(ErrorCode::GridMismatch, "point dimension mismatch");
  BoundaryPoint<Scalar> out;
  if (domain.kind() == DomainKind::Interval) {
    const Scalar a = static_cast<Scalar>(domain.lower());
    const Scalar b = static_cast<Scalar>(domain.upper());
    const Scalar tol = static_cast<Scalar>(1e-12 * (domain.upper() - domain.lower()));
    if (x(0) < a - tol || x(0) > b + tol) fail(ErrorCode::OutsideDomain, "point outside the interval");
    const Scalar left = x(0) - a;
    const Scalar right = b - x(0);
    detail::check_tube(domain, left < right ? left : right);
    if (left == right) fail(ErrorCode::PointTooDeep, "midpoint has two nearest endpoints");
    out.position = Vec<Scalar>::Constant(1, left < right ? a : b);
    out.normal = Vec<Scalar>::Constant(1, left < right ? Scalar(-1) : Scalar(1));
    out.second_fundamental_form = Mat<Scalar>::Zero(1, 1);
    return out;
  }
  const Scalar r = static_cast<Scalar>(domain.radius());
  const Scalar rho = x.norm();
  if (rho > r * static_cast<Scalar>(1.0 + 1e-12)) fail(ErrorCode::OutsideDomain, "point outside the disk");
  detail::check_tube(domain, r - rho > Scalar(0) ? r - rho : Scalar(0));
  const Vec<Scalar> nu = x / rho;
  out.position = r * nu;
  out.normal = nu;
  out.second_fundamental_form =
      -(Mat<Scalar>::Identity(2, 2) - nu * nu.transpose()) / r;
  return out;
}

/// Reflection x~ = 2 zeta(x) - x together with Q and its first derivatives.
template <typename Scalar>
ReflectionData<Scalar> reflect(const Domain& domain, const Vec<Scalar>& x) {
  const BoundaryPoint<Scalar> bp = project_to_boundary(domain, x);
  const Index n = x.size();
  ReflectionData<Scalar> out;
  out.point = x;
  out.projection = bp.position;
  out.normal = bp.normal;
  out.reflected = Scalar(2) * bp.position - x;
  out.distance = (x - bp.position).norm();
  out.q = Mat<Scalar>::Zero(n, n);
  out.normal_jacobian = Mat<Scalar>::Zero(n, n);
  out.q_derivative = {Mat<Scalar>::Zero(n, n), Mat<Scalar>::Zero(n, n)};
  if (domain.kind() == DomainKind::Interval) return out;

  // Disk: zeta = r x / |x|, D zeta = (r / |x|)(I - xh xh^T).
  const Scalar r = static_cast<Scalar>(domain.radius());
  const Scalar rho = x.norm();
  const Vec<Scalar> xh = x / rho;
  const Mat<Scalar> tangent = Mat<Scalar>::Identity(n, n) - xh * xh.transpose();
  const Scalar c = r / rho - Scalar(1);
  out.q = c * tangent;
  out.normal_jacobian = tangent / rho;
  for (Index j = 0; j < n; ++j) {
    Mat<Scalar> d = Mat<Scalar>::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < n; ++k) {
        const Scalar d_xixk = (tangent(i, j) * xh(k) + xh(i) * tangent(k, j)) / rho;
        d(i, k) = -r * x(j) / (rho * rho * rho) * tangent(i, k) - c * d_xixk;
      }
    }
    out.q_derivative[static_cast<std::size_t>(j)] = d;
  }
  return out;
}

}  // namespace gmcf
