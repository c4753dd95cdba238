#include "gmcf/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gmcf {

namespace {

constexpr int kPad = 5;
// Depths (in grid spacings) of the two interior samples that feed the
// quadratic normal extrapolation on the disk. 2.5h keeps every node of the
// biquadratic interpolation stencil inside the disk.
constexpr double kSampleDepth1 = 2.5;
constexpr double kSampleDepth2 = 3.5;
// Ghost band thickness outside the disk, in grid spacings.
constexpr double kGhostBand = 4.0;

std::array<double, 3> lagrange3(double t) {
  return {0.5 * t * (t - 1.0), (1.0 - t) * (1.0 + t), 0.5 * t * (t + 1.0)};
}

// Biquadratic interpolation weights at p; returns the centre node and the 9
// (node, weight) pairs.
Index biquadratic(const GridLayout& g, double px, double py,
                  std::vector<std::pair<Index, double>>& out) {
  const auto i0 = static_cast<Index>(std::lround((px - g.origin_x) / g.spacing));
  const auto j0 = static_cast<Index>(std::lround((py - g.origin_y) / g.spacing));
  const double tx = (px - (g.origin_x + static_cast<double>(i0) * g.spacing)) / g.spacing;
  const double ty = (py - (g.origin_y + static_cast<double>(j0) * g.spacing)) / g.spacing;
  const auto wx = lagrange3(tx);
  const auto wy = lagrange3(ty);
  out.clear();
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) {
      const Index k = g.index(i0 + di, j0 + dj);
      if (g.kind[static_cast<std::size_t>(k)] != NodeKind::Active) {
        fail(ErrorCode::GridMismatch, "disk too coarse for ghost extrapolation");
      }
      out.emplace_back(k, wx[static_cast<std::size_t>(di + 1)] * wy[static_cast<std::size_t>(dj + 1)]);
    }
  }
  return g.index(i0, j0);
}

void finish_layout(GridLayout& g) {
  g.active_number.assign(static_cast<std::size_t>(g.size()), -1);
  for (std::size_t a = 0; a < g.active.size(); ++a) {
    g.active_number[static_cast<std::size_t>(g.active[a])] = static_cast<Index>(a);
  }
  g.full_stencil.assign(static_cast<std::size_t>(g.size()), 0);
  for (Index k = 0; k < g.size(); ++k) {
    const Index i = g.logical_i(k);
    const Index j = g.logical_j(k);
    const Index lo_i = -g.pad, hi_i = g.nx - g.pad - 1;
    if (i <= lo_i || i >= hi_i) continue;
    if (g.dim == 2) {
      const Index hi_j = g.ny - g.pad - 1;
      if (j <= lo_i || j >= hi_j) continue;
    }
    bool ok = true;
    const int jr = g.dim == 2 ? 1 : 0;
    for (int dj = -jr; dj <= jr && ok; ++dj) {
      for (int di = -1; di <= 1 && ok; ++di) {
        ok = g.usable(g.index(i + di, j + dj));
      }
    }
    g.full_stencil[static_cast<std::size_t>(k)] = ok ? 1 : 0;
  }
}

}  // namespace

Domain Domain::interval(double a, double b, int nodes, std::optional<double> cutoff_radius) {
  if (!(b > a)) fail(ErrorCode::ConfigInvalid, "interval requires a < b");
  if (nodes < 2 * kPad) fail(ErrorCode::ConfigInvalid, "interval needs at least 10 nodes");
  const double r_cfg = cutoff_radius.value_or(0.5 * (b - a));
  if (!(r_cfg > 0.0) || !std::isfinite(r_cfg)) {
    fail(ErrorCode::ConfigInvalid, "cutoff radius must be positive and finite");
  }
  Domain d;
  d.kind_ = DomainKind::Interval;
  d.a_ = a;
  d.b_ = b;
  d.curvature_radius_ = r_cfg;
  d.build_grid(nodes);
  return d;
}

Domain Domain::disk(double radius, int nodes_per_axis) {
  if (!(radius > 0.0)) fail(ErrorCode::ConfigInvalid, "disk radius must be positive");
  if (nodes_per_axis < 16) fail(ErrorCode::ConfigInvalid, "disk needs at least 16 nodes per axis");
  Domain d;
  d.kind_ = DomainKind::Disk;
  d.radius_ = radius;
  d.a_ = -radius;
  d.b_ = radius;
  d.curvature_radius_ = radius;
  d.build_grid(nodes_per_axis);
  return d;
}

void Domain::build_grid(int nodes) {
  auto g = std::make_shared<GridLayout>();
  g->dim = dim();
  g->nodes_per_axis = nodes;
  g->pad = kPad;
  g->nx = nodes + 2 * kPad;
  g->ny = dim() == 2 ? g->nx : 1;
  g->spacing = (b_ - a_) / static_cast<double>(nodes - 1);
  g->origin_x = a_;
  g->origin_y = dim() == 2 ? a_ : 0.0;
  const double h = g->spacing;
  g->kind.assign(static_cast<std::size_t>(g->size()), NodeKind::Unused);
  g->quadrature_weight.assign(static_cast<std::size_t>(g->size()), 0.0);

  if (kind_ == DomainKind::Interval) {
    for (Index k = 0; k < g->size(); ++k) {
      const Index i = g->logical_i(k);
      if (i >= 0 && i < nodes) {
        g->kind[static_cast<std::size_t>(k)] = NodeKind::Active;
        g->active.push_back(k);
        g->quadrature_weight[static_cast<std::size_t>(k)] = (i == 0 || i == nodes - 1) ? 0.5 * h : h;
      } else {
        // Even reflection about the nearest endpoint node.
        g->kind[static_cast<std::size_t>(k)] = NodeKind::Ghost;
        const Index mirror = i < 0 ? -i : 2 * (nodes - 1) - i;
        g->ghosts.push_back(GhostRule{k, g->index(mirror), {}});
      }
    }
    finish_layout(*g);
    grid_ = std::move(g);
    return;
  }

  const double r = radius_;
  const double inside_tol = 1e-12 * r;
  for (Index k = 0; k < g->size(); ++k) {
    const double rho = std::hypot(g->x(k), g->y(k));
    if (rho <= r + inside_tol) {
      g->kind[static_cast<std::size_t>(k)] = NodeKind::Active;
      g->active.push_back(k);
    } else if (rho - r <= kGhostBand * h * (1.0 + 1e-12)) {
      g->kind[static_cast<std::size_t>(k)] = NodeKind::Ghost;
    }
  }

  // Quadratic extrapolation along the normal with zero slope at the boundary:
  // p(s) = c0 + c2 s^2, fitted to interpolated values at depths s1, s2.
  std::vector<std::pair<Index, double>> w1, w2;
  const double s1 = kSampleDepth1 * h;
  const double s2 = kSampleDepth2 * h;
  for (Index k = 0; k < g->size(); ++k) {
    if (g->kind[static_cast<std::size_t>(k)] != NodeKind::Ghost) continue;
    const double gx = g->x(k), gy = g->y(k);
    const double rho = std::hypot(gx, gy);
    const double nx = gx / rho, ny = gy / rho;
    const double d = rho - r;
    const Index anchor = biquadratic(*g, (r - s1) * nx, (r - s1) * ny, w1);
    biquadratic(*g, (r - s2) * nx, (r - s2) * ny, w2);
    const double beta = (d * d - s1 * s1) / (s1 * s1 - s2 * s2);
    GhostRule rule{k, anchor, {}};
    for (const auto& [node, w] : w1) rule.terms.emplace_back(node, (1.0 + beta) * w);
    for (const auto& [node, w] : w2) rule.terms.emplace_back(node, -beta * w);
    g->ghosts.push_back(std::move(rule));
  }

  // Dual-cell areas clipped to the disk; slivers whose nearest node is not
  // active are lumped onto the nearest active node.
  constexpr int kSub = 16;
  for (Index k = 0; k < g->size(); ++k) {
    if (!g->usable(k)) continue;
    const double cx = g->x(k), cy = g->y(k);
    if (std::hypot(cx, cy) + h * std::numbers::sqrt2 / 2.0 <= r) {
      g->quadrature_weight[static_cast<std::size_t>(k)] += h * h;
      continue;
    }
    const double cell = h * h / (kSub * kSub);
    for (int sj = 0; sj < kSub; ++sj) {
      for (int si = 0; si < kSub; ++si) {
        const double px = cx + h * ((si + 0.5) / kSub - 0.5);
        const double py = cy + h * ((sj + 0.5) / kSub - 0.5);
        if (std::hypot(px, py) > r) continue;
        Index target = k;
        if (g->kind[static_cast<std::size_t>(k)] != NodeKind::Active) {
          double best = std::numeric_limits<double>::infinity();
          const Index i = g->logical_i(k), j = g->logical_j(k);
          for (int dj = -2; dj <= 2; ++dj) {
            for (int di = -2; di <= 2; ++di) {
              const Index m = g->index(i + di, j + dj);
              if (g->kind[static_cast<std::size_t>(m)] != NodeKind::Active) continue;
              const double dist = std::hypot(g->x(m) - px, g->y(m) - py);
              if (dist < best) {
                best = dist;
                target = m;
              }
            }
          }
        }
        g->quadrature_weight[static_cast<std::size_t>(target)] += cell;
      }
    }
  }
  finish_layout(*g);
  grid_ = std::move(g);
}

double Domain::measure() const {
  if (kind_ == DomainKind::Interval) return b_ - a_;
  return std::numbers::pi * radius_ * radius_;
}

Vecd Domain::node_position(Index k) const {
  if (dim() == 1) return Vecd::Constant(1, grid_->x(k));
  Vecd p(2);
  p << grid_->x(k), grid_->y(k);
  return p;
}

bool Domain::contains(const Vecd& x) const {
  if (kind_ == DomainKind::Interval) {
    const double tol = 1e-12 * (b_ - a_);
    return x(0) >= a_ - tol && x(0) <= b_ + tol;
  }
  return x.norm() <= radius_ * (1.0 + 1e-12);
}

double Domain::depth(const Vecd& x) const {
  if (kind_ == DomainKind::Interval) return std::max(0.0, std::min(x(0) - a_, b_ - x(0)));
  return std::max(0.0, radius_ - x.norm());
}

std::vector<std::pair<Vecd, Vecd>> Domain::boundary_samples(int count) const {
  std::vector<std::pair<Vecd, Vecd>> out;
  if (kind_ == DomainKind::Interval) {
    out.emplace_back(Vecd::Constant(1, a_), Vecd::Constant(1, -1.0));
    out.emplace_back(Vecd::Constant(1, b_), Vecd::Constant(1, 1.0));
    return out;
  }
  for (int m = 0; m < count; ++m) {
    const double theta = 2.0 * std::numbers::pi * (m + 0.5) / count;
    Vecd nu(2);
    nu << std::cos(theta), std::sin(theta);
    out.emplace_back(radius_ * nu, nu);
  }
  return out;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PointTooDeep: return "PointTooDeep";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::TimeOrderViolation: return "TimeOrderViolation";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::PicardDivergence: return "PicardDivergence";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::EmptyInterval: return "EmptyInterval";
    case ErrorCode::PoleNotCovered: return "PoleNotCovered";
    case ErrorCode::InsufficientSnapshots: return "InsufficientSnapshots";
    case ErrorCode::TimeAtSingularity: return "TimeAtSingularity";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace gmcf
