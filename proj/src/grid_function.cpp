#include "gmcf/grid_function.hpp"

#include <cmath>

namespace gmcf {

GridFunction::GridFunction(Domain domain, double t)
    : domain_(std::move(domain)), t_(t), values_(Eigen::VectorXd::Zero(domain_.grid().size())) {}

GridFunction GridFunction::sample(const Domain& domain,
                                  const std::function<double(const Vecd&)>& fn, double t) {
  GridFunction u(domain, t);
  for (const Index k : domain.grid().active) u[k] = fn(domain.node_position(k));
  u.close();
  return u;
}

GridFunction GridFunction::from_active(const Domain& domain, const Eigen::VectorXd& active, double t) {
  GridFunction u(domain, t);
  u.set_active_values(active);
  return u;
}

Eigen::VectorXd GridFunction::active_values() const {
  const auto& act = grid().active;
  Eigen::VectorXd out(static_cast<Index>(act.size()));
  for (std::size_t a = 0; a < act.size(); ++a) out[static_cast<Index>(a)] = values_[act[a]];
  return out;
}

void GridFunction::set_active_values(const Eigen::VectorXd& active) {
  const auto& act = grid().active;
  if (active.size() != static_cast<Index>(act.size())) {
    fail(ErrorCode::GridMismatch, "active value count does not match the grid");
  }
  for (std::size_t a = 0; a < act.size(); ++a) values_[act[a]] = active[static_cast<Index>(a)];
  close();
}

void GridFunction::close() {
  for (const GhostRule& rule : grid().ghosts) {
    const double base = values_[rule.anchor];
    double acc = 0.0;
    for (const auto& [node, w] : rule.terms) acc += w * (values_[node] - base);
    values_[rule.node] = base + acc;
  }
}

void GridFunction::check_finite() const {
  for (const Index k : grid().active) {
    if (!std::isfinite(values_[k])) fail(ErrorCode::NonFiniteInput, "grid function has a non-finite value");
  }
}

double GridFunction::sup_abs() const {
  double m = 0.0;
  for (const Index k : grid().active) m = std::max(m, std::abs(values_[k]));
  return m;
}

double GridFunction::max_value() const {
  double m = -INFINITY;
  for (const Index k : grid().active) m = std::max(m, values_[k]);
  return m;
}

double GridFunction::min_value() const {
  double m = INFINITY;
  for (const Index k : grid().active) m = std::min(m, values_[k]);
  return m;
}

}  // namespace gmcf
