#pragma once

#include <functional>

#include <Eigen/Core>

#include "gmcf/domain.hpp"

namespace gmcf {

/// Scalar field on a domain's padded grid at one time level. Ghost entries
/// are derived data; call close() after writing active values.
class GridFunction {
 public:
  explicit GridFunction(Domain domain, double t = 0.0);

  /// Samples `fn` at active nodes and closes the ghost layer.
  static GridFunction sample(const Domain& domain, const std::function<double(const Vecd&)>& fn,
                             double t = 0.0);
  /// Builds from values at active nodes, ordered as Domain::grid().active.
  static GridFunction from_active(const Domain& domain, const Eigen::VectorXd& active, double t);

  const Domain& domain() const { return domain_; }
  const GridLayout& grid() const { return domain_.grid(); }
  double time() const { return t_; }
  void set_time(double t) { t_ = t; }

  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](Index k) const { return values_[k]; }
  double& operator[](Index k) { return values_[k]; }

  Eigen::VectorXd active_values() const;
  void set_active_values(const Eigen::VectorXd& active);

  /// Fills ghost nodes so that the discrete normal derivative vanishes.
  void close();
  /// Throws NonFiniteInput if any active value is not finite.
  void check_finite() const;

  double sup_abs() const;
  double max_value() const;
  double min_value() const;

 private:
  Domain domain_;
  double t_ = 0.0;
  Eigen::VectorXd values_;
};

}  // namespace gmcf
