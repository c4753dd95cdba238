#pragma once

#include <functional>
#include <optional>
#include <string>

#include "gmcf/types.hpp"

namespace gmcf {

/// Ambient vector field f(x, x_{n+1}, t) in R^{n+1}.
class TransportField {
 public:
  using Evaluator = std::function<Vecd(const Vecd& x, double height, double t)>;

  TransportField(std::string tag, int dim, Evaluator fn, std::optional<double> sup_bound = std::nullopt)
      : tag_(std::move(tag)), dim_(dim), fn_(std::move(fn)), sup_bound_(sup_bound) {}

  static TransportField zero(int dim);
  /// f = (0, ..., 0, c).
  static TransportField constant_vertical(int dim, double c);
  /// f = (0, ..., 0, amplitude * sin(x_1) cos(x_{n+1}) ) plus a horizontal
  /// component amplitude * cos(x_1 + t) e_1; smooth and bounded by
  /// sqrt(2) * amplitude.
  static TransportField smooth_bounded(int dim, double amplitude);

  Vecd operator()(const Vecd& x, double height, double t) const { return fn_(x, height, t); }

  const std::string& tag() const { return tag_; }
  int dim() const { return dim_; }
  /// Known bound on sup |f|, if the field carries one.
  std::optional<double> sup_bound() const { return sup_bound_; }
  bool is_zero() const { return tag_ == "zero"; }

 private:
  std::string tag_;
  int dim_ = 1;
  Evaluator fn_;
  std::optional<double> sup_bound_;
};

}  // namespace gmcf
