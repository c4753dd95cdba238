#include "gmcf/transport.hpp"

#include <cmath>

namespace gmcf {

TransportField TransportField::zero(int dim) {
  return TransportField("zero", dim, [dim](const Vecd&, double, double) {
    return Vecd::Zero(dim + 1).eval();
  }, 0.0);
}

TransportField TransportField::constant_vertical(int dim, double c) {
  return TransportField("constant_vertical", dim, [dim, c](const Vecd&, double, double) {
    Vecd f = Vecd::Zero(dim + 1);
    f(dim) = c;
    return f;
  }, std::abs(c));
}

TransportField TransportField::smooth_bounded(int dim, double amplitude) {
  return TransportField("smooth_bounded", dim, [dim, amplitude](const Vecd& x, double height, double t) {
    Vecd f = Vecd::Zero(dim + 1);
    f(0) = amplitude * std::cos(x(0) + t);
    f(dim) = amplitude * std::sin(x(0)) * std::cos(height);
    return f;
  }, std::sqrt(2.0) * std::abs(amplitude));
}

}  // namespace gmcf
