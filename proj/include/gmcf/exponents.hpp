#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace gmcf {

using Rational = boost::rational<std::int64_t>;

/// Parses "3", "-2/5" or a finite decimal such as "1.25" exactly.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

/// Integrability exponent in [1, infinity].
class Exponent {
 public:
  static Exponent finite(Rational value);
  static Exponent infinity();
  /// "inf" / "infinity" or a rational literal >= 1.
  static Exponent parse(const std::string& text);

  bool is_infinite() const { return infinite_; }
  Rational value() const { return value_; }
  /// 1/p, zero for p = infinity.
  Rational reciprocal() const { return infinite_ ? Rational(0) : Rational(1) / value_; }
  double to_double() const;
  std::string str() const { return infinite_ ? "inf" : to_string(value_); }

 private:
  bool infinite_ = false;
  Rational value_{1};
};

/// (p, q) of the iterated L^q_t L^p_x norm in space dimension n.
struct NormExponents {
  int n = 1;
  Exponent p = Exponent::infinity();
  Exponent q = Exponent::infinity();

  /// gamma = 1 - n/p - 2/q; positive exactly in the regime of the gradient
  /// bound, negative in the self-similar blow-up regime.
  Rational gap() const { return Rational(1) - Rational(n) * p.reciprocal() - Rational(2) * q.reciprocal(); }
  bool subcritical() const { return gap() > Rational(0); }
};

/// eps0 = n/p + 2/q - 1 and alpha0 = 1/2 - (eps0/4) / (3 + 2/p).
struct BlowupParameters {
  NormExponents exps;

  Rational eps0() const { return -exps.gap(); }
  Rational alpha0() const {
    return Rational(1, 2) - (eps0() / Rational(4)) / (Rational(3) + Rational(2) * exps.p.reciprocal());
  }
  /// The self-similar transport norm is finite for alpha above this value.
  Rational integrability_threshold() const {
    return Rational(1, 2) - (eps0() / Rational(2)) / (Rational(3) + Rational(2) * exps.p.reciprocal());
  }
};

}  // namespace gmcf
