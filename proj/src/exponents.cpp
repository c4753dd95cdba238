#include "gmcf/exponents.hpp"

#include <cctype>
#include <limits>

#include "gmcf/errors.hpp"

namespace gmcf {

Rational parse_rational(const std::string& text) {
  const auto bad = [&] { fail(ErrorCode::ConfigInvalid, "not a rational number: '" + text + "'"); };
  if (text.empty()) bad();
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == Rational(0)) bad();
    return parse_rational(text.substr(0, slash)) / den;
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  std::int64_t num = 0, den = 1;
  bool digits = false, point = false;
  constexpr std::int64_t limit = std::numeric_limits<std::int64_t>::max() / 10;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !point) {
      point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c)) || num > limit || den > limit) bad();
    digits = true;
    num = num * 10 + (c - '0');
    if (point) den *= 10;
  }
  if (!digits) bad();
  return Rational(negative ? -num : num, den);
}

std::string to_string(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Exponent Exponent::finite(Rational value) {
  if (value < Rational(1)) fail(ErrorCode::ConfigInvalid, "integrability exponent must be >= 1");
  Exponent e;
  e.value_ = value;
  return e;
}

Exponent Exponent::infinity() {
  Exponent e;
  e.infinite_ = true;
  return e;
}

Exponent Exponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity") return infinity();
  return finite(parse_rational(text));
}

double Exponent::to_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : gmcf::to_double(value_);
}

}  // namespace gmcf
