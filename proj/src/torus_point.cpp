#include "holocycle/torus_point.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace holocycle {

Mat2i Mat2i::operator*(const Mat2i& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mat2i Mat2i::inverse_unimodular() const {
  const long long dt = det();
  if (dt != 1 && dt != -1)
    throw std::invalid_argument("Mat2i: inverse needs |det| == 1");
  return {d / dt, -b / dt, -c / dt, a / dt};
}

Mat2i Mat2i::power(int n) const {
  Mat2i base = (n >= 0) ? *this : inverse_unimodular();
  int k = (n >= 0) ? n : -n;
  Mat2i acc = Mat2i::identity();
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

Rational frac_rational(const Rational& q) {
  Int n = boost::multiprecision::numerator(q);
  Int d = boost::multiprecision::denominator(q);  // always > 0 for cpp_rational
  Int fl = n / d;
  if (n < 0 && fl * d != n) fl -= 1;
  return q - Rational(fl);
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("rational_from_double: non-finite");
  // doubles are dyadic rationals; the conversion below is exact
  int exp = 0;
  double mant = std::frexp(v, &exp);
  long long im = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(im);
  if (exp > 0)
    r *= Rational(Int(1) << exp);
  else if (exp < 0)
    r /= Rational(Int(1) << (-exp));
  return r;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

RatVec2 reduce_mod1(const RatVec2& v) { return {frac_rational(v.x), frac_rational(v.y)}; }

bool rat_eq(const RatVec2& a, const RatVec2& b) { return a.x == b.x && a.y == b.y; }

std::string TorusPoint::to_string() const {
  std::ostringstream os;
  os.precision(15);
  os << "(" << view.x << "," << view.y << ")";
  return os.str();
}

}  // namespace holocycle
