#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <string>

namespace holocycle {

using Rational = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

struct Vec2 {
  double x = 0.0, y = 0.0;
};

struct RatVec2 {
  Rational x, y;
};

/// 2x2 integer matrix acting on the torus (|det| must be 1 for invertibility).
struct Mat2i {
  long long a = 1, b = 0, c = 0, d = 1;  // [[a,b],[c,d]]
  long long det() const { return a * d - b * c; }
  long long trace() const { return a + d; }
  Mat2i operator*(const Mat2i& o) const;
  Mat2i inverse_unimodular() const;  // requires |det| == 1
  static Mat2i identity() { return {}; }
  Mat2i power(int n) const;  // n may be negative when |det| == 1
};

Rational frac_rational(const Rational& q);          // q - floor(q), in [0,1)
Rational rational_from_double(double v);            // exact (doubles are dyadic)
double to_double(const Rational& q);
RatVec2 reduce_mod1(const RatVec2& v);
bool rat_eq(const RatVec2& a, const RatVec2& b);

/// Point of the torus written as p + a e_s + b e_u with exact rational p and
/// float coefficients along the (unit) stable/unstable eigenvectors of the
/// acting matrix.  Leaf pairs built over a common frame keep their difference
/// exactly on the leaf, so deep forward/backward orbits of the pair stay
/// numerically meaningful.
struct TorusPoint {
  RatVec2 p;          // exact part, reduced to [0,1)^2
  double a = 0.0;     // stable coefficient
  double b = 0.0;     // unstable coefficient
  Vec2 view;          // p + a e_s + b e_u mod 1, maintained by ToralSystem

  bool is_rational() const { return a == 0.0 && b == 0.0; }
  std::string to_string() const;
};

}  // namespace holocycle
