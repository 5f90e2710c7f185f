#ifndef VBL_JET_HPP
#define VBL_JET_HPP

#include <cmath>

#include "vbl/errors.hpp"

namespace vbl {

// Value of a scalar function together with its first three derivatives at a
// point, propagated through arithmetic by the truncated Taylor (forward-mode)
// rules. Enough for every quantity the library needs: f''' and g'' at most.
struct Jet3 {
  double v0 = 0.0;  // h(u)
  double v1 = 0.0;  // h'(u)
  double v2 = 0.0;  // h''(u)
  double v3 = 0.0;  // h'''(u)

  Jet3() = default;
  Jet3(double v0, double v1, double v2, double v3) : v0(v0), v1(v1), v2(v2), v3(v3) {}

  static Jet3 constant(double c) { return {c, 0.0, 0.0, 0.0}; }
  // The independent variable u itself.
  static Jet3 variable(double u) { return {u, 1.0, 0.0, 0.0}; }
};

inline Jet3 operator-(const Jet3& a) { return {-a.v0, -a.v1, -a.v2, -a.v3}; }

inline Jet3 operator+(const Jet3& a, const Jet3& b) {
  return {a.v0 + b.v0, a.v1 + b.v1, a.v2 + b.v2, a.v3 + b.v3};
}

inline Jet3 operator-(const Jet3& a, const Jet3& b) {
  return {a.v0 - b.v0, a.v1 - b.v1, a.v2 - b.v2, a.v3 - b.v3};
}

// Leibniz rule truncated at order 3.
inline Jet3 operator*(const Jet3& a, const Jet3& b) {
  return {a.v0 * b.v0,
          a.v1 * b.v0 + a.v0 * b.v1,
          a.v2 * b.v0 + 2.0 * a.v1 * b.v1 + a.v0 * b.v2,
          a.v3 * b.v0 + 3.0 * a.v2 * b.v1 + 3.0 * a.v1 * b.v2 + a.v0 * b.v3};
}

// Solve a = q*b order by order.
inline Jet3 operator/(const Jet3& a, const Jet3& b) {
  if (b.v0 == 0.0) throw DomainError("division by zero");
  Jet3 q;
  q.v0 = a.v0 / b.v0;
  q.v1 = (a.v1 - q.v0 * b.v1) / b.v0;
  q.v2 = (a.v2 - 2.0 * q.v1 * b.v1 - q.v0 * b.v2) / b.v0;
  q.v3 = (a.v3 - 3.0 * q.v2 * b.v1 - 3.0 * q.v1 * b.v2 - q.v0 * b.v3) / b.v0;
  return q;
}

inline Jet3 operator+(const Jet3& a, double c) { return {a.v0 + c, a.v1, a.v2, a.v3}; }
inline Jet3 operator+(double c, const Jet3& a) { return a + c; }
inline Jet3 operator-(const Jet3& a, double c) { return {a.v0 - c, a.v1, a.v2, a.v3}; }
inline Jet3 operator-(double c, const Jet3& a) { return (-a) + c; }
inline Jet3 operator*(const Jet3& a, double c) { return {a.v0 * c, a.v1 * c, a.v2 * c, a.v3 * c}; }
inline Jet3 operator*(double c, const Jet3& a) { return a * c; }
inline Jet3 operator/(const Jet3& a, double c) { return a * (1.0 / c); }
inline Jet3 operator/(double c, const Jet3& a) { return Jet3::constant(c) / a; }

// Composition h(u(x)) by Faa di Bruno, where h0..h3 are the derivatives of the
// outer function at u.v0.
inline Jet3 compose(double h0, double h1, double h2, double h3, const Jet3& u) {
  Jet3 r;
  r.v0 = h0;
  r.v1 = h1 * u.v1;
  r.v2 = h2 * u.v1 * u.v1 + h1 * u.v2;
  r.v3 = h3 * u.v1 * u.v1 * u.v1 + 3.0 * h2 * u.v1 * u.v2 + h1 * u.v3;
  return r;
}

inline Jet3 exp(const Jet3& u) {
  const double e = std::exp(u.v0);
  return compose(e, e, e, e, u);
}

inline Jet3 log(const Jet3& u) {
  if (u.v0 <= 0.0) throw DomainError("ln of non-positive argument");
  const double i = 1.0 / u.v0;
  return compose(std::log(u.v0), i, -i * i, 2.0 * i * i * i, u);
}

inline Jet3 sqrt(const Jet3& u) {
  if (u.v0 <= 0.0) throw DomainError("sqrt of non-positive argument");
  const double s = std::sqrt(u.v0);
  const double i = 1.0 / u.v0;
  return compose(s, 0.5 * s * i, -0.25 * s * i * i, 0.375 * s * i * i * i, u);
}

inline Jet3 sin(const Jet3& u) {
  const double s = std::sin(u.v0), c = std::cos(u.v0);
  return compose(s, c, -s, -c, u);
}

inline Jet3 cos(const Jet3& u) {
  const double s = std::sin(u.v0), c = std::cos(u.v0);
  return compose(c, -s, -c, s, u);
}

// Integer power by binary exponentiation; valid for any base, including
// negative and zero (zero only with non-negative exponents).
inline Jet3 pow(const Jet3& u, long long n) {
  if (n < 0) {
    if (u.v0 == 0.0) throw DomainError("zero raised to a negative power");
    return 1.0 / vbl::pow(u, -n);
  }
  Jet3 result = Jet3::constant(1.0);
  Jet3 base = u;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

// Real power via exp(e*ln u); inherits ln's positivity requirement.
inline Jet3 pow(const Jet3& u, double e) {
  const double r = std::round(e);
  if (std::abs(e - r) < 1e-12 && std::abs(r) < 1e15) {
    return vbl::pow(u, static_cast<long long>(r));
  }
  return vbl::exp(e * vbl::log(u));
}

}  // namespace vbl

#endif
