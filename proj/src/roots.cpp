#include "vbl/roots.hpp"

#include <algorithm>
#include <cmath>

#include "vbl/errors.hpp"

namespace vbl {

double find_root_bracketed(const std::function<double(double)>& fn, double lo, double hi,
                           double tol) {
  double a = lo, b = hi;
  double fa = fn(a), fb = fn(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw NoSignChange("find_root_bracketed: no sign change on the bracket");
  }

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 0.5 * tol * (1.0 + std::abs(b)) + 2.0 * 1e-16 * std::abs(b);
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= tol) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic interpolation / secant
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = fn(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

}  // namespace vbl
