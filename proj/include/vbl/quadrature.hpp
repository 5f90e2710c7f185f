#ifndef VBL_QUADRATURE_HPP
#define VBL_QUADRATURE_HPP

#include <cstddef>
#include <functional>

namespace vbl {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions = 0;
  // false when the subdivision limit was hit before the tolerance; the value
  // and estimate are still the best available.
  bool converged = true;
};

enum class Singular { None, Left, Right, Both };

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod 15-point quadrature on [a, b]. Declared singular
// endpoints may blow up like (u-a)^(-1/2) or (b-u)^(-1/2); those ends are
// mapped by u = a + t^2 (resp. u = b - t^2), which renders such integrands
// analytic before subdivision.
QuadResult quad_adaptive(const Integrand& f, double a, double b, double tol,
                         Singular singular = Singular::None);

}  // namespace vbl

#endif
