#ifndef VBL_ROOTS_HPP
#define VBL_ROOTS_HPP

#include <functional>

namespace vbl {

// Brent's method on a bracketing interval. Requires fn(lo)*fn(hi) < 0 (throws
// NoSignChange otherwise) and returns x with |fn(x)| <= tol or bracket width
// <= tol*(1+|x|).
double find_root_bracketed(const std::function<double(double)>& fn, double lo, double hi,
                           double tol);

}  // namespace vbl

#endif
