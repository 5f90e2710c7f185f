#ifndef VBL_EIG2_HPP
#define VBL_EIG2_HPP

#include <array>
#include <cmath>
#include <complex>

namespace vbl {

using Cplx = std::complex<double>;
using Mat2 = std::array<std::array<Cplx, 2>, 2>;
using Vec2c = std::array<Cplx, 2>;

struct Eig2Result {
  std::array<Cplx, 2> values;
  std::array<Vec2c, 2> vectors;  // unit modulus, largest component real positive
  bool defective = false;        // repeated eigenvalue with a 1-dim eigenspace
};

inline Cplx det2(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

inline double norm2(const Mat2& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (const Cplx& v : row) s += std::norm(v);
  return std::sqrt(s);
}

// Eigen-decomposition of a 2x2 complex matrix via the characteristic
// quadratic, with cancellation-safe pairing: the larger root comes from the
// stable branch and the other from lam1*lam2 = det.
inline Eig2Result eig2(const Mat2& m) {
  Eig2Result out;
  const Cplx tr = m[0][0] + m[1][1];
  const Cplx det = det2(m);
  Cplx disc = std::sqrt(tr * tr - 4.0 * det);
  if (std::real(std::conj(tr) * disc) < 0.0) disc = -disc;
  const Cplx l1 = 0.5 * (tr + disc);
  const Cplx l2 = (std::abs(l1) > 0.0) ? det / l1 : 0.5 * (tr - disc);
  out.values = {l1, l2};

  const double scale = norm2(m);
  auto eigvec = [&](Cplx lam) -> Vec2c {
    // rows of (m - lam I) are orthogonal to the eigenvector; use the larger row
    const Vec2c cand1 = {m[0][1], lam - m[0][0]};           // from row 0
    const Vec2c cand2 = {lam - m[1][1], m[1][0]};           // from row 1
    const double n1 = std::norm(cand1[0]) + std::norm(cand1[1]);
    const double n2 = std::norm(cand2[0]) + std::norm(cand2[1]);
    Vec2c v = (n1 >= n2) ? cand1 : cand2;
    double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    if (n < 1e-300) {
      v = {1.0, 0.0};  // m is lam*I: any direction
      n = 1.0;
    }
    v[0] /= n;
    v[1] /= n;
    // deterministic phase: largest-magnitude component real positive
    const int j = (std::abs(v[0]) >= std::abs(v[1])) ? 0 : 1;
    const Cplx phase = std::conj(v[j]) / std::abs(v[j]);
    v[0] *= phase;
    v[1] *= phase;
    return v;
  };

  out.vectors[0] = eigvec(l1);
  out.vectors[1] = eigvec(l2);

  if (std::abs(l1 - l2) <= 1e-12 * (1.0 + scale)) {
    const Cplx dot =
        std::conj(out.vectors[0][0]) * out.vectors[1][0] + std::conj(out.vectors[0][1]) * out.vectors[1][1];
    if (std::abs(dot) > 1.0 - 1e-9) {
      out.defective = true;
      out.vectors[1] = out.vectors[0];
    }
  }
  return out;
}

}  // namespace vbl

#endif
