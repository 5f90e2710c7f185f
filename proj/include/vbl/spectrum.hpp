#ifndef VBL_SPECTRUM_HPP
#define VBL_SPECTRUM_HPP

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "vbl/eig2.hpp"
#include "vbl/model.hpp"
#include "vbl/waves.hpp"

namespace vbl {

struct SpectrumOptions {
  double ode_rtol = 1e-10;
  double ode_atol = 1e-12;
  double newton_tol = 1e-10;
  int newton_max_iter = 40;
  double instability_margin = 1e-4;
  int threads = 0;  // 0: hardware default
};

// Coefficients of the linearization about a wave,
//   a1(z) = c - f'(phi(z)),  a0(z) = g'(phi(z)) - f''(phi(z)) phi'(z),
// backed by the profile's dense output. T-periodic for periodic profiles; for
// the pulse they decay to a1_inf = c - f'(1), a0_inf = g'(1).
class LinearizedCoefficients {
public:
  double a1(double z) const { return a1_fn(z); }
  double a0(double z) const { return a0_fn(z); }

  bool periodic = true;
  double period = 0.0;
  double z_left = 0.0, z_right = 0.0;  // pulse truncation
  double speed = 0.0;
  double a1_inf = 0.0, a0_inf = 0.0;  // pulse asymptotics
  double gp0 = 0.0;                   // g'(0), for spectral scan bounds

  std::function<double(double)> a1_fn, a0_fn;

  // Constant-coefficient operator about the zero solution (the dispersion
  // oracle): a1 = c - f'(0), a0 = g'(0), period T.
  static LinearizedCoefficients constant(double a1, double a0, double T);
};

LinearizedCoefficients linearize(const ModelSpec& m, const WaveProfile& w);

struct MonodromySample {
  Cplx lambda;
  Mat2 M;
  std::array<Cplx, 2> floquet_multipliers;
};

// Identity-normalized fundamental solution of W' = A(z, lambda) W over one
// period; multipliers from eig2.
MonodromySample monodromy(const LinearizedCoefficients& lc, Cplx lambda,
                          const SpectrumOptions& opts = {});

struct EvansSample {
  Cplx lambda;
  double theta = 0.0;  // NaN for homoclinic samples
  Cplx value;
  Cplx log_normalization;  // growth factor removed during integration
  double scale = 1.0;      // norm scale for zero tests
};

// D(lambda, theta) = det(M(lambda) - e^{i theta} I).
EvansSample periodic_evans(const LinearizedCoefficients& lc, Cplx lambda, double theta,
                           const SpectrumOptions& opts = {});
Cplx periodic_evans_det(const MonodromySample& ms, double theta);

// Eigenvalues of the Fourier-Galerkin truncation of the Bloch operator
// (partial_z + i theta/T)^2 + a1 (partial_z + i theta/T) + a0 on modes
// |n| <= n_modes. Requires periodic coefficients and n_modes >= 8.
std::vector<Cplx> hill_eigenvalues(const LinearizedCoefficients& lc, double theta, int n_modes);

struct SpectrumPoint {
  double theta;
  Cplx lambda;
  double abs_D;
};

enum class StabilityVerdict { SpectrallyUnstable, NoInstabilityFound };

struct LambdaWindow {
  double re_lo, re_hi, im_lo, im_hi;
  bool contains(Cplx z) const {
    return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
  }
};

struct FloquetResult {
  std::vector<SpectrumPoint> points;  // sorted by (theta, Re, Im)
  double max_real_part = 0.0;
  StabilityVerdict verdict = StabilityVerdict::NoInstabilityFound;
};

// Hill proposes, Evans-Newton disposes: for each theta on a uniform grid over
// (-pi, pi], take the Hill eigenvalues inside the window and refine each by
// complex Newton on D(., theta).
FloquetResult floquet_spectrum(const LinearizedCoefficients& lc, const LambdaWindow& window,
                               int theta_count, int n_modes, const SpectrumOptions& opts = {});

// Wronskian of the two exponentially rescaled manifold solutions at z = 0.
// Requires lambda in the consistent-splitting region {Re lambda > g'(1)}.
EvansSample homoclinic_evans(const LinearizedCoefficients& lc, Cplx lambda,
                             const SpectrumOptions& opts = {});

// The positive real Evans root: sign-change scan on (margin, lambda_max] and
// Brent refinement; verifies simplicity through a nonzero central-difference
// derivative. Throws NoUnstableEigenvalueFound if the scan finds no sign
// change (a numerical failure worth loud treatment).
double pulse_unstable_eigenvalue(const LinearizedCoefficients& lc,
                                 const SpectrumOptions& opts = {});

struct InstabilityReport {
  WaveKind family;
  double epsilon = 0.0;
  double max_real_part = 0.0;
  StabilityVerdict verdict = StabilityVerdict::NoInstabilityFound;
  // small family: distance of the top eigenvalue to g'(0) and its sqrt(eps) ratio
  double gap_to_gp0 = 0.0;
  double gap_over_sqrt_eps = 0.0;
  // large family: geometry of the spectrum loop near the pulse eigenvalue
  int loop_points = 0;
  bool loop_conjugation_closed = false;
  bool loop_unstable = false;          // entirely in {Re > 0}
  double loop_max_dist_to_lambda0 = 0.0;
  Cplx loop_center;
};

// lambda0 is the pulse eigenvalue for the large family (ignored otherwise).
InstabilityReport instability_report(const ModelSpec& m, const WaveProfile& w,
                                     const FloquetResult& fr, const ModelConstants& consts,
                                     double lambda0 = 0.0);

}  // namespace vbl

#endif
