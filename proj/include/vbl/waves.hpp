#ifndef VBL_WAVES_HPP
#define VBL_WAVES_HPP

#include <array>
#include <complex>
#include <memory>
#include <string>

#include "vbl/model.hpp"
#include "vbl/ode.hpp"

namespace vbl {

struct WaveOptions {
  double ode_rtol = 1e-10;
  double ode_atol = 1e-12;
  double quad_tol = 1e-10;
  double root_tol = 1e-12;
  double z_max = 1000.0;  // give up on a Poincare return after this long
};

enum class WaveKind { Pulse, PeriodicSmall, PeriodicLarge };

enum class EquilibriumClass { Saddle, NodeStable, NodeUnstable, FocusStable, FocusUnstable, Center };

struct EquilibriumInfo {
  std::array<double, 2> point;
  std::array<std::complex<double>, 2> eigenvalues;
  EquilibriumClass classification;
};

// A computed wave. Periodic profiles are stored over one period with z = 0 at
// the Poincare section crossing {V=0} and evaluate by periodic wrap; the pulse
// is stored as two shooting legs meeting at z = 0 (the V=0 turning point) with
// linearized saddle tails beyond the legs.
class WaveProfile {
public:
  WaveKind kind = WaveKind::Pulse;
  double speed = 0.0;
  double period = 0.0;   // periodic kinds only
  double epsilon = 0.0;  // |c - c_critical| for the family kinds
  double amplitude = 0.0;  // max |U|
  double turning_u = 0.0;  // U at z = 0
  double z_left = 0.0, z_right = 0.0;  // pulse truncation [-Z, Z]

  // pulse tail data
  double lambda_stable = 0.0;    // lambda1(c) < 0, right-tail rate
  double lambda_unstable = 0.0;  // lambda2(c) > 0, left-tail rate

  std::array<double, 2> eval(double z) const;  // (U, V)

  // representation
  std::shared_ptr<const Trajectory> cycle;      // periodic: [0, T_plus)
  std::shared_ptr<const Trajectory> leg_left;   // pulse: integration s in [0, zf] maps to z = s - zf
  std::shared_ptr<const Trajectory> leg_right;  // pulse: integration s in [0, -zb] maps to z = s + zb
  double leg_left_len = 0.0, leg_right_len = 0.0;
};

// The profile ODE as a planar field: U' = V, V' = -cV + f'(U)V - g(U).
// Autonomous; the z argument of the returned callable is ignored.
std::function<State2(double, const State2&)> vector_field(const ModelSpec& m, double c);

std::array<EquilibriumInfo, 2> classify_equilibria(const ModelSpec& m, double c);

// H(U, V) = V^2/2 + int_0^U g.
double hamiltonian(const ModelSpec& m, double U, double V, double quad_tol = 1e-12);

// |phi'' + (c - f'(phi)) phi' + g(phi)| at z, with phi'' from a central
// difference of the stored V component.
double profile_residual(const ModelSpec& m, const WaveProfile& w, double z);

struct PulseResult {
  WaveProfile profile;
  double c_star = 0.0;      // shooting-refined speed (= c1 when refine = false)
  double c_melnikov = 0.0;  // I1/I0
  double gap = 0.0;         // c_star - c_melnikov
  double lambda1 = 0.0, lambda2 = 0.0;  // saddle rates at c_star
};

// Shoots the saddle connection: unstable-manifold leg forward and
// stable-manifold leg backward to the section {V=0}, with the split
// s(c) = U_fwd - U_bwd root-found over a bracket around c1 when refine is on.
// Throws NoHomoclinicBracket when the split does not change sign there.
PulseResult compute_pulse(const ModelSpec& m, const ModelConstants& consts, bool refine = true,
                          const WaveOptions& opts = {});

// Small-amplitude Hopf cycle at c = c0 +/- epsilon (side chosen by sign of
// a0_bar): fixed point of the Poincare map on {V=0, U>0}. Throws NoLimitCycle.
WaveProfile compute_periodic_small(const ModelSpec& m, const ModelConstants& consts,
                                   double epsilon, const WaveOptions& opts = {});

// Large-period cycle at c = c_pulse -/+ epsilon (side chosen by sign of
// f'(1) - c1), found from the pulse's section crossing. Throws NoLimitCycle.
WaveProfile compute_periodic_large(const ModelSpec& m, const ModelConstants& consts,
                                   double epsilon, const WaveProfile& pulse,
                                   const WaveOptions& opts = {});

// E = -int chi(z) psi'(z)^2 dz with chi(z) = exp(int_0^z (c - f'(psi))); the
// integrand is nonnegative, so E < 0 whenever the pulse is nontrivial.
// `z_span` defaults to the profile truncation; pass a larger value to probe
// tail robustness.
double nondegeneracy_certificate(const ModelSpec& m, const WaveProfile& pulse,
                                 double z_span = 0.0, double quad_tol = 1e-10);

}  // namespace vbl

#endif
