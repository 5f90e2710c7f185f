#include "vbl/waves.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "vbl/errors.hpp"
#include "vbl/quadrature.hpp"
#include "vbl/roots.hpp"

namespace vbl {

namespace {

// Saddle rates at P1 for speed c: lambda = (f'(1)-c)/2 -/+ sqrt(.)/2.
std::array<double, 2> saddle_rates(const ModelSpec& m, double c) {
  const double fp1 = m.f(1.0).v1, gp1 = m.g(1.0).v1;
  const double half = 0.5 * (fp1 - c);
  const double disc = std::sqrt(half * half - gp1);
  return {half - disc, half + disc};  // {lambda1 < 0, lambda2 > 0}
}

struct Leg {
  double section_u;  // U at the V=0 crossing
  double length;     // |z| from start to crossing
  Trajectory traj;
};

// Shoots one saddle-manifold leg to the section {V=0}. `unstable` selects the
// forward leg along r_unstable; otherwise the backward leg along r_stable.
Leg shoot_leg(const ModelSpec& m, double c, double delta, bool unstable,
              const WaveOptions& opts) {
  const auto [lam1, lam2] = saddle_rates(m, c);
  const double lam = unstable ? lam2 : lam1;
  const double norm = std::sqrt(1.0 + lam * lam);
  // enter the loop region: U < 1
  const State2 y0 = {1.0 - delta / norm, -delta * lam / norm};
  auto field = vector_field(m, c);
  auto event = [](double, const State2& y) { return y[1]; };
  const double z_target = unstable ? opts.z_max : -opts.z_max;
  // along integration order the turning crossing is V: - -> + on the forward
  // leg and V: + -> - on the backward leg
  const EventDirection dir = unstable ? EventDirection::Positive : EventDirection::Negative;
  EventResult<2> ev = integrate_to_event<2>(field, y0, 0.0, event, dir, z_target, opts.root_tol,
                                            opts.ode_rtol, opts.ode_atol);
  return Leg{ev.y_star[0], std::abs(ev.z_star), std::move(ev.trajectory)};
}

double max_abs_u(const WaveProfile& w, double lo, double hi, int samples = 4001) {
  double amp = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double z = lo + (hi - lo) * i / (samples - 1);
    amp = std::max(amp, std::abs(w.eval(z)[0]));
  }
  return amp;
}

// Poincare return map on the section {V = 0}: from (u, 0), the next crossing
// of the requested direction. Returns nothing when the orbit escapes.
struct Return {
  double u;
  double time;
  Trajectory traj;
};

std::optional<Return> poincare_return(const ModelSpec& m, double c, double u,
                                      EventDirection dir, const WaveOptions& opts) {
  auto field = vector_field(m, c);
  auto event = [](double, const State2& y) { return y[1]; };
  try {
    EventResult<2> ev = integrate_to_event<2>(field, {u, 0.0}, 0.0, event, dir, opts.z_max,
                                              opts.root_tol, opts.ode_rtol, opts.ode_atol);
    return Return{ev.y_star[0], ev.z_star, std::move(ev.trajectory)};
  } catch (const NoEventBeforeZMax&) {
    return std::nullopt;
  } catch (const NonFiniteState&) {
    return std::nullopt;
  } catch (const StepSizeUnderflow&) {
    return std::nullopt;
  }
}

WaveProfile make_cycle_profile(const ModelSpec& m, double c, double u_fixed, double epsilon,
                               WaveKind kind, EventDirection dir, const WaveOptions& opts) {
  std::optional<Return> ret = poincare_return(m, c, u_fixed, dir, opts);
  if (!ret) throw NoLimitCycle("fixed point failed to return");
  WaveProfile w;
  w.kind = kind;
  w.speed = c;
  w.period = ret->time;
  w.epsilon = epsilon;
  w.turning_u = u_fixed;
  w.cycle = std::make_shared<const Trajectory>(std::move(ret->traj));
  w.amplitude = max_abs_u(w, 0.0, w.period);
  return w;
}

}  // namespace

std::array<double, 2> WaveProfile::eval(double z) const {
  if (kind != WaveKind::Pulse) {
    double t = std::fmod(z, period);
    if (t < 0.0) t += period;
    return cycle->eval(t);
  }
  if (z <= 0.0) {
    const double zf = leg_left_len;
    if (z >= -zf) return leg_left->eval(z + zf);
    // linearized tail toward the saddle, rate lambda_unstable
    const State2 yend = leg_left->y_begin();
    const double decay = std::exp(lambda_unstable * (z + zf));
    return {1.0 + (yend[0] - 1.0) * decay, yend[1] * decay};
  }
  const double zb = leg_right_len;
  if (z <= zb) return leg_right->eval(z - zb);
  const State2 yend = leg_right->y_begin();
  const double decay = std::exp(lambda_stable * (z - zb));
  return {1.0 + (yend[0] - 1.0) * decay, yend[1] * decay};
}

std::function<State2(double, const State2&)> vector_field(const ModelSpec& m, double c) {
  return [&m, c](double, const State2& y) -> State2 {
    return {y[1], -c * y[1] + m.f(y[0]).v1 * y[1] - m.g(y[0]).v0};
  };
}

std::array<EquilibriumInfo, 2> classify_equilibria(const ModelSpec& m, double c) {
  auto analyze = [&](double u) {
    EquilibriumInfo info;
    info.point = {u, 0.0};
    const double fp = m.f(u).v1, gp = m.g(u).v1;
    const double half = 0.5 * (fp - c);
    const double disc2 = half * half - gp;
    if (disc2 >= 0.0) {
      const double d = std::sqrt(disc2);
      info.eigenvalues = {std::complex<double>(half - d, 0.0), std::complex<double>(half + d, 0.0)};
      const double l1 = half - d, l2 = half + d;
      if (l1 * l2 < 0.0) {
        info.classification = EquilibriumClass::Saddle;
      } else {
        info.classification = (half < 0.0) ? EquilibriumClass::NodeStable
                                           : EquilibriumClass::NodeUnstable;
      }
    } else {
      const double d = std::sqrt(-disc2);
      info.eigenvalues = {std::complex<double>(half, -d), std::complex<double>(half, d)};
      if (half == 0.0) {
        info.classification = EquilibriumClass::Center;
      } else {
        info.classification =
            (half < 0.0) ? EquilibriumClass::FocusStable : EquilibriumClass::FocusUnstable;
      }
    }
    return info;
  };
  return {analyze(0.0), analyze(1.0)};
}

double hamiltonian(const ModelSpec& m, double U, double V, double quad_tol) {
  return 0.5 * V * V + reaction_potential(m, U, quad_tol);
}

double profile_residual(const ModelSpec& m, const WaveProfile& w, double z) {
  const double h = 1e-4;
  const double vp = (w.eval(z + h)[1] - w.eval(z - h)[1]) / (2.0 * h);
  const auto [U, V] = w.eval(z);
  const double rhs = -w.speed * V + m.f(U).v1 * V - m.g(U).v0;
  return std::abs(vp - rhs);
}

PulseResult compute_pulse(const ModelSpec& m, const ModelConstants& consts, bool refine,
                          const WaveOptions& opts) {
  const double delta = 1e-7 * std::abs(1.0 - consts.u_star);

  auto split = [&](double c) {
    const Leg fwd = shoot_leg(m, c, delta, true, opts);
    const Leg bwd = shoot_leg(m, c, delta, false, opts);
    return fwd.section_u - bwd.section_u;
  };

  double c_star = consts.c1;
  if (refine) {
    const double r = std::max(0.1 * std::abs(consts.c1), 0.05);
    const double lo = consts.c1 - r, hi = consts.c1 + r;
    const double slo = split(lo), shi = split(hi);
    if (slo * shi > 0.0) {
      throw NoHomoclinicBracket("split function has no sign change in [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "]");
    }
    c_star = find_root_bracketed(split, lo, hi, opts.root_tol);
  }

  Leg fwd = shoot_leg(m, c_star, delta, true, opts);
  Leg bwd = shoot_leg(m, c_star, delta, false, opts);

  PulseResult out;
  out.c_star = c_star;
  out.c_melnikov = consts.c1;
  out.gap = c_star - consts.c1;
  const auto [lam1, lam2] = saddle_rates(m, c_star);
  out.lambda1 = lam1;
  out.lambda2 = lam2;

  WaveProfile& w = out.profile;
  w.kind = WaveKind::Pulse;
  w.speed = c_star;
  w.epsilon = std::abs(out.gap);
  w.turning_u = 0.5 * (fwd.section_u + bwd.section_u);
  w.lambda_stable = lam1;
  w.lambda_unstable = lam2;
  w.leg_left_len = fwd.length;
  w.leg_right_len = bwd.length;
  w.leg_left = std::make_shared<const Trajectory>(std::move(fwd.traj));
  w.leg_right = std::make_shared<const Trajectory>(std::move(bwd.traj));
  // truncation: linear decay estimate C e^{-kappa Z} <= 1e-9, safety 1.2
  const double kappa = std::min(lam2, -lam1);
  const double scale = std::max(1.0, std::abs(1.0 - consts.u_star));
  const double Z = 1.2 * std::log(scale * 1e9) / kappa;
  w.z_left = -std::max(Z, fwd.length);
  w.z_right = std::max(Z, bwd.length);
  w.amplitude = max_abs_u(w, w.z_left, w.z_right);
  return out;
}

WaveProfile compute_periodic_small(const ModelSpec& m, const ModelConstants& consts,
                                   double epsilon, const WaveOptions& opts) {
  if (!(epsilon > 0.0) || epsilon > 0.05) {
    throw Error("epsilon must lie in (0, 0.05]");
  }
  const double c =
      (consts.hopf_direction == HopfDirection::AboveC0) ? consts.c0 + epsilon : consts.c0 - epsilon;
  // the return crossing on {V=0, U>0} runs downward through the section
  const EventDirection dir = EventDirection::Negative;

  auto displacement = [&](double u) -> std::optional<double> {
    std::optional<Return> r = poincare_return(m, c, u, dir, opts);
    if (!r) return std::nullopt;
    return r->u - u;
  };

  // Hopf scaling: the orbit radius grows like sqrt(8 eps/|a0_bar|); scan a
  // band around it for a sign change of the displacement map
  const double scale = std::sqrt(8.0 * epsilon / std::max(std::abs(consts.a0_bar), 1e-8));
  const double u_seed = std::max(0.5 * std::sqrt(epsilon / std::abs(consts.a0_bar)), 0.01);
  const double lo = std::min(0.2 * scale, u_seed), hi = 3.5 * scale;
  const int n = 48;
  std::optional<std::pair<double, double>> prev;
  double u_fixed = 0.0;
  bool found = false;
  for (int i = 0; i <= n && !found; ++i) {
    const double u = lo + (hi - lo) * i / n;
    std::optional<double> hval = displacement(u);
    if (!hval) {
      prev.reset();
      continue;
    }
    if (prev && prev->second * (*hval) < 0.0) {
      auto f = [&](double x) {
        std::optional<double> v = displacement(x);
        if (!v) throw NoLimitCycle("orbit escaped during refinement");
        return *v;
      };
      u_fixed = find_root_bracketed(f, prev->first, u, 1e-12);
      found = true;
    }
    prev = {u, *hval};
  }
  if (!found) throw NoLimitCycle("no Poincare fixed point on the expected side of c0");
  return make_cycle_profile(m, c, u_fixed, epsilon, WaveKind::PeriodicSmall, dir, opts);
}

WaveProfile compute_periodic_large(const ModelSpec& m, const ModelConstants& consts,
                                   double epsilon, const WaveProfile& pulse,
                                   const WaveOptions& opts) {
  if (!(epsilon > 0.0) || epsilon > 0.05) {
    throw Error("epsilon must lie in (0, 0.05]");
  }
  // anchored at the computed pulse speed; the Melnikov c1 is its predictor
  const double c = (consts.homoclinic_direction == HomoclinicDirection::BelowC1)
                       ? pulse.speed - epsilon
                       : pulse.speed + epsilon;
  const double u_base = pulse.turning_u;
  const EventDirection dir = EventDirection::Positive;

  enum class Sample { Escape, Neg, Pos };
  auto probe = [&](double u) {
    std::optional<Return> r = poincare_return(m, c, u, dir, opts);
    if (!r) return std::make_pair(Sample::Escape, 0.0);
    const double h = r->u - u;
    return std::make_pair(h < 0.0 ? Sample::Neg : Sample::Pos, h);
  };

  // log-spaced offsets from the pulse's section crossing toward the interior
  const double spread = 0.4 * std::abs(1.0 - u_base);
  std::vector<double> offsets;
  for (double o = 1e-7; o < spread; o *= 1.9) offsets.push_back(o);
  offsets.push_back(spread);

  std::optional<std::pair<double, double>> prev_signed;  // (u, h)
  std::optional<double> prev_outside;                    // escape or h<0
  double u_fixed = 0.0;
  bool found = false;

  auto bisect_boundary = [&](double u_out, double u_in) {
    // u_out escapes (or recedes), u_in returns with h > 0; the cycle is the
    // boundary of the returning side
    double lo = u_out, hi = u_in;
    for (int it = 0; it < 60 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto [s, h] = probe(mid);
      if (s == Sample::Pos) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  };

  for (double off : offsets) {
    const double u = u_base + off;
    const auto [s, h] = probe(u);
    if (s == Sample::Neg && prev_signed && prev_signed->second > 0.0) {
      // classic sign-change bracket (stable cycle)
      auto f = [&](double x) {
        const auto [ss, hh] = probe(x);
        if (ss == Sample::Escape) throw NoLimitCycle("orbit escaped during refinement");
        return hh;
      };
      u_fixed = find_root_bracketed(f, prev_signed->first, u, 1e-12);
      found = true;
      break;
    }
    if (s == Sample::Pos && prev_outside) {
      // escape/return boundary (unstable cycle)
      u_fixed = bisect_boundary(*prev_outside, u);
      found = true;
      break;
    }
    if (s == Sample::Pos) {
      prev_signed = {u, h};
      prev_outside.reset();
    } else {
      prev_outside = u;
      prev_signed.reset();
    }
  }
  if (!found) throw NoLimitCycle("no Poincare fixed point near the homoclinic loop");
  return make_cycle_profile(m, c, u_fixed, epsilon, WaveKind::PeriodicLarge, dir, opts);
}

double nondegeneracy_certificate(const ModelSpec& m, const WaveProfile& pulse, double z_span,
                                 double quad_tol) {
  const double zl = (z_span > 0.0) ? -z_span : pulse.z_left;
  const double zr = (z_span > 0.0) ? z_span : pulse.z_right;
  // cumulative integral I(z) = int_0^z (c - f'(psi))
  auto rate = [&](double z, const std::array<double, 1>&) -> std::array<double, 1> {
    return {pulse.speed - m.f(pulse.eval(z)[0]).v1};
  };
  OdeTrajectory<1> right = solve_ivp<1>(rate, {0.0}, 0.0, zr, 1e-11, 1e-13);
  OdeTrajectory<1> left = solve_ivp<1>(rate, {0.0}, 0.0, zl, 1e-11, 1e-13);
  auto I = [&](double z) { return (z >= 0.0) ? right.eval(z)[0] : left.eval(z)[0]; };
  auto integrand = [&](double z) {
    const double v = pulse.eval(z)[1];
    return std::exp(I(z)) * v * v;
  };
  // chunk at the leg extents so wide truncations cannot hide the core bump
  // between quadrature nodes
  std::vector<double> cuts = {zl};
  for (double a : {-pulse.leg_left_len, -0.5 * pulse.leg_left_len, 0.0,
                   0.5 * pulse.leg_right_len, pulse.leg_right_len}) {
    if (a > cuts.back() && a < zr) cuts.push_back(a);
  }
  cuts.push_back(zr);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += quad_adaptive(integrand, cuts[i], cuts[i + 1],
                           quad_tol / static_cast<double>(cuts.size() - 1))
                 .value;
  }
  return -total;
}

}  // namespace vbl
