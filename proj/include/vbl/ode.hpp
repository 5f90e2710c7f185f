#ifndef VBL_ODE_HPP
#define VBL_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "vbl/errors.hpp"

namespace vbl {

struct OdeStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

struct OdeOptions {
  double max_step = 1.0;
  std::size_t max_steps = 2'000'000;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// y5 - y4 error weights.
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights (dopri5 continuous extension, order 4).
inline constexpr double d1 = -12715105075.0 / 11282082432.0;
inline constexpr double d3 = 87487479700.0 / 32700410799.0;
inline constexpr double d4 = -10690763975.0 / 1880347072.0;
inline constexpr double d5 = 701980252875.0 / 199316789632.0;
inline constexpr double d6 = -1453857185.0 / 822651844.0;
inline constexpr double d7 = 69997945.0 / 29380423.0;

}  // namespace detail

// One accepted step with its quartic interpolant,
// y(z0 + t*h) = r1 + t*(r2 + (1-t)*(r3 + t*(r4 + (1-t)*r5))), t in [0,1].
template <std::size_t N>
struct DenseStep {
  double z0, h;
  std::array<double, N> r1, r2, r3, r4, r5;

  std::array<double, N> eval(double z) const {
    const double t = (z - z0) / h, s = 1.0 - t;
    std::array<double, N> y;
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = r1[i] + t * (r2[i] + s * (r3[i] + t * (r4[i] + s * r5[i])));
    }
    return y;
  }
};

// Accepted-step record of one integration; z is strictly monotone in the
// integration direction and any interior point evaluates through the stored
// interpolants.
template <std::size_t N>
class OdeTrajectory {
public:
  using State = std::array<double, N>;

  double z_begin() const { return z_begin_; }
  double z_end() const { return z_end_; }
  const State& y_begin() const { return y_begin_; }
  const State& y_end() const { return y_end_; }
  const OdeStats& stats() const { return stats_; }
  const std::vector<DenseStep<N>>& steps() const { return steps_; }
  bool forward() const { return z_end_ >= z_begin_; }

  State eval(double z) const {
    if (steps_.empty()) return y_begin_;
    const bool fwd = forward();
    std::size_t lo = 0, hi = steps_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      const DenseStep<N>& s = steps_[mid];
      const double z1 = s.z0 + s.h;
      if (fwd ? (z > z1) : (z < z1)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return steps_[lo].eval(z);
  }

  double z_begin_ = 0.0, z_end_ = 0.0;
  State y_begin_{}, y_end_{};
  OdeStats stats_;
  std::vector<DenseStep<N>> steps_;
};

// Single-step Dormand-Prince 5(4) driver with PI step-size control; shared by
// solve_ivp and integrate_to_event.
template <std::size_t N, typename Field>
class Dopri5Stepper {
public:
  using State = std::array<double, N>;

  Dopri5Stepper(Field& field, const State& y0, double z0, double z_target, double rel_tol,
                double abs_tol, const OdeOptions& opts)
      : field_(field),
        y_(y0),
        z_(z0),
        z_target_(z_target),
        dir_(z_target >= z0 ? 1.0 : -1.0),
        rel_tol_(rel_tol),
        abs_tol_(abs_tol),
        opts_(opts) {
    k1_ = field_(z_, y_);
    stats_.rhs_evals++;
    if (!finite(k1_) || !finite(y_)) throw NonFiniteState("non-finite initial data");
    const double span = std::abs(z_target - z0);
    double ny = 0.0, nf = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      ny = std::max(ny, std::abs(y_[i]));
      nf = std::max(nf, std::abs(k1_[i]));
    }
    h_ = (nf > 0.0) ? 0.01 * std::max(ny, 1.0) / nf : 0.1 * std::max(span, 1e-6);
    h_ = std::clamp(h_, 1e-10 * std::max(span, 1.0), std::min(opts.max_step, std::max(span, 1e-12)));
  }

  bool done() const { return dir_ * (z_target_ - z_) <= 0.0; }
  double z() const { return z_; }
  const State& y() const { return y_; }
  const OdeStats& stats() const { return stats_; }

  // Advances by one accepted step (at most to z_target) and returns its
  // interpolant.
  DenseStep<N> step() {
    using namespace detail;
    while (true) {
      if (stats_.steps + stats_.rejected > opts_.max_steps) {
        throw StepSizeUnderflow("step budget exhausted at z = " + std::to_string(z_));
      }
      double h = std::min({h_, opts_.max_step, std::abs(z_target_ - z_)});
      if (h < 1e-14 * (1.0 + std::abs(z_))) {
        throw StepSizeUnderflow("step size underflow at z = " + std::to_string(z_));
      }
      const double hs = dir_ * h;

      State yt, k2, k3, k4, k5, k6, k7, y5;
      for (std::size_t i = 0; i < N; ++i) yt[i] = y_[i] + hs * a21 * k1_[i];
      k2 = field_(z_ + c2 * hs, yt);
      for (std::size_t i = 0; i < N; ++i) yt[i] = y_[i] + hs * (a31 * k1_[i] + a32 * k2[i]);
      k3 = field_(z_ + c3 * hs, yt);
      for (std::size_t i = 0; i < N; ++i)
        yt[i] = y_[i] + hs * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
      k4 = field_(z_ + c4 * hs, yt);
      for (std::size_t i = 0; i < N; ++i)
        yt[i] = y_[i] + hs * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      k5 = field_(z_ + c5 * hs, yt);
      for (std::size_t i = 0; i < N; ++i)
        yt[i] = y_[i] + hs * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      k6 = field_(z_ + hs, yt);
      for (std::size_t i = 0; i < N; ++i)
        y5[i] = y_[i] + hs * (a71 * k1_[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      k7 = field_(z_ + hs, y5);
      stats_.rhs_evals += 6;

      if (!finite(y5) || !finite(k7)) {
        throw NonFiniteState("field returned a non-finite value near z = " + std::to_string(z_));
      }

      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double ei =
            hs * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = abs_tol_ + rel_tol_ * std::max(std::abs(y_[i]), std::abs(y5[i]));
        const double r = ei / sc;
        err += r * r;
      }
      err = std::sqrt(err / static_cast<double>(N));

      if (err > 1.0) {
        stats_.rejected++;
        h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        continue;
      }

      DenseStep<N> st;
      st.z0 = z_;
      st.h = hs;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = y5[i] - y_[i];
        const double bspl = hs * k1_[i] - ydiff;
        st.r1[i] = y_[i];
        st.r2[i] = ydiff;
        st.r3[i] = bspl;
        st.r4[i] = ydiff - hs * k7[i] - bspl;
        st.r5[i] =
            hs * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      z_ += hs;
      y_ = y5;
      k1_ = k7;  // FSAL
      stats_.steps++;

      const double fac =
          0.9 * std::pow(std::max(err, 1e-12), -0.2 + 0.75 * 0.04) * std::pow(err_prev_, 0.04);
      h_ = h * std::clamp(fac, 0.2, 5.0);
      err_prev_ = std::max(err, 1e-12);
      return st;
    }
  }

private:
  static bool finite(const State& y) {
    for (double v : y) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  Field& field_;
  State y_;
  double z_;
  const double z_target_, dir_;
  const double rel_tol_, abs_tol_;
  OdeOptions opts_;
  State k1_;
  double h_ = 0.0;
  double err_prev_ = 1.0;
  OdeStats stats_;
};

// Integrates from z0 to z1 (either direction); local error per step bounded by
// abs_tol + rel_tol*|y|.
template <std::size_t N, typename Field>
OdeTrajectory<N> solve_ivp(Field&& field, const std::array<double, N>& y0, double z0, double z1,
                           double rel_tol, double abs_tol, const OdeOptions& opts = {}) {
  OdeTrajectory<N> traj;
  traj.z_begin_ = traj.z_end_ = z0;
  traj.y_begin_ = traj.y_end_ = y0;
  if (z1 == z0) return traj;
  Dopri5Stepper<N, Field> stepper(field, y0, z0, z1, rel_tol, abs_tol, opts);
  while (!stepper.done()) {
    traj.steps_.push_back(stepper.step());
  }
  traj.z_end_ = stepper.z();
  traj.y_end_ = stepper.y();
  traj.stats_ = stepper.stats();
  return traj;
}

// Direction of a requested crossing relative to integration order: Positive
// means the event function passes from negative to positive values.
enum class EventDirection { Positive, Negative, Any };

template <std::size_t N>
struct EventResult {
  double z_star;
  std::array<double, N> y_star;
  OdeTrajectory<N> trajectory;  // up to and including the crossing step
};

// Integrates until `event` crosses zero with the requested direction, refined
// on the dense output to |event| <= tol. Crossings are only armed once the
// event value has left the band |e| > tol, so starting exactly on a Poincare
// section does not trigger immediately.
template <std::size_t N, typename Field, typename Event>
EventResult<N> integrate_to_event(Field&& field, const std::array<double, N>& y0, double z0,
                                  Event&& event, EventDirection direction, double z_max,
                                  double tol, double rel_tol, double abs_tol,
                                  const OdeOptions& opts = {}) {
  OdeTrajectory<N> traj;
  traj.z_begin_ = traj.z_end_ = z0;
  traj.y_begin_ = traj.y_end_ = y0;

  Dopri5Stepper<N, Field> stepper(field, y0, z0, z_max, rel_tol, abs_tol, opts);
  double e_prev = event(z0, y0);
  bool armed = std::abs(e_prev) > tol;

  auto matches = [&](double ea, double eb) {
    switch (direction) {
      case EventDirection::Positive: return ea < 0.0 && eb > 0.0;
      case EventDirection::Negative: return ea > 0.0 && eb < 0.0;
      case EventDirection::Any: return ea * eb < 0.0;
    }
    return false;
  };

  while (!stepper.done()) {
    const DenseStep<N> st = stepper.step();
    const double zb = st.z0 + st.h;
    const double eb = event(zb, st.eval(zb));
    traj.steps_.push_back(st);
    traj.z_end_ = zb;
    traj.y_end_ = st.eval(zb);

    if (!armed) {
      if (std::abs(eb) > tol) armed = true;
      e_prev = eb;
      continue;
    }
    if (matches(e_prev, eb)) {
      double lo = st.z0, hi = zb, elo = e_prev;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double em = event(mid, st.eval(mid));
        if (std::abs(em) <= tol && std::abs(hi - lo) <= 1e-13 * (1.0 + std::abs(mid))) {
          lo = hi = mid;
          break;
        }
        if ((em < 0.0) == (elo < 0.0)) {
          lo = mid;
          elo = em;
        } else {
          hi = mid;
        }
      }
      const double z_star = 0.5 * (lo + hi);
      traj.stats_ = stepper.stats();
      return EventResult<N>{z_star, st.eval(z_star), std::move(traj)};
    }
    e_prev = eb;
  }
  throw NoEventBeforeZMax("no event crossing before z_max = " + std::to_string(z_max));
}

// The spec-facing 2-dimensional aliases.
using State2 = std::array<double, 2>;
using Field2 = std::function<State2(double, const State2&)>;
using Trajectory = OdeTrajectory<2>;

}  // namespace vbl

#endif
