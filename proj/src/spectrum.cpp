#include "vbl/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/Eigenvalues>

#include "vbl/errors.hpp"
#include "vbl/ode.hpp"
#include "vbl/roots.hpp"

namespace vbl {

namespace {

// Runs fn(i) for i in [0, n) across up to `threads` workers; results land by
// index so reports stay deterministic regardless of scheduling.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < n; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

LinearizedCoefficients LinearizedCoefficients::constant(double a1, double a0, double T) {
  LinearizedCoefficients lc;
  lc.periodic = true;
  lc.period = T;
  lc.speed = a1;  // c - f'(0) with f'(0) folded in
  lc.a1_inf = a1;
  lc.a0_inf = a0;
  lc.gp0 = a0;
  lc.a1_fn = [a1](double) { return a1; };
  lc.a0_fn = [a0](double) { return a0; };
  return lc;
}

LinearizedCoefficients linearize(const ModelSpec& m, const WaveProfile& w) {
  LinearizedCoefficients lc;
  lc.periodic = (w.kind != WaveKind::Pulse);
  lc.period = w.period;
  lc.z_left = w.z_left;
  lc.z_right = w.z_right;
  lc.speed = w.speed;
  lc.gp0 = m.g(0.0).v1;
  const double c = w.speed;
  lc.a1_inf = c - m.f(1.0).v1;
  lc.a0_inf = m.g(1.0).v1;
  // capture the jets and the profile by value: the profile shares its
  // trajectories, so the coefficients stay valid on their own
  lc.a1_fn = [f = m.f, c, w](double z) { return c - f(w.eval(z)[0]).v1; };
  lc.a0_fn = [f = m.f, g = m.g, w](double z) {
    const auto [U, V] = w.eval(z);
    return g(U).v1 - f(U).v2 * V;
  };
  return lc;
}

MonodromySample monodromy(const LinearizedCoefficients& lc, Cplx lambda,
                          const SpectrumOptions& opts) {
  if (!lc.periodic) throw Error("monodromy requires periodic coefficients");
  // columns of F stacked as [Re F00, Re F01, Re F10, Re F11, Im ...]
  auto field = [&lc, lambda](double z, const std::array<double, 8>& w) -> std::array<double, 8> {
    const double a1 = lc.a1(z), a0 = lc.a0(z);
    const Cplx q = lambda - a0;
    const Cplx F00(w[0], w[4]), F01(w[1], w[5]), F10(w[2], w[6]), F11(w[3], w[7]);
    const Cplx d00 = F10, d01 = F11;
    const Cplx d10 = q * F00 - a1 * F10;
    const Cplx d11 = q * F01 - a1 * F11;
    return {d00.real(), d01.real(), d10.real(), d11.real(),
            d00.imag(), d01.imag(), d10.imag(), d11.imag()};
  };
  const std::array<double, 8> w0 = {1, 0, 0, 1, 0, 0, 0, 0};
  OdeTrajectory<8> traj =
      solve_ivp<8>(field, w0, 0.0, lc.period, opts.ode_rtol, opts.ode_atol);
  const auto& w = traj.y_end();
  MonodromySample ms;
  ms.lambda = lambda;
  ms.M = Mat2{{{Cplx(w[0], w[4]), Cplx(w[1], w[5])}, {Cplx(w[2], w[6]), Cplx(w[3], w[7])}}};
  const Eig2Result e = eig2(ms.M);
  ms.floquet_multipliers = e.values;
  return ms;
}

Cplx periodic_evans_det(const MonodromySample& ms, double theta) {
  const Cplx mu = std::exp(Cplx(0.0, theta));
  Mat2 a = ms.M;
  a[0][0] -= mu;
  a[1][1] -= mu;
  return det2(a);
}

EvansSample periodic_evans(const LinearizedCoefficients& lc, Cplx lambda, double theta,
                           const SpectrumOptions& opts) {
  const MonodromySample ms = monodromy(lc, lambda, opts);
  EvansSample s;
  s.lambda = lambda;
  s.theta = theta;
  s.value = periodic_evans_det(ms, theta);
  s.scale = norm2(ms.M);
  return s;
}

std::vector<Cplx> hill_eigenvalues(const LinearizedCoefficients& lc, double theta, int n_modes) {
  if (!lc.periodic) throw Error("hill_eigenvalues requires periodic coefficients");
  if (n_modes < 8) throw Error("hill_eigenvalues requires n_modes >= 8");
  const double T = lc.period;
  const int n_samples = std::max(512, 8 * n_modes);

  // Fourier coefficients a_k = (1/T) int_0^T a(z) e^{-2 pi i k z / T} dz from
  // equispaced dense-output samples
  std::vector<double> a1s(n_samples), a0s(n_samples);
  for (int j = 0; j < n_samples; ++j) {
    const double z = T * j / n_samples;
    a1s[j] = lc.a1(z);
    a0s[j] = lc.a0(z);
  }
  const int kmax = 2 * n_modes;
  std::vector<Cplx> a1h(2 * kmax + 1), a0h(2 * kmax + 1);
  for (int k = -kmax; k <= kmax; ++k) {
    Cplx s1 = 0.0, s0 = 0.0;
    for (int j = 0; j < n_samples; ++j) {
      const double phase = -2.0 * M_PI * k * j / n_samples;
      const Cplx e(std::cos(phase), std::sin(phase));
      s1 += a1s[j] * e;
      s0 += a0s[j] * e;
    }
    a1h[k + kmax] = s1 / static_cast<double>(n_samples);
    a0h[k + kmax] = s0 / static_cast<double>(n_samples);
  }

  const int M = 2 * n_modes + 1;
  Eigen::MatrixXcd B(M, M);
  for (int mi = 0; mi < M; ++mi) {
    const int mrow = mi - n_modes;
    for (int ni = 0; ni < M; ++ni) {
      const int ncol = ni - n_modes;
      const Cplx mu(0.0, (2.0 * M_PI * ncol + theta) / T);
      Cplx v = a1h[(mrow - ncol) + kmax] * mu + a0h[(mrow - ncol) + kmax];
      if (mrow == ncol) v += mu * mu;
      B(mi, ni) = v;
    }
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(B, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error("hill_eigenvalues: eigensolver failed to converge");
  }
  std::vector<Cplx> out(M);
  for (int i = 0; i < M; ++i) out[i] = solver.eigenvalues()(i);
  return out;
}

FloquetResult floquet_spectrum(const LinearizedCoefficients& lc, const LambdaWindow& window,
                               int theta_count, int n_modes, const SpectrumOptions& opts) {
  const int K = theta_count;
  std::vector<std::vector<SpectrumPoint>> per_theta(K);

  parallel_for(K, opts.threads, [&](int j) {
    // uniform grid on (-pi, pi]: exclude -pi, include pi
    const double theta = -M_PI + 2.0 * M_PI * (j + 1) / K;
    std::vector<Cplx> cand = hill_eigenvalues(lc, theta, n_modes);
    std::vector<SpectrumPoint>& pts = per_theta[j];
    for (Cplx lam : cand) {
      if (!window.contains(lam)) continue;
      // complex Newton on D(., theta), derivative by central differences
      double absD = std::abs(periodic_evans_det(monodromy(lc, lam, opts), theta));
      for (int it = 0; it < opts.newton_max_iter; ++it) {
        const double h = 1e-6 * (1.0 + std::abs(lam));
        const Cplx D0 = periodic_evans_det(monodromy(lc, lam, opts), theta);
        const Cplx Dp = periodic_evans_det(monodromy(lc, lam + h, opts), theta);
        const Cplx Dm = periodic_evans_det(monodromy(lc, lam - h, opts), theta);
        const Cplx deriv = (Dp - Dm) / (2.0 * h);
        if (std::abs(deriv) == 0.0) break;
        const Cplx step = D0 / deriv;
        lam -= step;
        if (std::abs(step) <= opts.newton_tol * (1.0 + std::abs(lam))) break;
      }
      absD = std::abs(periodic_evans_det(monodromy(lc, lam, opts), theta));
      pts.push_back(SpectrumPoint{theta, lam, absD});
    }
  });

  FloquetResult fr;
  for (auto& pts : per_theta) {
    fr.points.insert(fr.points.end(), pts.begin(), pts.end());
  }
  std::sort(fr.points.begin(), fr.points.end(), [](const SpectrumPoint& a, const SpectrumPoint& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  fr.max_real_part = -std::numeric_limits<double>::infinity();
  for (const auto& p : fr.points) {
    fr.max_real_part = std::max(fr.max_real_part, p.lambda.real());
  }
  if (fr.points.empty()) fr.max_real_part = 0.0;
  fr.verdict = (fr.max_real_part > 1e-4) ? StabilityVerdict::SpectrallyUnstable
                                         : StabilityVerdict::NoInstabilityFound;
  return fr;
}

EvansSample homoclinic_evans(const LinearizedCoefficients& lc, Cplx lambda,
                             const SpectrumOptions& opts) {
  if (lc.periodic) throw Error("homoclinic_evans requires pulse coefficients");
  if (lambda.real() <= lc.a0_inf) {
    throw OutsideConsistentSplitting("lambda must satisfy Re lambda > g'(1)");
  }
  // spatial eigenvalues of the asymptotic system
  const Cplx disc = std::sqrt(lc.a1_inf * lc.a1_inf + 4.0 * (lambda - lc.a0_inf));
  const Cplx mu_p = 0.5 * (-lc.a1_inf + disc);  // Re > 0, unstable
  const Cplx mu_m = 0.5 * (-lc.a1_inf - disc);  // Re < 0, stable

  auto rescaled_field = [&lc, lambda](Cplx mu) {
    return [&lc, lambda, mu](double z, const std::array<double, 4>& w) -> std::array<double, 4> {
      const double a1 = lc.a1(z), a0 = lc.a0(z);
      const Cplx W0(w[0], w[2]), W1(w[1], w[3]);
      const Cplx d0 = W1 - mu * W0;
      const Cplx d1 = (lambda - a0) * W0 + (-a1 - mu) * W1;
      return {d0.real(), d1.real(), d0.imag(), d1.imag()};
    };
  };

  auto integrate = [&](Cplx mu, const Cplx v0, const Cplx v1, double z_from) {
    const std::array<double, 4> w0 = {v0.real(), v1.real(), v0.imag(), v1.imag()};
    OdeTrajectory<4> t = solve_ivp<4>(rescaled_field(mu), w0, z_from, 0.0, opts.ode_rtol,
                                      opts.ode_atol, OdeOptions{2.0});
    const auto& w = t.y_end();
    return std::array<Cplx, 2>{Cplx(w[0], w[2]), Cplx(w[1], w[3])};
  };

  const std::array<Cplx, 2> Wm = integrate(mu_p, 1.0, mu_p, lc.z_left);
  const std::array<Cplx, 2> Wp = integrate(mu_m, 1.0, mu_m, lc.z_right);

  EvansSample s;
  s.lambda = lambda;
  s.theta = std::numeric_limits<double>::quiet_NaN();
  s.value = Wm[0] * Wp[1] - Wm[1] * Wp[0];
  s.log_normalization = mu_p * (-lc.z_left) - mu_m * lc.z_right;
  const double nm = std::sqrt(std::norm(Wm[0]) + std::norm(Wm[1]));
  const double np = std::sqrt(std::norm(Wp[0]) + std::norm(Wp[1]));
  s.scale = nm * np;
  return s;
}

double pulse_unstable_eigenvalue(const LinearizedCoefficients& lc, const SpectrumOptions& opts) {
  const double margin = 1e-3;
  const double lambda_max = 4.0 * std::max(1.0, lc.gp0);
  auto D = [&](double lam) { return homoclinic_evans(lc, lam, opts).value.real(); };

  const int n = 200;
  double prev_l = margin, prev_d = D(margin);
  for (int i = 1; i <= n; ++i) {
    const double lam = margin + (lambda_max - margin) * i / n;
    const double d = D(lam);
    if (prev_d * d < 0.0) {
      const double root = find_root_bracketed(D, prev_l, lam, 1e-12);
      // simplicity: the derivative at the root must not vanish
      const double h = 1e-5 * (1.0 + root);
      const double deriv = (D(root + h) - D(root - h)) / (2.0 * h);
      const double scale = std::abs(D(lambda_max)) + std::abs(prev_d);
      if (std::abs(deriv) * h < 1e-12 * scale) {
        throw NoUnstableEigenvalueFound("Evans root appears degenerate at lambda = " +
                                        std::to_string(root));
      }
      return root;
    }
    prev_l = lam;
    prev_d = d;
  }
  throw NoUnstableEigenvalueFound(
      "no sign change of the Evans function on the positive real axis; contradicts the pulse "
      "instability theorem and indicates a numerical failure");
}

InstabilityReport instability_report(const ModelSpec& m, const WaveProfile& w,
                                     const FloquetResult& fr, const ModelConstants& consts,
                                     double lambda0) {
  (void)consts;
  InstabilityReport rep;
  rep.family = w.kind;
  rep.epsilon = w.epsilon;
  rep.max_real_part = fr.max_real_part;
  rep.verdict = fr.verdict;
  if (w.kind == WaveKind::PeriodicSmall) {
    const double gp0 = m.g(0.0).v1;
    rep.gap_to_gp0 = std::abs(fr.max_real_part - gp0);
    rep.gap_over_sqrt_eps = rep.gap_to_gp0 / std::sqrt(std::max(w.epsilon, 1e-300));
  } else if (w.kind == WaveKind::PeriodicLarge) {
    rep.loop_points = static_cast<int>(fr.points.size());
    rep.loop_unstable = !fr.points.empty();
    Cplx center = 0.0;
    double maxd = 0.0;
    for (const auto& p : fr.points) {
      center += p.lambda;
      maxd = std::max(maxd, std::abs(p.lambda - lambda0));
      if (p.lambda.real() <= 0.0) rep.loop_unstable = false;
    }
    if (!fr.points.empty()) center /= static_cast<double>(fr.points.size());
    rep.loop_center = center;
    rep.loop_max_dist_to_lambda0 = maxd;
    // closure under conjugation with theta -> -theta
    bool closed = true;
    for (const auto& p : fr.points) {
      if (std::abs(p.theta - M_PI) < 1e-12 || std::abs(p.theta) < 1e-12) continue;
      bool matched = false;
      for (const auto& q : fr.points) {
        if (std::abs(q.theta + p.theta) < 1e-9 &&
            std::abs(q.lambda - std::conj(p.lambda)) < 1e-6 * (1.0 + std::abs(p.lambda))) {
          matched = true;
          break;
        }
      }
      if (!matched) {
        closed = false;
        break;
      }
    }
    rep.loop_conjugation_closed = closed;
  }
  return rep;
}

}  // namespace vbl
