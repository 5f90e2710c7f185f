#include "vbl/model.hpp"

#include <cmath>
#include <fstream>
#include <memory>

#include <nlohmann/json.hpp>

#include "vbl/errors.hpp"
#include "vbl/expr.hpp"
#include "vbl/quadrature.hpp"
#include "vbl/roots.hpp"

namespace vbl {

namespace {

void check_reaction_zeros(const ModelSpec& m) {
  const double g0 = m.g(0.0).v0, g1 = m.g(1.0).v0;
  if (std::abs(g0) > 1e-12 || std::abs(g1) > 1e-12) {
    throw ModelConstructionError("reaction must vanish at u=0 and u=1 (got g(0)=" +
                                 std::to_string(g0) + ", g(1)=" + std::to_string(g1) + ")");
  }
}

Jet3 logistic_g(double u) {
  // u(1-u)
  return {u * (1.0 - u), 1.0 - 2.0 * u, -2.0, 0.0};
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"burgers-fisher", "buckley-leverett-logistic", "modified-gbf"};
}

ModelSpec make_builtin(const std::string& name) {
  ModelSpec m;
  m.name = name;
  m.source = ModelSpec::Source::Builtin;
  if (name == "burgers-fisher") {
    m.f = [](double u) { return Jet3{0.5 * u * u, u, 1.0, 0.0}; };
    m.g = logistic_g;
  } else if (name == "buckley-leverett-logistic") {
    m.f = [](double u) {
      // u^2 / (u^2 + (1-u)^2/2), via jet arithmetic on the closed form
      const Jet3 uj = Jet3::variable(u);
      const Jet3 one_minus = 1.0 - uj;
      return (uj * uj) / (uj * uj + 0.5 * one_minus * one_minus);
    };
    m.g = logistic_g;
  } else if (name == "modified-gbf") {
    m.f = [](double u) {
      const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
      return Jet3{0.25 * u4 - u3 / 3.0, u3 - u2, 3.0 * u2 - 2.0 * u, 6.0 * u - 2.0};
    };
    m.g = [](double u) {
      const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
      return Jet3{u - u4, 1.0 - 4.0 * u3, -12.0 * u2, -24.0 * u};
    };
  } else {
    throw ModelConstructionError("unknown builtin model '" + name + "'");
  }
  check_reaction_zeros(m);
  return m;
}

ModelSpec make_parsed_model(const std::string& name, const std::string& f_text,
                            const std::string& g_text) {
  ModelSpec m;
  m.name = name;
  m.source = ModelSpec::Source::Parsed;
  m.f_text = f_text;
  m.g_text = g_text;
  auto f_ast = std::make_shared<ExprAst>(parse_expression(f_text));
  auto g_ast = std::make_shared<ExprAst>(parse_expression(g_text));
  m.f = [f_ast](double u) { return eval_jet3(*f_ast, u); };
  m.g = [g_ast](double u) { return eval_jet3(*g_ast, u); };
  check_reaction_zeros(m);
  return m;
}

ModelSpec model_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelConstructionError("cannot open model file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ModelConstructionError("invalid model JSON in '" + path + "': " + e.what());
  }
  if (!j.contains("name") || !j.contains("f") || !j.contains("g")) {
    throw ModelConstructionError("model JSON must contain \"name\", \"f\" and \"g\"");
  }
  return make_parsed_model(j["name"].get<std::string>(), j["f"].get<std::string>(),
                           j["g"].get<std::string>());
}

ModelSpec resolve_model(const std::string& selector) {
  for (const std::string& b : builtin_names()) {
    if (selector == b) return make_builtin(selector);
  }
  return model_from_json_file(selector);
}

double reaction_potential(const ModelSpec& m, double u, double quad_tol) {
  if (u == 0.0) return 0.0;
  auto integrand = [&](double s) { return m.g(s).v0; };
  if (u > 0.0) return quad_adaptive(integrand, 0.0, u, quad_tol).value;
  return -quad_adaptive(integrand, u, 0.0, quad_tol).value;
}

double find_ustar(const ModelSpec& m, const ModelOptions& opts) {
  const double beta = reaction_potential(m, 1.0, opts.quad_tol * 1e-2);
  auto h = [&](double u) { return reaction_potential(m, u, opts.quad_tol * 1e-2) - beta; };
  // h(0) = -beta < 0 and h increases towards the left under (H2); expand the
  // bracket geometrically from -1
  double lo = -1.0;
  while (h(lo) < 0.0) {
    lo *= 2.0;
    if (lo < -1e6) throw NoBracketFound("no u* bracket found in [-1e6, 0)");
  }
  const double hi = -1e-12;
  return find_root_bracketed(h, lo, hi, opts.root_tol);
}

double gamma(const ModelSpec& m, double u_star, double u, double quad_tol) {
  if (u < u_star - 1e-9 || u > 1.0 + 1e-9) {
    throw OutOfRange("gamma(u) defined on [u*, 1]");
  }
  if (u >= 1.0) return 0.0;
  if (u <= u_star) return 0.0;
  auto integrand = [&](double s) { return m.g(s).v0; };
  const double v = quad_adaptive(integrand, u, 1.0, quad_tol).value;
  return (v <= 0.0) ? 0.0 : std::sqrt(2.0 * v);
}

MelnikovConstants melnikov_constants(const ModelSpec& m, double u_star,
                                     const ModelOptions& opts) {
  const double inner_tol = std::min(1e-13, opts.quad_tol * 1e-3);
  auto gam = [&](double u) { return gamma(m, u_star, u, inner_tol); };

  MelnikovConstants out;
  out.I0 = quad_adaptive([&](double u) { return gam(u); }, u_star, 1.0, opts.quad_tol).value;
  out.I1 =
      quad_adaptive([&](double u) { return m.f(u).v1 * gam(u); }, u_star, 1.0, opts.quad_tol)
          .value;

  // sqrt(1 + gamma'^2) with gamma' = -g/gamma blows up like an inverse square
  // root at both endpoints
  auto arc = [&](double u) {
    const double ga = gam(u);
    if (ga == 0.0) return 0.0;  // unreachable under the endpoint substitution
    const double gp = -m.g(u).v0 / ga;
    return std::sqrt(1.0 + gp * gp);
  };
  out.L = 2.0 *
          quad_adaptive([&](double u) { return arc(u); }, u_star, 1.0, opts.quad_tol,
                        Singular::Both)
              .value;
  out.J = 2.0 *
          quad_adaptive([&](double u) { return m.f(u).v1 * arc(u); }, u_star, 1.0, opts.quad_tol,
                        Singular::Both)
              .value;
  return out;
}

double lyapunov_coefficient(const ModelSpec& m) {
  const Jet3 f0 = m.f(0.0), g0 = m.g(0.0);
  if (g0.v1 <= 0.0) throw NonPositiveGPrime0("a0_bar requires g'(0) > 0");
  return f0.v3 - f0.v2 * g0.v2 / std::sqrt(g0.v1);
}

ModelConstants derive_constants(const ModelSpec& m, const ModelOptions& opts) {
  ModelConstants k;
  k.u_star = find_ustar(m, opts);
  k.beta = reaction_potential(m, 1.0, opts.quad_tol * 1e-2);
  const MelnikovConstants mel = melnikov_constants(m, k.u_star, opts);
  k.I0 = mel.I0;
  k.I1 = mel.I1;
  k.J = mel.J;
  k.L = mel.L;
  k.c0 = m.f(0.0).v1;
  k.c1 = mel.I1 / mel.I0;
  k.a0_bar = lyapunov_coefficient(m);
  const double fp1 = m.f(1.0).v1;
  const double gp0 = m.g(0.0).v1, gp1 = m.g(1.0).v1;
  k.sigma0 = fp1 - k.c1;
  k.T0 = 2.0 * M_PI / std::sqrt(gp0);
  // saddle eigenvalues at the Melnikov speed, Re part (f'(1)-c1)/2
  const double half = 0.5 * (fp1 - k.c1);
  const double disc = std::sqrt(half * half * 4.0 - 4.0 * gp1) * 0.5;
  k.lambda1_c1 = half - disc;
  k.lambda2_c1 = half + disc;
  k.kappa = std::min(k.lambda2_c1, -k.lambda1_c1);
  k.hopf_direction = (k.a0_bar > 0.0) ? HopfDirection::AboveC0 : HopfDirection::BelowC0;
  k.homoclinic_direction =
      (fp1 > k.c1) ? HomoclinicDirection::BelowC1 : HomoclinicDirection::AboveC1;
  return k;
}

const HypothesisCheck& HypothesisReport::get(const std::string& id) const {
  for (const auto& c : checks) {
    if (c.id == id) return c;
  }
  throw Error("unknown hypothesis id '" + id + "'");
}

HypothesisReport verify_hypotheses(const ModelSpec& m, const ModelOptions& opts) {
  HypothesisReport rep;

  // H1: smoothness is not machine-checkable; the expression grammar only
  // admits functions smooth away from domain errors.
  rep.checks.push_back({"H1", Verdict::Holds, 0.0,
                        "holds by construction for the supported function classes"});

  // H2: sign sampling of g on (0,1) and (-10,0), plus g'(0) > 0 and g'(1) < 0.
  {
    HypothesisCheck c{"H2", Verdict::Holds, 0.0,
                      "sampled sign pattern; u > 1 not checked (outside the verified region)"};
    const double gp0 = m.g(0.0).v1, gp1 = m.g(1.0).v1;
    double worst = std::min(gp0, -gp1);
    const int n = 10000;
    for (int i = 1; i < n && c.verdict == Verdict::Holds; ++i) {
      const double u1 = static_cast<double>(i) / n;
      if (m.g(u1).v0 <= 0.0) {
        c.verdict = Verdict::Fails;
        c.note = "g <= 0 at u = " + std::to_string(u1);
      }
      const double u2 = -10.0 * static_cast<double>(i) / n;
      if (m.g(u2).v0 >= 0.0) {
        c.verdict = Verdict::Fails;
        c.note = "g >= 0 at u = " + std::to_string(u2);
      }
    }
    if (gp0 <= 0.0 || gp1 >= 0.0) {
      c.verdict = Verdict::Fails;
      c.note = "endpoint slopes g'(0) = " + std::to_string(gp0) +
               ", g'(1) = " + std::to_string(gp1);
    }
    c.witness = worst;
    rep.checks.push_back(c);
  }

  // H3: existence of u*
  double u_star = 0.0;
  {
    HypothesisCheck c{"H3", Verdict::Holds, 0.0, ""};
    try {
      u_star = find_ustar(m, opts);
      c.witness = u_star;
      c.note = "u* bracketed and refined";
    } catch (const Error& e) {
      c.verdict = Verdict::Fails;
      c.note = e.what();
    }
    rep.checks.push_back(c);
  }

  // H4: |a0_bar| > 1e-8
  double a0_bar = 0.0;
  {
    HypothesisCheck c{"H4", Verdict::Holds, 0.0, ""};
    try {
      a0_bar = lyapunov_coefficient(m);
      c.witness = a0_bar;
      if (std::abs(a0_bar) <= 1e-8) {
        c.verdict = Verdict::Fails;
        c.note = "a0_bar vanishes to tolerance";
      }
    } catch (const Error& e) {
      c.verdict = Verdict::NumericallyIndeterminate;
      c.note = e.what();
    }
    rep.checks.push_back(c);
  }

  // H5 and H6 need the Melnikov integrals
  {
    HypothesisCheck c5{"H5", Verdict::NumericallyIndeterminate, 0.0, ""};
    HypothesisCheck c6{"H6", Verdict::NumericallyIndeterminate, 0.0, ""};
    if (rep.get("H3").verdict == Verdict::Holds) {
      const MelnikovConstants mel = melnikov_constants(m, u_star, opts);
      const double lhs = mel.I0 * mel.J, rhs = mel.L * mel.I1;
      c5.witness = lhs - rhs;
      c5.note = "I0*J = " + std::to_string(lhs) + " vs L*I1 = " + std::to_string(rhs);
      c5.verdict = (std::abs(lhs - rhs) > 1e-6 * (std::abs(lhs) + std::abs(rhs)))
                       ? Verdict::Holds
                       : Verdict::Fails;
      const double c1 = mel.I1 / mel.I0, fp1 = m.f(1.0).v1;
      c6.witness = fp1 - c1;
      c6.note = "f'(1) = " + std::to_string(fp1) + " vs c1 = " + std::to_string(c1);
      c6.verdict = (std::abs(fp1 - c1) > 1e-8) ? Verdict::Holds : Verdict::Fails;
    } else {
      c5.note = c6.note = "skipped: H3 failed";
    }
    rep.checks.push_back(c5);
    rep.checks.push_back(c6);
  }
  return rep;
}

}  // namespace vbl
