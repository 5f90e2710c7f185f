#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vbl/errors.hpp"
#include "vbl/model.hpp"

using namespace vbl;

TEST_CASE("builtins construct and validate the reaction zeros") {
  for (const std::string& name : builtin_names()) {
    ModelSpec m = make_builtin(name);
    CHECK(std::abs(m.g(0.0).v0) <= 1e-12);
    CHECK(std::abs(m.g(1.0).v0) <= 1e-12);
  }
  CHECK_THROWS_AS(make_builtin("no-such-model"), ModelConstructionError);
  CHECK_THROWS_AS(make_parsed_model("bad", "0.5*u^2", "u*(1-u)+0.5"), ModelConstructionError);
}

TEST_CASE("builtin jets against the parsed expressions") {
  // the hard-coded closed forms and the parser must agree
  struct Pair {
    std::string name, f, g;
  };
  const Pair pairs[] = {
      {"burgers-fisher", "0.5*u^2", "u*(1-u)"},
      {"buckley-leverett-logistic", "u^2/(u^2 + 0.5*(1-u)^2)", "u*(1-u)"},
      {"modified-gbf", "0.25*u^4 - u^3/3", "u - u^4"},
  };
  for (const Pair& p : pairs) {
    ModelSpec builtin = make_builtin(p.name);
    ModelSpec parsed = make_parsed_model(p.name + "-parsed", p.f, p.g);
    for (double u = -0.9; u <= 1.2; u += 0.1) {
      const Jet3 a = builtin.f(u), b = parsed.f(u);
      CHECK(std::abs(a.v0 - b.v0) <= 1e-12 * (1.0 + std::abs(b.v0)));
      CHECK(std::abs(a.v1 - b.v1) <= 1e-11 * (1.0 + std::abs(b.v1)));
      CHECK(std::abs(a.v2 - b.v2) <= 1e-10 * (1.0 + std::abs(b.v2)));
      CHECK(std::abs(a.v3 - b.v3) <= 1e-9 * (1.0 + std::abs(b.v3)));
      const Jet3 ga = builtin.g(u), gb = parsed.g(u);
      CHECK(std::abs(ga.v0 - gb.v0) <= 1e-12 * (1.0 + std::abs(gb.v0)));
      CHECK(std::abs(ga.v3 - gb.v3) <= 1e-10 * (1.0 + std::abs(gb.v3)));
    }
  }
}

TEST_CASE("find_ustar") {
  CHECK(find_ustar(make_builtin("burgers-fisher")) == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(find_ustar(make_builtin("buckley-leverett-logistic")) ==
        doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(find_ustar(make_builtin("modified-gbf")) == doctest::Approx(-0.72211991).epsilon(1e-6));
}

TEST_CASE("gamma values and endpoints") {
  ModelSpec m = make_builtin("burgers-fisher");
  const double us = -0.5;
  CHECK(gamma(m, us, 0.0) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-9));
  CHECK(gamma(m, us, 1.0) == 0.0);
  CHECK(gamma(m, us, us) == 0.0);
  CHECK(std::abs(gamma(m, us, 1.0 - 1e-9)) <= 1e-4);
  CHECK_THROWS_AS(gamma(m, us, -0.7), OutOfRange);
  CHECK_THROWS_AS(gamma(m, us, 1.5), OutOfRange);
  // positive on the open interval
  for (double u = -0.45; u < 0.99; u += 0.05) {
    CHECK(gamma(m, us, u) > 0.0);
  }
}

TEST_CASE("melnikov constants: burgers-fisher") {
  ModelSpec m = make_builtin("burgers-fisher");
  MelnikovConstants k = melnikov_constants(m, find_ustar(m));
  CHECK(std::abs(k.I0 - 0.6) <= 1e-9);
  CHECK(std::abs(k.I1 - 3.0 / 35.0) <= 1e-9);
  CHECK(std::abs(k.L - 4.0733878) <= 5e-6);
  CHECK(std::abs(k.J - 0.6920623) <= 5e-6);
}

TEST_CASE("melnikov constants: buckley-leverett-logistic") {
  ModelSpec m = make_builtin("buckley-leverett-logistic");
  MelnikovConstants k = melnikov_constants(m, find_ustar(m));
  CHECK(std::abs(k.I0 - 0.6) <= 1e-9);
  CHECK(std::abs(k.I1 - 0.35345807) <= 1e-7);
  CHECK(std::abs(k.L - 4.0733878) <= 5e-6);
  CHECK(std::abs(k.J - 1.6272258) <= 5e-6);
}

TEST_CASE("melnikov constants: modified-gbf") {
  ModelSpec m = make_builtin("modified-gbf");
  MelnikovConstants k = melnikov_constants(m, find_ustar(m));
  CHECK(std::abs(k.I0 - 0.97902705) <= 1e-7);
  CHECK(std::abs(k.I1 - (-0.12957131)) <= 1e-7);
  CHECK(std::abs(k.L - 5.0290358) <= 5e-6);
  CHECK(std::abs(k.J - (-1.2752912)) <= 5e-6);
}

TEST_CASE("lyapunov coefficient") {
  CHECK(lyapunov_coefficient(make_builtin("burgers-fisher")) == doctest::Approx(2.0));
  CHECK(lyapunov_coefficient(make_builtin("buckley-leverett-logistic")) ==
        doctest::Approx(32.0));
  CHECK(lyapunov_coefficient(make_builtin("modified-gbf")) == doctest::Approx(-2.0));
}

TEST_CASE("derive_constants: burgers-fisher") {
  ModelConstants k = derive_constants(make_builtin("burgers-fisher"));
  CHECK(k.c0 == 0.0);
  CHECK(std::abs(k.c1 - 1.0 / 7.0) <= 1e-8);
  CHECK(std::abs(k.sigma0 - 6.0 / 7.0) <= 1e-8);
  CHECK(std::abs(k.T0 - 2.0 * M_PI) <= 1e-12);
  CHECK(std::abs(k.beta - 1.0 / 6.0) <= 1e-10);
  CHECK(k.hopf_direction == HopfDirection::AboveC0);
  CHECK(k.homoclinic_direction == HomoclinicDirection::BelowC1);
  // saddle rates at c1: (3 -/+ sqrt(58))/7
  const double s58 = std::sqrt(58.0);
  CHECK(std::abs(k.lambda1_c1 - (3.0 - s58) / 7.0) <= 1e-8);
  CHECK(std::abs(k.lambda2_c1 - (3.0 + s58) / 7.0) <= 1e-8);
  CHECK(std::abs(k.kappa - (s58 - 3.0) / 7.0) <= 1e-8);
}

TEST_CASE("derive_constants: directions for the other builtins") {
  ModelConstants bl = derive_constants(make_builtin("buckley-leverett-logistic"));
  CHECK(std::abs(bl.c1 - 0.58909679) <= 1e-6);
  CHECK(bl.hopf_direction == HopfDirection::AboveC0);
  CHECK(bl.homoclinic_direction == HomoclinicDirection::AboveC1);  // f'(1) = 0 < c1

  ModelConstants mg = derive_constants(make_builtin("modified-gbf"));
  CHECK(std::abs(mg.c1 - (-0.13234702)) <= 1e-6);
  CHECK(mg.hopf_direction == HopfDirection::BelowC0);  // a0_bar = -2
  CHECK(mg.homoclinic_direction == HomoclinicDirection::BelowC1);  // f'(1) = 0 > c1
  CHECK(std::abs(mg.T0 - 2.0 * M_PI) <= 1e-12);  // g'(0) = 1
}

TEST_CASE("verify_hypotheses: builtins all hold") {
  for (const std::string& name : builtin_names()) {
    HypothesisReport rep = verify_hypotheses(make_builtin(name));
    CHECK_MESSAGE(rep.all_hold(), "model ", name);
  }
  // published H5 witnesses
  HypothesisReport bf = verify_hypotheses(make_builtin("burgers-fisher"));
  // I0*J - L*I1 = 0.415237 - 0.349148
  CHECK(bf.get("H5").witness == doctest::Approx(0.4152374 - 0.3491475).epsilon(1e-4));
  HypothesisReport bl = verify_hypotheses(make_builtin("buckley-leverett-logistic"));
  CHECK(bl.get("H5").witness == doctest::Approx(0.976335 - 1.439772).epsilon(1e-4));
}

TEST_CASE("verify_hypotheses: flat flux fails the genericity condition") {
  ModelSpec m = make_parsed_model("h4-fail", "0.25*u^4", "u*(1-u)");
  HypothesisReport rep = verify_hypotheses(m);
  CHECK(rep.get("H4").verdict == Verdict::Fails);
  CHECK(std::abs(rep.get("H4").witness) <= 1e-12);
  CHECK(rep.get("H2").verdict == Verdict::Holds);
  CHECK(rep.get("H3").verdict == Verdict::Holds);
  CHECK_FALSE(rep.all_hold());
}

TEST_CASE("scaling properties of the Melnikov constants") {
  // g -> 4g: gamma scales by 2, so I0 and I1 scale by 2 and c1 is unchanged
  ModelSpec base = make_builtin("burgers-fisher");
  ModelSpec scaled = make_parsed_model("scaled", "0.5*u^2", "4*u*(1-u)");
  const double us_b = find_ustar(base), us_s = find_ustar(scaled);
  CHECK(us_s == doctest::Approx(us_b).epsilon(1e-9));
  MelnikovConstants kb = melnikov_constants(base, us_b);
  MelnikovConstants ks = melnikov_constants(scaled, us_s);
  CHECK(ks.I0 == doctest::Approx(2.0 * kb.I0).epsilon(1e-8));
  CHECK(ks.I1 == doctest::Approx(2.0 * kb.I1).epsilon(1e-8));
  CHECK(ks.I1 / ks.I0 == doctest::Approx(kb.I1 / kb.I0).epsilon(1e-8));

  // f -> f + const leaves every constant alone (only f' enters)
  ModelSpec shifted = make_parsed_model("shifted", "0.5*u^2 + 7", "u*(1-u)");
  MelnikovConstants kc = melnikov_constants(shifted, find_ustar(shifted));
  CHECK(kc.I1 == doctest::Approx(kb.I1).epsilon(1e-10));
  CHECK(kc.J == doctest::Approx(kb.J).epsilon(1e-8));
}

TEST_CASE("models sharing the logistic reaction share the reaction-side constants") {
  ModelSpec bf = make_builtin("burgers-fisher");
  ModelSpec bl = make_builtin("buckley-leverett-logistic");
  const double us_bf = find_ustar(bf), us_bl = find_ustar(bl);
  CHECK(std::abs(us_bf - us_bl) <= 1e-9);
  CHECK(std::abs(reaction_potential(bf, 1.0) - reaction_potential(bl, 1.0)) <= 1e-9);
  MelnikovConstants kf = melnikov_constants(bf, us_bf);
  MelnikovConstants kl = melnikov_constants(bl, us_bl);
  CHECK(std::abs(kf.I0 - kl.I0) <= 1e-9);
  CHECK(std::abs(kf.L - kl.L) <= 1e-7);
  for (double u = -0.4; u < 1.0; u += 0.2) {
    CHECK(std::abs(gamma(bf, us_bf, u) - gamma(bl, us_bl, u)) <= 1e-9);
  }
}
