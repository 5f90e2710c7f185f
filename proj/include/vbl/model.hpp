#ifndef VBL_MODEL_HPP
#define VBL_MODEL_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "vbl/jet.hpp"

namespace vbl {

// A scalar viscous balance law u_t + f(u)_x = u_xx + g(u), with f and g
// supplied as jet-valued callables (value plus three derivatives).
// Immutable and shareable across threads.
struct ModelSpec {
  std::string name;
  std::function<Jet3(double)> f;
  std::function<Jet3(double)> g;
  enum class Source { Builtin, Parsed } source = Source::Builtin;
  std::string f_text;  // for parsed models
  std::string g_text;
};

// Builtin names: "burgers-fisher", "buckley-leverett-logistic", "modified-gbf".
// The builtins are hard-coded closed forms (not parsed) and act as parser
// cross-checks. Throws ModelConstructionError for unknown names.
ModelSpec make_builtin(const std::string& name);
std::vector<std::string> builtin_names();

// Parses flux/reaction expressions and validates g(0) = g(1) = 0 to 1e-12.
ModelSpec make_parsed_model(const std::string& name, const std::string& f_text,
                            const std::string& g_text);

// Loads {"name": str, "f": expr, "g": expr} from a JSON file.
ModelSpec model_from_json_file(const std::string& path);

// Resolves a CLI model selector: builtin name or path to a model JSON file.
ModelSpec resolve_model(const std::string& selector);

struct MelnikovConstants {
  double I0, I1, J, L;
};

enum class HopfDirection { AboveC0, BelowC0 };
enum class HomoclinicDirection { AboveC1, BelowC1 };

struct ModelConstants {
  double u_star = 0.0;
  double beta = 0.0;  // energy level of the saddle, int_0^1 g
  double I0 = 0.0, I1 = 0.0, J = 0.0, L = 0.0;
  double c0 = 0.0;      // f'(0)
  double c1 = 0.0;      // I1/I0
  double a0_bar = 0.0;  // f'''(0) - f''(0) g''(0)/sqrt(g'(0))
  double sigma0 = 0.0;  // f'(1) - c1, saddle quantity
  double T0 = 0.0;      // 2*pi/sqrt(g'(0))
  double kappa = 0.0;   // min(lambda2(c1), -lambda1(c1))
  double lambda1_c1 = 0.0, lambda2_c1 = 0.0;
  HopfDirection hopf_direction = HopfDirection::AboveC0;
  HomoclinicDirection homoclinic_direction = HomoclinicDirection::BelowC1;
};

enum class Verdict { Holds, Fails, NumericallyIndeterminate };

struct HypothesisCheck {
  std::string id;       // "H1".."H6"
  Verdict verdict = Verdict::NumericallyIndeterminate;
  double witness = 0.0;  // the quantity that decides the verdict
  std::string note;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  bool all_hold() const {
    for (const auto& c : checks) {
      if (c.verdict != Verdict::Holds) return false;
    }
    return true;
  }
  const HypothesisCheck& get(const std::string& id) const;
};

struct ModelOptions {
  double quad_tol = 1e-10;
  double root_tol = 1e-12;
};

// Antiderivative of the reaction, int_0^u g, by adaptive quadrature.
double reaction_potential(const ModelSpec& m, double u, double quad_tol = 1e-12);

// The unique u* < 0 with int_{u*}^1 g = 0, found by geometric bracket
// expansion from -1 and Brent refinement. Throws NoBracketFound.
double find_ustar(const ModelSpec& m, const ModelOptions& opts = {});

// gamma(u) = sqrt(2 int_u^1 g), defined on (u_star, 1); clamps to 0 at the
// endpoints and throws OutOfRange outside [u_star, 1].
double gamma(const ModelSpec& m, double u_star, double u, double quad_tol = 1e-12);

// I0 = int gamma, I1 = int f' gamma (plain adaptive); J = 2 int f' sqrt(1+gamma'^2),
// L = 2 int sqrt(1+gamma'^2) with both endpoints singular and
// gamma'(u) = -g(u)/gamma(u) evaluated analytically.
MelnikovConstants melnikov_constants(const ModelSpec& m, double u_star,
                                     const ModelOptions& opts = {});

// a0_bar of the genericity condition; requires g'(0) > 0.
double lyapunov_coefficient(const ModelSpec& m);

ModelConstants derive_constants(const ModelSpec& m, const ModelOptions& opts = {});

HypothesisReport verify_hypotheses(const ModelSpec& m, const ModelOptions& opts = {});

}  // namespace vbl

#endif
