// Command-line front end: traveling-wave existence and Floquet/Evans spectral
// analysis for scalar viscous balance laws u_t + f(u)_x = u_xx + g(u).
//
// Subcommands: analyze | pulse | orbit | spectrum | evans | reproduce.
// Exit codes: 0 success, 1 computational/usage error, 2 hypothesis-failure
// verdict.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vbl/errors.hpp"
#include "vbl/io.hpp"
#include "vbl/model.hpp"
#include "vbl/spectrum.hpp"
#include "vbl/waves.hpp"

namespace fs = std::filesystem;
using namespace vbl;

namespace {

struct GlobalConfig {
  std::string model_selector;
  std::string out_dir = ".";
  bool json_stdout = false;
  double tol_ode = 1e-10;
  double tol_quad = 1e-10;
  int threads = 0;
};

void add_common(CLI::App* cmd, GlobalConfig& cfg) {
  cmd->add_option("model,--model", cfg.model_selector,
                  "builtin model name or path to a model JSON file")
      ->required();
  cmd->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
  cmd->add_flag("--json", cfg.json_stdout, "also print the JSON report to stdout");
  cmd->add_option("--tol-ode", cfg.tol_ode, "ODE relative tolerance")->capture_default_str();
  cmd->add_option("--tol-quad", cfg.tol_quad, "quadrature tolerance")->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "worker cap for spectral sweeps (0 = hardware)")
      ->capture_default_str();
}

ModelOptions model_opts(const GlobalConfig& cfg) {
  ModelOptions o;
  o.quad_tol = cfg.tol_quad;
  return o;
}

WaveOptions wave_opts(const GlobalConfig& cfg) {
  WaveOptions o;
  o.ode_rtol = cfg.tol_ode;
  o.ode_atol = cfg.tol_ode * 1e-2;
  o.quad_tol = cfg.tol_quad;
  return o;
}

SpectrumOptions spectrum_opts(const GlobalConfig& cfg) {
  SpectrumOptions o;
  o.ode_rtol = cfg.tol_ode;
  o.ode_atol = cfg.tol_ode * 1e-2;
  o.threads = cfg.threads;
  return o;
}

std::string out_path(const GlobalConfig& cfg, const std::string& file) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / file).string();
}

const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    default: return "numerically_indeterminate";
  }
}

const char* kind_str(WaveKind k) {
  switch (k) {
    case WaveKind::Pulse: return "pulse";
    case WaveKind::PeriodicSmall: return "periodic_small";
    default: return "periodic_large";
  }
}

void emit_json(const GlobalConfig& cfg, const std::string& file, const JsonWriter& jw) {
  write_text_file(out_path(cfg, file), jw.str() + "\n");
  if (cfg.json_stdout) std::cout << jw.str() << "\n";
}

void meta_block(JsonWriter& jw, const GlobalConfig& cfg, const std::string& command) {
  jw.key("meta").begin_object();
  jw.kv("tool_version", kToolVersion);
  jw.kv("command", command);
  jw.kv("model", cfg.model_selector);
  jw.kv("tol_ode", cfg.tol_ode);
  jw.kv("tol_quad", cfg.tol_quad);
  jw.end_object();
}

// ---------------------------------------------------------------------------

int cmd_analyze(const GlobalConfig& cfg) {
  ModelSpec m = resolve_model(cfg.model_selector);
  HypothesisReport rep = verify_hypotheses(m, model_opts(cfg));
  ModelConstants k = derive_constants(m, model_opts(cfg));

  std::printf("model: %s\n", m.name.c_str());
  std::printf("%-4s %-10s %-14s %s\n", "id", "verdict", "witness", "note");
  for (const auto& c : rep.checks) {
    std::printf("%-4s %-10s %-14.6g %s\n", c.id.c_str(), verdict_str(c.verdict), c.witness,
                c.note.c_str());
  }
  std::printf("\nconstants:\n");
  std::printf("  u*      = %-12.8g beta  = %-12.8g\n", k.u_star, k.beta);
  std::printf("  I0      = %-12.8g I1    = %-12.8g\n", k.I0, k.I1);
  std::printf("  J       = %-12.8g L     = %-12.8g\n", k.J, k.L);
  std::printf("  c0      = %-12.8g c1    = %-12.8g\n", k.c0, k.c1);
  std::printf("  a0_bar  = %-12.8g Sigma0= %-12.8g\n", k.a0_bar, k.sigma0);
  std::printf("  T0      = %-12.8g kappa = %-12.8g\n", k.T0, k.kappa);
  std::printf("  hopf side: %s    homoclinic side: %s\n",
              k.hopf_direction == HopfDirection::AboveC0 ? "above_c0" : "below_c0",
              k.homoclinic_direction == HomoclinicDirection::BelowC1 ? "below_c1" : "above_c1");

  JsonWriter jw;
  jw.begin_object();
  meta_block(jw, cfg, "analyze");
  jw.key("hypotheses").begin_object();
  for (const auto& c : rep.checks) {
    jw.key(c.id).begin_object();
    jw.kv("verdict", verdict_str(c.verdict));
    jw.kv("witness", c.witness);
    jw.kv("note", c.note);
    jw.end_object();
  }
  jw.end_object();
  jw.key("constants").begin_object();
  jw.kv("u_star", k.u_star).kv("beta", k.beta);
  jw.kv("I0", k.I0).kv("I1", k.I1).kv("J", k.J).kv("L", k.L);
  jw.kv("c0", k.c0).kv("c1", k.c1).kv("a0_bar", k.a0_bar).kv("sigma0", k.sigma0);
  jw.kv("T0", k.T0).kv("kappa", k.kappa);
  jw.kv("lambda1_c1", k.lambda1_c1).kv("lambda2_c1", k.lambda2_c1);
  jw.kv("hopf_direction",
        k.hopf_direction == HopfDirection::AboveC0 ? "above_c0" : "below_c0");
  jw.kv("homoclinic_direction",
        k.homoclinic_direction == HomoclinicDirection::BelowC1 ? "below_c1" : "above_c1");
  jw.end_object();
  jw.kv("all_hypotheses_hold", rep.all_hold());
  jw.end_object();
  emit_json(cfg, "analyze_" + m.name + ".json", jw);

  return rep.all_hold() ? 0 : 2;
}

int cmd_pulse(const GlobalConfig& cfg, bool no_refine, int samples) {
  ModelSpec m = resolve_model(cfg.model_selector);
  ModelConstants k = derive_constants(m, model_opts(cfg));
  PulseResult p = compute_pulse(m, k, !no_refine, wave_opts(cfg));
  const double E = nondegeneracy_certificate(m, p.profile, 0.0, cfg.tol_quad);

  Metadata meta = {{"model", m.name},
                   {"command", "pulse"},
                   {"c_star", format_double(p.c_star)},
                   {"refine", no_refine ? "false" : "true"}};
  write_profile_csv(out_path(cfg, "pulse_" + m.name + ".csv"), p.profile, samples, meta);

  JsonWriter jw;
  jw.begin_object();
  meta_block(jw, cfg, "pulse");
  jw.kv("refined", !no_refine);
  jw.kv("c_star", p.c_star);
  jw.kv("c1_melnikov", p.c_melnikov);
  jw.kv("gap", p.gap);
  jw.kv("kappa", k.kappa);
  jw.kv("lambda1", p.lambda1);
  jw.kv("lambda2", p.lambda2);
  jw.kv("turning_u", p.profile.turning_u);
  jw.kv("truncation_z", p.profile.z_right);
  jw.kv("E_certificate", E);
  jw.end_object();
  emit_json(cfg, "pulse_" + m.name + ".json", jw);

  std::printf("pulse %s: c* = %.10g (c1 = %.10g, gap = %.3g), E = %.6g\n", m.name.c_str(),
              p.c_star, p.c_melnikov, p.gap, E);
  return 0;
}

int cmd_orbit(const GlobalConfig& cfg, const std::string& family, double eps, int samples,
              bool no_refine) {
  if (!(eps > 0.0) || eps > 0.05) {
    throw Error("--eps must lie in (0, 0.05]");
  }
  ModelSpec m = resolve_model(cfg.model_selector);
  ModelConstants k = derive_constants(m, model_opts(cfg));
  WaveProfile w;
  if (family == "small") {
    w = compute_periodic_small(m, k, eps, wave_opts(cfg));
  } else if (family == "large") {
    PulseResult p = compute_pulse(m, k, !no_refine, wave_opts(cfg));
    w = compute_periodic_large(m, k, eps, p.profile, wave_opts(cfg));
  } else {
    throw Error("--family must be 'small' or 'large'");
  }

  const std::string stem = "orbit_" + family + "_" + m.name;
  Metadata meta = {{"model", m.name},
                   {"command", "orbit"},
                   {"family", family},
                   {"epsilon", format_double(eps)},
                   {"c", format_double(w.speed)}};
  write_profile_csv(out_path(cfg, stem + ".csv"), w, samples, meta);

  JsonWriter jw;
  jw.begin_object();
  meta_block(jw, cfg, "orbit");
  jw.kv("family", family);
  jw.kv("epsilon", eps);
  jw.kv("c", w.speed);
  jw.kv("period", w.period);
  jw.kv("amplitude", w.amplitude);
  jw.kv("section_u", w.turning_u);
  jw.end_object();
  emit_json(cfg, stem + ".json", jw);

  std::printf("orbit %s %s eps=%g: c = %.10g, T = %.10g, amplitude = %.6g\n", family.c_str(),
              m.name.c_str(), eps, w.speed, w.period, w.amplitude);
  return 0;
}

int cmd_spectrum(const GlobalConfig& cfg, const std::string& family, double eps,
                 bool zero_profile, std::vector<double> window, int theta_count, int n_modes,
                 bool no_refine) {
  ModelSpec m = resolve_model(cfg.model_selector);
  ModelConstants k = derive_constants(m, model_opts(cfg));
  const SpectrumOptions sopts = spectrum_opts(cfg);

  LinearizedCoefficients lc;
  double lambda0 = 0.0;
  WaveProfile wave;
  std::string stem;
  if (zero_profile) {
    const double gp0 = m.g(0.0).v1;
    lc = LinearizedCoefficients::constant(0.0, gp0, k.T0);
    if (window.empty()) window = {-2.0, gp0 + 0.5, -1.0, 1.0};
    stem = "spectrum_zero_" + m.name;
  } else if (family == "small") {
    if (!(eps > 0.0)) throw Error("--eps required for --family small");
    wave = compute_periodic_small(m, k, eps, wave_opts(cfg));
    lc = linearize(m, wave);
    if (window.empty()) window = {-0.5, 1.5, -1.0, 1.0};
    stem = "spectrum_small_" + m.name;
  } else if (family == "large") {
    if (!(eps > 0.0)) throw Error("--eps required for --family large");
    PulseResult p = compute_pulse(m, k, !no_refine, wave_opts(cfg));
    LinearizedCoefficients lc_pulse = linearize(m, p.profile);
    lambda0 = pulse_unstable_eigenvalue(lc_pulse, sopts);
    wave = compute_periodic_large(m, k, eps, p.profile, wave_opts(cfg));
    lc = linearize(m, wave);
    if (window.empty()) window = {lambda0 - 0.3, lambda0 + 0.3, -0.3, 0.3};
    stem = "spectrum_large_" + m.name;
  } else {
    throw Error("give --family small|large or --zero-profile");
  }
  if (window.size() != 4) throw Error("--window needs four numbers: re_lo re_hi im_lo im_hi");

  FloquetResult fr = floquet_spectrum(lc, LambdaWindow{window[0], window[1], window[2], window[3]},
                                      theta_count, n_modes, sopts);

  Metadata meta = {{"model", m.name},
                   {"command", "spectrum"},
                   {"family", zero_profile ? "zero-profile" : family},
                   {"epsilon", format_double(eps)},
                   {"theta_count", std::to_string(theta_count)},
                   {"n_modes", std::to_string(n_modes)}};
  write_spectrum_csv(out_path(cfg, stem + ".csv"), fr, meta);

  JsonWriter jw;
  jw.begin_object();
  meta_block(jw, cfg, "spectrum");
  jw.kv("family", zero_profile ? "zero-profile" : family);
  jw.kv("epsilon", eps);
  jw.kv("theta_count", theta_count);
  jw.kv("n_modes", n_modes);
  jw.kv("points", static_cast<int>(fr.points.size()));
  jw.kv("max_real_part", fr.max_real_part);
  jw.kv("verdict", fr.verdict == StabilityVerdict::SpectrallyUnstable ? "spectrally_unstable"
                                                                      : "no_instability_found");
  if (!zero_profile) {
    InstabilityReport rep = instability_report(m, wave, fr, k, lambda0);
    jw.key("report").begin_object();
    jw.kv("family", kind_str(rep.family));
    jw.kv("gap_to_gp0", rep.gap_to_gp0);
    jw.kv("gap_over_sqrt_eps", rep.gap_over_sqrt_eps);
    if (family == "large") {
      jw.kv("lambda0", lambda0);
      jw.kv("loop_points", rep.loop_points);
      jw.kv("loop_conjugation_closed", rep.loop_conjugation_closed);
      jw.kv("loop_unstable", rep.loop_unstable);
      jw.kv("loop_max_dist_to_lambda0", rep.loop_max_dist_to_lambda0);
      jw.kv("loop_center_re", rep.loop_center.real());
      jw.kv("loop_center_im", rep.loop_center.imag());
    }
    jw.end_object();
  }
  jw.end_object();
  emit_json(cfg, stem + ".json", jw);

  std::printf("spectrum %s: %zu points, max Re lambda = %.8g -> %s\n", stem.c_str(),
              fr.points.size(), fr.max_real_part,
              fr.verdict == StabilityVerdict::SpectrallyUnstable ? "spectrally_unstable"
                                                                 : "no_instability_found");
  return 0;
}

int cmd_evans(const GlobalConfig& cfg, int scan_count, bool no_refine) {
  ModelSpec m = resolve_model(cfg.model_selector);
  ModelConstants k = derive_constants(m, model_opts(cfg));
  PulseResult p = compute_pulse(m, k, !no_refine, wave_opts(cfg));
  LinearizedCoefficients lc = linearize(m, p.profile);
  const SpectrumOptions sopts = spectrum_opts(cfg);

  const double lambda0 = pulse_unstable_eigenvalue(lc, sopts);
  EvansSample d0 = homoclinic_evans(lc, Cplx(0.0, 0.0), sopts);

  const double lam_max = 4.0 * std::max(1.0, m.g(0.0).v1);
  std::string csv = "# tool_version=" + std::string(kToolVersion) + "\n# model=" + m.name +
                    "\n# command=evans\nlambda_re,lambda_im,d_re,d_im,abs_d\n";
  for (int i = 0; i <= scan_count; ++i) {
    const double lam = 1e-3 + (lam_max - 1e-3) * i / scan_count;
    const EvansSample s = homoclinic_evans(lc, Cplx(lam, 0.0), sopts);
    csv += format_double(lam) + ",0," + format_double(s.value.real()) + "," +
           format_double(s.value.imag()) + "," + format_double(std::abs(s.value)) + "\n";
  }
  write_text_file(out_path(cfg, "evans_" + m.name + ".csv"), csv);

  JsonWriter jw;
  jw.begin_object();
  meta_block(jw, cfg, "evans");
  jw.kv("c_star", p.c_star);
  jw.kv("lambda0", lambda0);
  jw.kv("d_at_zero_abs", std::abs(d0.value));
  jw.kv("d_at_zero_scale", d0.scale);
  jw.kv("scan_max_lambda", lam_max);
  jw.end_object();
  emit_json(cfg, "evans_" + m.name + ".json", jw);

  std::printf("evans %s: lambda0 = %.10g, |D(0)| = %.3g (scale %.3g)\n", m.name.c_str(), lambda0,
              std::abs(d0.value), d0.scale);
  return 0;
}

struct GoldenEntry {
  const char* key;
  double want;
  double tol;
};

int cmd_reproduce(const GlobalConfig& cfg) {
  ModelSpec m = resolve_model(cfg.model_selector);
  ModelConstants k = derive_constants(m, model_opts(cfg));

  std::vector<GoldenEntry> goldens;
  if (m.name == "burgers-fisher") {
    goldens = {{"u_star", -0.5, 1e-8},     {"I0", 0.6, 1e-8},
               {"I1", 3.0 / 35.0, 1e-7},   {"L", 4.07339, 5e-5},
               {"J", 0.6920623, 5e-5},     {"c1", 1.0 / 7.0, 1e-7},
               {"a0_bar", 2.0, 1e-8},      {"I0J", 0.415237, 5e-5},
               {"LI1", 0.349148, 5e-5}};
  } else if (m.name == "buckley-leverett-logistic") {
    goldens = {{"u_star", -0.5, 1e-8},     {"I0", 0.6, 1e-8},
               {"I1", 0.353458, 5e-6},     {"L", 4.07339, 5e-5},
               {"J", 1.62723, 5e-5},       {"c1", 0.589097, 1e-5},
               {"a0_bar", 32.0, 1e-8},     {"I0J", 0.976335, 5e-5},
               {"LI1", 1.43977, 5e-5}};
  } else if (m.name == "modified-gbf") {
    goldens = {{"u_star", -0.72212, 5e-5}, {"I0", 0.979027, 5e-6},
               {"I1", -0.129571, 5e-6},    {"L", 5.02904, 5e-5},
               {"J", -1.27529, 5e-5},      {"c1", -0.132347, 1e-5},
               {"a0_bar", -2.0, 1e-8},     {"I0J", -1.24854, 5e-5},
               {"LI1", -0.651619, 5e-5}};
  } else {
    throw Error("reproduce only covers the builtin models");
  }

  auto got_of = [&](const std::string& key) {
    if (key == "u_star") return k.u_star;
    if (key == "I0") return k.I0;
    if (key == "I1") return k.I1;
    if (key == "L") return k.L;
    if (key == "J") return k.J;
    if (key == "c1") return k.c1;
    if (key == "a0_bar") return k.a0_bar;
    if (key == "I0J") return k.I0 * k.J;
    return k.L * k.I1;  // LI1
  };

  JsonWriter jw;
  jw.begin_object();
  meta_block(jw, cfg, "reproduce");
  jw.key("checks").begin_array();
  bool all_ok = true;
  std::printf("reproduce %s\n%-8s %-22s %-22s %-10s %s\n", m.name.c_str(), "key", "got", "want",
              "tol", "status");
  for (const GoldenEntry& g : goldens) {
    const double got = got_of(g.key);
    const bool ok = std::abs(got - g.want) <= g.tol;
    all_ok = all_ok && ok;
    std::printf("%-8s %-22.12g %-22.12g %-10.2g %s\n", g.key, got, g.want, g.tol,
                ok ? "pass" : "FAIL");
    jw.begin_object();
    jw.kv("key", g.key);
    jw.kv("got", got);
    jw.kv("want", g.want);
    jw.kv("tol", g.tol);
    jw.kv("pass", ok);
    jw.end_object();
  }
  jw.end_array();
  jw.kv("all_pass", all_ok);
  jw.end_object();
  emit_json(cfg, "reproduce_" + m.name + ".json", jw);
  std::printf("%s\n", all_ok ? "all pass" : "FAILURES present");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"traveling waves and spectral instability for scalar viscous balance laws"};
  app.require_subcommand(1);

  GlobalConfig cfg;
  bool no_refine = false;
  int samples = 2001;
  std::string family;
  double eps = 0.0;
  bool zero_profile = false;
  std::vector<double> window;
  int theta_count = 64;
  int n_modes = 32;
  int scan_count = 100;

  CLI::App* analyze = app.add_subcommand("analyze", "verify hypotheses and derive constants");
  add_common(analyze, cfg);

  CLI::App* pulse = app.add_subcommand("pulse", "compute the traveling pulse by shooting");
  add_common(pulse, cfg);
  pulse->add_flag("--no-refine", no_refine, "use the Melnikov speed c1 without shooting");
  pulse->add_option("--samples", samples, "CSV resolution")->capture_default_str();

  CLI::App* orbit = app.add_subcommand("orbit", "compute a periodic wave from one family");
  add_common(orbit, cfg);
  orbit->add_option("--family", family, "small | large")->required();
  orbit->add_option("--eps", eps, "distance to the critical speed")->required();
  orbit->add_option("--samples", samples, "CSV resolution")->capture_default_str();
  orbit->add_flag("--no-refine", no_refine, "anchor the large family at c1 instead of c*");

  CLI::App* spectrum = app.add_subcommand("spectrum", "Floquet spectrum of a computed wave");
  add_common(spectrum, cfg);
  spectrum->add_option("--family", family, "small | large");
  spectrum->add_option("--eps", eps, "distance to the critical speed");
  spectrum->add_flag("--zero-profile", zero_profile, "constant-coefficient dispersion oracle");
  spectrum->add_option("--window", window, "lambda window: re_lo re_hi im_lo im_hi")->expected(4);
  spectrum->add_option("--theta", theta_count, "Bloch grid size")->capture_default_str();
  spectrum->add_option("--modes", n_modes, "Hill truncation")->capture_default_str();
  spectrum->add_flag("--no-refine", no_refine, "anchor the large family at c1 instead of c*");

  CLI::App* evans = app.add_subcommand("evans", "homoclinic Evans function of the pulse");
  add_common(evans, cfg);
  evans->add_option("--scan-count", scan_count, "real-axis scan resolution")
      ->capture_default_str();
  evans->add_flag("--no-refine", no_refine, "use the Melnikov speed c1 without shooting");

  CLI::App* reproduce =
      app.add_subcommand("reproduce", "check the published constants for a builtin model");
  add_common(reproduce, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors are exit 1; --help is success
  }

  try {
    if (analyze->parsed()) return cmd_analyze(cfg);
    if (pulse->parsed()) return cmd_pulse(cfg, no_refine, samples);
    if (orbit->parsed()) return cmd_orbit(cfg, family, eps, samples, no_refine);
    if (spectrum->parsed())
      return cmd_spectrum(cfg, family, eps, zero_profile, window, theta_count, n_modes,
                          no_refine);
    if (evans->parsed()) return cmd_evans(cfg, scan_count, no_refine);
    if (reproduce->parsed()) return cmd_reproduce(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
