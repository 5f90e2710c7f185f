#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

#ifndef VBLWAVE_BIN
#error "VBLWAVE_BIN must point at the CLI binary"
#endif

const std::string kBin = VBLWAVE_BIN;

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run(const std::string& args) {
  const std::string out = (fs::temp_directory_path() / "vblwave_cli_stdout.txt").string();
  const std::string cmd = kBin + " " + args + " > " + out + " 2>&1";
  const int rc = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return RunResult{WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("vblwave_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("analyze: builtin model passes with exit 0 and a JSON report") {
  fs::path dir = fresh_dir("analyze");
  RunResult r = run("analyze burgers-fisher --out " + dir.string());
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "analyze_burgers-fisher.json"));
  CHECK(j["all_hypotheses_hold"].get<bool>());
  CHECK(j["constants"]["I0"].get<double>() == doctest::Approx(0.6).epsilon(1e-8));
  CHECK(j["constants"]["c1"].get<double>() == doctest::Approx(1.0 / 7.0).epsilon(1e-8));
  CHECK(j["meta"]["model"].get<std::string>() == "burgers-fisher");
}

TEST_CASE("analyze: modified-gbf reports the subcritical side") {
  fs::path dir = fresh_dir("analyze_mgbf");
  RunResult r = run("analyze modified-gbf --out " + dir.string());
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "analyze_modified-gbf.json"));
  CHECK(j["constants"]["a0_bar"].get<double>() == doctest::Approx(-2.0));
  CHECK(j["constants"]["hopf_direction"].get<std::string>() == "below_c0");
}

TEST_CASE("analyze: hypothesis failure exits 2, construction error exits 1") {
  fs::path dir = fresh_dir("analyze_bad");
  {
    std::ofstream f(dir / "h4fail.json");
    f << R"json({"name": "h4fail", "f": "0.25*u^4", "g": "u*(1-u)"})json";
  }
  RunResult r = run("analyze " + (dir / "h4fail.json").string() + " --out " + dir.string());
  CHECK(r.exit_code == 2);

  {
    std::ofstream f(dir / "bad.json");
    f << R"json({"name": "bad", "f": "0.5*u^2", "g": "u*(1-u)+0.5"})json";
  }
  RunResult r2 = run("analyze " + (dir / "bad.json").string() + " --out " + dir.string());
  CHECK(r2.exit_code == 1);

  RunResult r3 = run("analyze no-such-file.json --out " + dir.string());
  CHECK(r3.exit_code == 1);
}

TEST_CASE("pulse: refinement off pins c* to the Melnikov speed") {
  fs::path dir = fresh_dir("pulse");
  RunResult r = run("pulse burgers-fisher --no-refine --out " + dir.string());
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "pulse_burgers-fisher.json"));
  CHECK(j["c_star"].get<double>() == j["c1_melnikov"].get<double>());
  CHECK(j["gap"].get<double>() == 0.0);
  CHECK(j["E_certificate"].get<double>() < 0.0);

  // profile CSV exists with a metadata header and the z,U,V column order
  const std::string csv = slurp(dir / "pulse_burgers-fisher.csv");
  CHECK(csv.find("# tool_version=") != std::string::npos);
  CHECK(csv.find("z,U,V\n") != std::string::npos);
}

TEST_CASE("orbit: small family at eps = 0.005") {
  fs::path dir = fresh_dir("orbit_small");
  RunResult r = run("orbit burgers-fisher --family small --eps 0.005 --out " + dir.string());
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "orbit_small_burgers-fisher.json"));
  CHECK(std::abs(j["period"].get<double>() - 2.0 * 3.14159265358979) < 0.1);
  CHECK(j["c"].get<double>() == doctest::Approx(0.005));
}

TEST_CASE("orbit: argument validation failures exit 1") {
  fs::path dir = fresh_dir("orbit_bad");
  CHECK(run("orbit burgers-fisher --family small --eps -1 --out " + dir.string()).exit_code == 1);
  CHECK(run("orbit burgers-fisher --family nope --eps 0.01 --out " + dir.string()).exit_code == 1);
  CHECK(run("orbit burgers-fisher --family small --out " + dir.string()).exit_code == 1);
}

TEST_CASE("spectrum: zero-profile dispersion oracle") {
  fs::path dir = fresh_dir("spectrum_zero");
  RunResult r = run("spectrum burgers-fisher --zero-profile --theta 16 --out " + dir.string());
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "spectrum_zero_burgers-fisher.json"));
  CHECK(j["verdict"].get<std::string>() == "spectrally_unstable");
  CHECK(j["max_real_part"].get<double>() == doctest::Approx(1.0).epsilon(1e-7));
  const std::string csv = slurp(dir / "spectrum_zero_burgers-fisher.csv");
  CHECK(csv.find("theta,re_lambda,im_lambda,abs_D\n") != std::string::npos);
}

TEST_CASE("spectrum: identical configurations give byte-identical reports") {
  fs::path dir1 = fresh_dir("det1");
  fs::path dir2 = fresh_dir("det2");
  const std::string args = "spectrum burgers-fisher --family small --eps 0.01 --theta 12 "
                           "--modes 16 --out ";
  CHECK(run(args + dir1.string() + " --threads 3").exit_code == 0);
  CHECK(run(args + dir2.string() + " --threads 1").exit_code == 0);
  // byte-identical regardless of scheduling
  CHECK(slurp(dir1 / "spectrum_small_burgers-fisher.json") ==
        slurp(dir2 / "spectrum_small_burgers-fisher.json"));
  CHECK(slurp(dir1 / "spectrum_small_burgers-fisher.csv") ==
        slurp(dir2 / "spectrum_small_burgers-fisher.csv"));
}

TEST_CASE("reproduce: all builtin models pass against the stored goldens") {
  fs::path dir = fresh_dir("reproduce");
  for (const std::string name : {"burgers-fisher", "buckley-leverett-logistic", "modified-gbf"}) {
    RunResult r = run("reproduce " + name + " --out " + dir.string());
    CHECK_MESSAGE(r.exit_code == 0, name, ": ", r.stdout_text);
    auto j = nlohmann::json::parse(slurp(dir / ("reproduce_" + name + ".json")));
    CHECK(j["all_pass"].get<bool>());
  }
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run("").exit_code != 0);
  CHECK(run("frobnicate burgers-fisher").exit_code != 0);
}
