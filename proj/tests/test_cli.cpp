#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("oseen_cli_" + tag + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Runs the installed command line binary with the working directory set to
// `dir`, capturing exit code and both streams.
CliResult run_cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = "cd '" + dir.string() + "' && '" + OSEEN_CLI_PATH +
                          "' " + args + " > cli_stdout.txt 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(dir / "cli_stdout.txt");
  r.err = slurp(dir / "cli_stderr.txt");
  return r;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("meshinfo prints the full refinement table") {
  const fs::path dir = fresh_dir("meshinfo");
  const CliResult r = run_cli("meshinfo", dir);
  CHECK(r.code == 0);
  // Interior velocity, pressure and coupled totals for levels 1..5.
  for (const char* number :
       {" 354", " 1474", " 6018", " 24322", " 97794",
        " 288", " 1152", " 4608", " 18432", " 73728",
        " 642", " 2626", " 10626", " 42754", " 171522"})
    CHECK_MESSAGE(contains(r.out, number), "missing ", number);
  fs::remove_all(dir);
}

TEST_CASE("meshinfo exports mesh files on request") {
  const fs::path dir = fresh_dir("meshexport");
  const CliResult r = run_cli("meshinfo --levels 1 --out data", dir);
  CHECK(r.code == 0);
  const std::string mesh = slurp(dir / "data" / "mesh_level1.txt");
  CHECK(contains(mesh, "#vertices 57"));
  CHECK(contains(mesh, "#cells 96"));
  fs::remove_all(dir);
}

TEST_CASE("usage and configuration errors exit with code 1") {
  const fs::path dir = fresh_dir("errors");
  CHECK(run_cli("--help", dir).code == 0);
  CHECK(run_cli("", dir).code == 1);
  CHECK(run_cli("meshinfo --no-such-flag", dir).code == 1);

  const CliResult bad_levels = run_cli("meshinfo --levels 0..2", dir);
  CHECK(bad_levels.code == 1);
  CHECK(contains(bad_levels.err, "config error"));

  const CliResult bad_case = run_cli("convergence --case vortex --levels 1", dir);
  CHECK(bad_case.code == 1);

  const CliResult bad_range = run_cli("patch --levels nonsense", dir);
  CHECK(bad_range.code == 1);
  fs::remove_all(dir);
}

TEST_CASE("patch subcommand reports exact reproduction") {
  const fs::path dir = fresh_dir("patch");
  const CliResult r = run_cli("patch", dir);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "patch reproduction: PASS"));
  fs::remove_all(dir);
}

TEST_CASE("a starved quadrature rule makes the patch check fail loudly") {
  const fs::path dir = fresh_dir("patchfail");
  // A one-point rule cannot resolve the quadratic mass block; the run must
  // end with code 2, either as a reported mismatch or as a solver failure,
  // never as a silent PASS.
  const CliResult starved = run_cli("patch --levels 1 --quad-tri 1", dir);
  CHECK(starved.code == 2);
  CHECK(!contains(starved.out, "PASS"));

  // Degree 2 is enough even though single terms are of degree 4: the form
  // and load errors cancel pointwise for a reproduced polynomial solution,
  // leaving only an integration-by-parts mismatch of degree 2.
  const CliResult minimal = run_cli("patch --levels 1 --quad-tri 2", dir);
  CHECK(minimal.code == 0);
  CHECK(contains(minimal.out, "patch reproduction: PASS"));
  fs::remove_all(dir);
}

TEST_CASE("config files steer a run and flags override them") {
  const fs::path dir = fresh_dir("config");
  {
    std::ofstream cfg(dir / "run.json");
    cfg << "{\"case\": \"lattice\", \"levels\": \"1..1\", \"delta1\": 0.5,\n"
           " \"mu\": 1e-9, \"sigma\": 1.0}\n";
  }
  const CliResult r = run_cli(
      "convergence --config run.json --delta1 2 --out study --deterministic",
      dir);
  CHECK(r.code == 0);

  const std::string echoed = slurp(dir / "study" / "config.json");
  CHECK(contains(echoed, "\"case\": \"lattice\""));
  CHECK(contains(echoed, "\"level_max\": 1"));
  CHECK(contains(echoed, "\"delta1\": 2"));
  CHECK(contains(echoed, "\"deterministic\": true"));

  const std::string csv = slurp(dir / "study" / "convergence.csv");
  CHECK(csv.rfind("level,h,dofs_u,dofs_p,dofs_total,err_l2_u,rate_l2_u,"
                  "err_l2_p,rate_l2_p,err_energy,rate_energy,div_sup,seconds\n",
                  0) == 0);

  const CliResult unknown_key =
      run_cli("convergence --config run.json", dir);
  CHECK(unknown_key.code == 0);
  {
    std::ofstream cfg(dir / "bad.json");
    cfg << "{\"levls\": \"1..1\"}\n";
  }
  CHECK(run_cli("convergence --config bad.json", dir).code == 1);
  fs::remove_all(dir);
}

TEST_CASE("deterministic reruns are byte identical") {
  const fs::path dir = fresh_dir("determinism");
  const std::string args =
      "convergence --levels 1 --deterministic --out run";
  CHECK(run_cli(args + "A", dir).code == 0);
  CHECK(run_cli(args + "B", dir).code == 0);
  const std::string a = slurp(dir / "runA" / "convergence.csv");
  const std::string b = slurp(dir / "runB" / "convergence.csv");
  CHECK(!a.empty());
  CHECK(a == b);
  fs::remove_all(dir);
}

TEST_CASE("layer study writes sections and the oscillation summary") {
  const fs::path dir = fresh_dir("layer");
  // Level 1 keeps this smoke test fast; the acceptance suite runs the
  // default resolution.
  const CliResult r = run_cli("layer --level 1 --out study", dir);
  CHECK(r.code == 0);
  for (const char* preset : {"none", "s1", "classical", "full"}) {
    CHECK(contains(r.out, preset));
    const std::string section =
        slurp(dir / "study" / (std::string("section_") + preset + ".csv"));
    CHECK(section.rfind("x,u2_h,u2_exact\n", 0) == 0);
  }
  const std::string summary = slurp(dir / "study" / "oscillation.csv");
  CHECK(summary.rfind("preset,indicator\n", 0) == 0);
  CHECK(contains(summary, "classical,"));
  fs::remove_all(dir);
}
