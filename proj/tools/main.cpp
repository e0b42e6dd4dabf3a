// Command line front end. Exit codes: 0 success, 1 configuration or usage
// error, 2 numerical failure (or a failed patch reproduction).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "oseen/driver.hpp"

namespace {

struct Flags {
  std::string case_name;
  double mu = 0.0;
  double sigma = 0.0;
  double delta1 = 0.0, delta2 = 0.0, delta3 = 0.0;
  std::string stab;
  int degree = 0;
  std::string levels;
  int level = 0;
  int quad_tri = 0;
  int quad_edge = 0;
  std::string out_dir;
  bool deterministic = false;
  bool plot = false;
  std::string config_file;
};

void parse_levels(const std::string& text, oseen::RunConfig& cfg) {
  int a = 0, b = 0;
  if (std::sscanf(text.c_str(), "%d..%d", &a, &b) == 2) {
    cfg.level_min = a;
    cfg.level_max = b;
  } else if (std::sscanf(text.c_str(), "%d", &a) == 1 &&
             text.find("..") == std::string::npos) {
    cfg.level_min = cfg.level_max = a;
  } else {
    throw std::invalid_argument("cannot parse level range '" + text +
                                "' (expected A..B or a single level)");
  }
}

void apply_config_file(oseen::RunConfig& cfg, const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::invalid_argument("cannot open config file " + path);
  nlohmann::json doc;
  try {
    file >> doc;
    if (!doc.is_object())
      throw std::invalid_argument("config file must hold a JSON object");
    static const std::set<std::string> known = {
        "case",     "mu",        "sigma",    "delta1",   "delta2",
        "delta3",   "stab",      "degree",   "levels",   "level_min",
        "level_max", "quad_tri", "quad_edge", "out_dir", "deterministic",
        "plot"};
    for (const auto& item : doc.items())
      if (!known.count(item.key()))
        throw std::invalid_argument("unknown config key '" + item.key() + "'");
    if (doc.contains("case")) cfg.case_name = doc["case"].get<std::string>();
    if (doc.contains("mu")) cfg.mu = doc["mu"].get<double>();
    if (doc.contains("sigma")) cfg.sigma = doc["sigma"].get<double>();
    if (doc.contains("delta1")) cfg.delta1 = doc["delta1"].get<double>();
    if (doc.contains("delta2")) cfg.delta2 = doc["delta2"].get<double>();
    if (doc.contains("delta3")) cfg.delta3 = doc["delta3"].get<double>();
    if (doc.contains("stab")) cfg.stab = doc["stab"].get<std::string>();
    if (doc.contains("degree")) cfg.degree = doc["degree"].get<int>();
    if (doc.contains("levels"))
      parse_levels(doc["levels"].get<std::string>(), cfg);
    if (doc.contains("level_min")) cfg.level_min = doc["level_min"].get<int>();
    if (doc.contains("level_max")) cfg.level_max = doc["level_max"].get<int>();
    if (doc.contains("quad_tri")) cfg.quad_tri = doc["quad_tri"].get<int>();
    if (doc.contains("quad_edge")) cfg.quad_edge = doc["quad_edge"].get<int>();
    if (doc.contains("out_dir")) cfg.out_dir = doc["out_dir"].get<std::string>();
    if (doc.contains("deterministic"))
      cfg.deterministic = doc["deterministic"].get<bool>();
    if (doc.contains("plot")) cfg.plot = doc["plot"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file " + path + ": " + e.what());
  }
}

void add_common_flags(CLI::App* sub, Flags& flags, bool with_problem,
                      bool with_stab) {
  if (with_problem) {
    sub->add_option("--case", flags.case_name, "problem case name");
    sub->add_option("--mu", flags.mu, "viscosity");
    sub->add_option("--sigma", flags.sigma, "reaction coefficient");
  }
  if (with_stab) {
    sub->add_option("--stab", flags.stab,
                    "stabilization variant: none, classical or curl");
    sub->add_option("--delta1", flags.delta1, "first jump penalty weight");
    sub->add_option("--delta2", flags.delta2, "second jump penalty weight");
    sub->add_option("--delta3", flags.delta3, "third jump penalty weight");
  }
  sub->add_option("--k", flags.degree, "velocity polynomial degree (2..4)");
  sub->add_option("--quad-tri", flags.quad_tri, "cell quadrature degree");
  sub->add_option("--quad-edge", flags.quad_edge, "facet quadrature degree");
  sub->add_option("--out", flags.out_dir, "output directory");
  sub->add_flag("--deterministic", flags.deterministic,
                "zero out timing columns for byte-identical reruns");
  sub->add_flag("--plot", flags.plot, "also write SVG plots");
  sub->add_option("--config", flags.config_file,
                  "JSON config file; explicit flags override its values");
}

// Flag values only override the config file when actually given.
void fold_flags(const CLI::App* sub, const Flags& flags,
                oseen::RunConfig& cfg) {
  auto given = [&](const char* name) {
    return sub->get_option(name)->count() > 0;
  };
  if (sub->get_option_no_throw("--case") && given("--case"))
    cfg.case_name = flags.case_name;
  if (sub->get_option_no_throw("--mu") && given("--mu")) cfg.mu = flags.mu;
  if (sub->get_option_no_throw("--sigma") && given("--sigma"))
    cfg.sigma = flags.sigma;
  if (sub->get_option_no_throw("--stab") && given("--stab"))
    cfg.stab = flags.stab;
  if (sub->get_option_no_throw("--delta1") && given("--delta1"))
    cfg.delta1 = flags.delta1;
  if (sub->get_option_no_throw("--delta2") && given("--delta2"))
    cfg.delta2 = flags.delta2;
  if (sub->get_option_no_throw("--delta3") && given("--delta3"))
    cfg.delta3 = flags.delta3;
  if (given("--k")) cfg.degree = flags.degree;
  if (sub->get_option_no_throw("--levels") && given("--levels"))
    parse_levels(flags.levels, cfg);
  if (sub->get_option_no_throw("--level") && given("--level"))
    cfg.level_min = cfg.level_max = flags.level;
  if (given("--quad-tri")) cfg.quad_tri = flags.quad_tri;
  if (given("--quad-edge")) cfg.quad_edge = flags.quad_edge;
  if (given("--out")) cfg.out_dir = flags.out_dir;
  if (given("--deterministic")) cfg.deterministic = true;
  if (given("--plot")) cfg.plot = true;
}

oseen::RunConfig defaults_convergence() {
  oseen::RunConfig cfg;
  cfg.case_name = "lattice";
  cfg.mu = 1e-9;
  cfg.sigma = 1.0;
  cfg.delta1 = cfg.delta2 = cfg.delta3 = 2.0;
  cfg.stab = "curl";
  cfg.level_min = 1;
  cfg.level_max = 5;
  cfg.out_dir = "out";
  return cfg;
}

oseen::RunConfig defaults_layer() {
  oseen::RunConfig cfg;
  cfg.case_name = "layer";
  cfg.mu = 1e-5;
  cfg.sigma = 0.0;
  cfg.level_min = cfg.level_max = 4;
  cfg.out_dir = "out";
  return cfg;
}

oseen::RunConfig defaults_meshinfo() {
  oseen::RunConfig cfg;
  cfg.mu = 1.0;
  cfg.sigma = 1.0;
  cfg.level_min = 1;
  cfg.level_max = 5;
  cfg.out_dir.clear(); // export meshes only on request
  return cfg;
}

oseen::RunConfig defaults_patch() {
  oseen::RunConfig cfg;
  cfg.case_name = "patch";
  cfg.mu = 1e-3;
  cfg.sigma = 1.0;
  cfg.delta1 = cfg.delta2 = cfg.delta3 = 1.0;
  cfg.stab = "curl";
  cfg.level_min = 1;
  cfg.level_max = 2;
  cfg.out_dir.clear();
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divergence-free Oseen solver with curl-based interior "
               "penalty stabilization"};
  app.require_subcommand(1);
  Flags flags;

  CLI::App* convergence = app.add_subcommand(
      "convergence", "mesh refinement study with error rates");
  add_common_flags(convergence, flags, true, true);
  convergence->add_option("--levels", flags.levels,
                          "refinement range A..B (default 1..5)");

  CLI::App* layer = app.add_subcommand(
      "layer", "boundary layer study comparing stabilization presets");
  add_common_flags(layer, flags, true, false);
  layer->add_option("--level", flags.level, "refinement level (default 4)");

  CLI::App* meshinfo = app.add_subcommand(
      "meshinfo", "per-level mesh and degree-of-freedom statistics");
  add_common_flags(meshinfo, flags, false, false);
  meshinfo->add_option("--levels", flags.levels,
                       "refinement range A..B (default 1..5)");

  CLI::App* patch = app.add_subcommand(
      "patch", "verify exact reproduction of a polynomial solution");
  add_common_flags(patch, flags, true, true);
  patch->add_option("--levels", flags.levels,
                    "refinement range A..B (default 1..2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    oseen::RunConfig cfg;
    if (sub == convergence)
      cfg = defaults_convergence();
    else if (sub == layer)
      cfg = defaults_layer();
    else if (sub == meshinfo)
      cfg = defaults_meshinfo();
    else
      cfg = defaults_patch();
    if (!flags.config_file.empty()) apply_config_file(cfg, flags.config_file);
    fold_flags(sub, flags, cfg);
    oseen::validate_config(cfg);

    if (sub == convergence) {
      oseen::run_convergence(cfg, &std::cout);
    } else if (sub == layer) {
      oseen::run_layer(cfg, &std::cout);
    } else if (sub == meshinfo) {
      oseen::run_meshinfo(cfg, &std::cout);
    } else {
      const oseen::PatchRun run = oseen::run_patch(cfg, &std::cout);
      if (!run.pass) return 2;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
