#include "oseen/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "oseen/mesh.hpp"

namespace oseen {

namespace {

namespace fs = std::filesystem;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  const fs::path path = fs::path(dir) / name;
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open output file " + path.string());
  return file;
}

void echo(std::ostream* stream, const std::string& line) {
  if (stream) *stream << line << '\n';
}

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

void emit_warnings(std::ostream* stream,
                   const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) echo(stream, "warning: " + w);
}

} // namespace

StabConfig stab_config_of(const RunConfig& cfg) {
  StabConfig stab;
  stab.delta1 = cfg.delta1;
  stab.delta2 = cfg.delta2;
  stab.delta3 = cfg.delta3;
  if (cfg.stab == "none")
    stab.variant = StabVariant::none;
  else if (cfg.stab == "classical")
    stab.variant = StabVariant::classical_cip;
  else if (cfg.stab == "curl")
    stab.variant = StabVariant::curl_cip;
  else
    throw std::invalid_argument("unknown stabilization '" + cfg.stab +
                                "' (expected none, classical or curl)");
  return stab;
}

void validate_config(const RunConfig& cfg) {
  stab_config_of(cfg); // validates the variant name
  if (cfg.degree < 2 || cfg.degree > 4)
    throw std::invalid_argument("degree must be 2, 3 or 4");
  if (cfg.level_min < 1 || cfg.level_max < cfg.level_min || cfg.level_max > 6)
    throw std::invalid_argument("levels must satisfy 1 <= min <= max <= 6");
  if (!(cfg.mu > 0.0) || !std::isfinite(cfg.mu))
    throw std::invalid_argument("mu must be positive");
  if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma))
    throw std::invalid_argument("sigma must be nonnegative");
  for (double d : {cfg.delta1, cfg.delta2, cfg.delta3})
    if (!(d >= 0.0) || !std::isfinite(d))
      throw std::invalid_argument("stabilization weights must be nonnegative");
  if (cfg.quad_tri > 30)
    throw std::invalid_argument("cell quadrature degree capped at 30");
  if (cfg.quad_edge > 60)
    throw std::invalid_argument("facet quadrature degree capped at 60");
  if (cfg.section_samples < 2)
    throw std::invalid_argument("need at least 2 section samples");
  if (!(cfg.section_y > 0.0 && cfg.section_y < 1.0))
    throw std::invalid_argument("section height must lie inside (0,1)");
}

void write_config_json(std::ostream& out, const RunConfig& cfg) {
  AssemblyOptions opts;
  opts.triangle_degree = cfg.quad_tri;
  opts.edge_degree = cfg.quad_edge;
  char buf[1024];
  std::snprintf(
      buf, sizeof buf,
      "{\n"
      "  \"case\": \"%s\",\n"
      "  \"mu\": %.17g,\n"
      "  \"sigma\": %.17g,\n"
      "  \"delta1\": %.17g,\n"
      "  \"delta2\": %.17g,\n"
      "  \"delta3\": %.17g,\n"
      "  \"stab\": \"%s\",\n"
      "  \"degree\": %d,\n"
      "  \"level_min\": %d,\n"
      "  \"level_max\": %d,\n"
      "  \"quad_tri\": %d,\n"
      "  \"quad_edge\": %d,\n"
      "  \"out_dir\": \"%s\",\n"
      "  \"deterministic\": %s,\n"
      "  \"plot\": %s\n"
      "}\n",
      cfg.case_name.c_str(), cfg.mu, cfg.sigma, cfg.delta1, cfg.delta2,
      cfg.delta3, cfg.stab.c_str(), cfg.degree, cfg.level_min, cfg.level_max,
      opts.resolve_triangle(cfg.degree), opts.resolve_edge(cfg.degree),
      cfg.out_dir.c_str(), cfg.deterministic ? "true" : "false",
      cfg.plot ? "true" : "false");
  out << buf;
}

std::vector<MeshInfoRow> run_meshinfo(const RunConfig& cfg,
                                      std::ostream* stream) {
  validate_config(cfg);
  std::vector<MeshInfoRow> rows;
  echo(stream,
       "level    cells vertices   facets interior        h   dofs_u  "
       "dofs_u0   dofs_p    total   total0");
  for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
    const Mesh mesh = mesh_level(level);
    const FacetTopology topology = build_facets(mesh);
    const VelocitySpace velocity =
        build_velocity_space(mesh, topology, cfg.degree);
    const PressureSpace pressure = build_pressure_space(mesh, cfg.degree);
    MeshInfoRow row;
    row.level = level;
    row.cells = mesh.num_cells();
    row.vertices = mesh.num_vertices();
    row.facets = topology.num_facets();
    row.interior_facets = topology.num_interior;
    row.h = mesh.max_diameter();
    row.dofs_u = velocity.dim();
    row.dofs_u_interior = velocity.dim_interior();
    row.dofs_p = pressure.dim();
    row.dofs_total = row.dofs_u + row.dofs_p;
    row.dofs_interior_total = row.dofs_u_interior + row.dofs_p;
    rows.push_back(row);
    echo(stream, format("%5d %8d %8d %8d %8d %.2e %8d %8d %8d %8d %8d",
                        row.level, row.cells, row.vertices, row.facets,
                        row.interior_facets, row.h, row.dofs_u,
                        row.dofs_u_interior, row.dofs_p, row.dofs_total,
                        row.dofs_interior_total));
    if (!cfg.out_dir.empty()) {
      auto file = open_output(cfg.out_dir,
                              "mesh_level" + std::to_string(level) + ".txt");
      write_mesh_text(mesh, file);
    }
  }
  return rows;
}

std::vector<LevelResult> run_convergence(const RunConfig& cfg,
                                         std::ostream* stream) {
  validate_config(cfg);
  const ProblemCase problem = make_case(cfg.case_name, cfg.mu, cfg.sigma);
  const StabConfig stab = stab_config_of(cfg);
  AssemblyOptions opts;
  opts.triangle_degree = cfg.quad_tri;
  opts.edge_degree = cfg.quad_edge;
  const int error_degree = opts.resolve_triangle(cfg.degree) + 2;

  const bool writing = !cfg.out_dir.empty();
  std::ofstream csv;
  if (writing) {
    auto config_file = open_output(cfg.out_dir, "config.json");
    write_config_json(config_file, cfg);
    csv = open_output(cfg.out_dir, "convergence.csv");
    write_convergence_header(csv);
    csv.flush();
  }

  std::vector<LevelResult> rows;
  for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
    const double t0 = now_seconds();
    const Mesh mesh = mesh_level(level);
    const FacetTopology topology = build_facets(mesh);
    const VelocitySpace velocity =
        build_velocity_space(mesh, topology, cfg.degree);
    const PressureSpace pressure = build_pressure_space(mesh, cfg.degree);

    const AssembledSystem system =
        assemble_system(velocity, pressure, problem, stab, opts);
    emit_warnings(stream, system.warnings);
    const SolveResult sol = solve(system);
    const DivergenceReport div = measure_divergence(
        velocity, sol.velocity, opts.resolve_triangle(cfg.degree));

    LevelResult row;
    row.level = level;
    row.h = mesh.max_diameter();
    row.dofs_u = velocity.dim();
    row.dofs_p = pressure.dim();
    row.dofs_total = row.dofs_u + row.dofs_p;
    row.err_l2_u = error_l2_velocity(velocity, sol.velocity,
                                     problem.exact_u.value, error_degree);
    row.err_l2_p = error_l2_pressure(pressure, sol.pressure,
                                     problem.exact_p.value, error_degree);
    row.err_energy =
        error_energy(velocity, sol.velocity, problem, system.S, error_degree);
    row.div_sup = div.div_sup;
    row.grad_sup = div.grad_sup;
    row.seconds = now_seconds() - t0;
    rows.push_back(row);
    compute_rates(rows);

    if (writing) {
      write_convergence_row(csv, rows.back(), cfg.deterministic);
      csv.flush();
    }
    echo(stream,
         format("level %d  h %.3e  dofs %7d  L2(u) %.4e (%5s)  "
                "L2(p) %.4e (%5s)  energy %.4e (%5s)  div %.2e  %.1fs",
                row.level, row.h, row.dofs_total, row.err_l2_u,
                rows.back().rate_l2_u ? format("%.2f", *rows.back().rate_l2_u).c_str() : "-",
                row.err_l2_p,
                rows.back().rate_l2_p ? format("%.2f", *rows.back().rate_l2_p).c_str() : "-",
                row.err_energy,
                rows.back().rate_energy ? format("%.2f", *rows.back().rate_energy).c_str() : "-",
                row.div_sup, row.seconds));
  }

  if (writing && cfg.plot) {
    PlotSeries l2u{"L2 velocity", {}, {}};
    PlotSeries l2p{"L2 pressure", {}, {}};
    PlotSeries energy{"energy", {}, {}};
    for (const auto& row : rows) {
      l2u.x.push_back(row.level);
      l2u.y.push_back(row.err_l2_u);
      l2p.x.push_back(row.level);
      l2p.y.push_back(row.err_l2_p);
      energy.x.push_back(row.level);
      energy.y.push_back(row.err_energy);
    }
    auto svg = open_output(cfg.out_dir, "convergence.svg");
    write_svg_plot(svg, "errors vs refinement level", {l2u, l2p, energy},
                   true);
  }
  return rows;
}

LayerRun run_layer(const RunConfig& cfg, std::ostream* stream) {
  validate_config(cfg);
  const ProblemCase problem = make_case(cfg.case_name, cfg.mu, cfg.sigma);
  AssemblyOptions opts;
  opts.triangle_degree = cfg.quad_tri;
  opts.edge_degree = cfg.quad_edge;

  const int level = cfg.level_min;
  const Mesh mesh = mesh_level(level);
  const FacetTopology topology = build_facets(mesh);
  const VelocitySpace velocity =
      build_velocity_space(mesh, topology, cfg.degree);
  const PressureSpace pressure = build_pressure_space(mesh, cfg.degree);

  const bool writing = !cfg.out_dir.empty();
  if (writing) {
    auto config_file = open_output(cfg.out_dir, "config.json");
    write_config_json(config_file, cfg);
  }

  auto preset = [](const char* name, StabVariant variant, double d1, double d2,
                   double d3) {
    LayerEntry entry;
    entry.preset = name;
    entry.stab.variant = variant;
    entry.stab.delta1 = d1;
    entry.stab.delta2 = d2;
    entry.stab.delta3 = d3;
    return entry;
  };

  LayerRun run;
  run.level = level;
  run.h = mesh.max_diameter();
  run.entries.push_back(preset("none", StabVariant::none, 0, 0, 0));
  run.entries.push_back(preset("s1", StabVariant::curl_cip, 1, 0, 0));
  run.entries.push_back(preset("classical", StabVariant::classical_cip, 1, 0, 0));
  run.entries.push_back(preset("full", StabVariant::curl_cip, 1, 0.5, 0.1));

  for (auto& entry : run.entries) {
    const AssembledSystem system =
        assemble_system(velocity, pressure, problem, entry.stab, opts);
    emit_warnings(stream, system.warnings);
    const SolveResult sol = solve(system);
    entry.samples = cross_section(velocity, sol.velocity, problem,
                                  cfg.section_y, cfg.section_samples);
    entry.indicator = oscillation_indicator(entry.samples, cfg.section_x_max);
    echo(stream, format("preset %-10s oscillation indicator %.6e",
                        entry.preset.c_str(), entry.indicator));
    if (writing) {
      auto section = open_output(cfg.out_dir, "section_" + entry.preset + ".csv");
      write_section_csv(section, entry.samples);
    }
  }

  if (writing) {
    auto summary = open_output(cfg.out_dir, "oscillation.csv");
    summary << "preset,indicator\n";
    for (const auto& entry : run.entries)
      summary << entry.preset << ','
              << format("%.12e", entry.indicator) << '\n';
    if (cfg.plot) {
      std::vector<PlotSeries> series;
      PlotSeries exact{"exact", {}, {}};
      for (const auto& s : run.entries.front().samples) {
        exact.x.push_back(s.x);
        exact.y.push_back(s.u2_exact);
      }
      series.push_back(exact);
      for (const auto& entry : run.entries) {
        PlotSeries line{entry.preset, {}, {}};
        for (const auto& s : entry.samples) {
          line.x.push_back(s.x);
          line.y.push_back(s.u2_h);
        }
        series.push_back(line);
      }
      auto svg = open_output(cfg.out_dir, "section.svg");
      write_svg_plot(svg, "second velocity component at mid height", series,
                     false);
    }
  }
  return run;
}

PatchRun run_patch(const RunConfig& cfg, std::ostream* stream) {
  validate_config(cfg);
  const ProblemCase problem = make_case(cfg.case_name, cfg.mu, cfg.sigma);
  const StabConfig stab = stab_config_of(cfg);
  AssemblyOptions opts;
  opts.triangle_degree = cfg.quad_tri;
  opts.edge_degree = cfg.quad_edge;

  PatchRun run;
  for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
    const Mesh mesh = mesh_level(level);
    const FacetTopology topology = build_facets(mesh);
    const VelocitySpace velocity =
        build_velocity_space(mesh, topology, cfg.degree);
    const PressureSpace pressure = build_pressure_space(mesh, cfg.degree);

    const AssembledSystem system =
        assemble_system(velocity, pressure, problem, stab, opts);
    emit_warnings(stream, system.warnings);
    const SolveResult sol = solve(system);

    const VectorXd u_star = interpolate_velocity(velocity, problem.exact_u.value);
    const VectorXd p_star = interpolate_pressure(pressure, problem.exact_p.value);
    PatchLevel row;
    row.level = level;
    row.max_dev_u = (sol.velocity - u_star).cwiseAbs().maxCoeff();
    row.max_dev_p = (sol.pressure - p_star).cwiseAbs().maxCoeff();
    const DivergenceReport div = measure_divergence(
        velocity, sol.velocity, opts.resolve_triangle(cfg.degree));
    row.div_sup = div.div_sup;
    row.grad_sup = div.grad_sup;
    run.levels.push_back(row);
    echo(stream, format("level %d  max|u_h - I_h u| %.3e  max|p_h - I_h p| %.3e",
                        level, row.max_dev_u, row.max_dev_p));
  }
  run.pass = true;
  for (const auto& row : run.levels)
    if (row.max_dev_u > run.tol_u || row.max_dev_p > run.tol_p)
      run.pass = false;
  echo(stream, run.pass ? "patch reproduction: PASS" : "patch reproduction: FAIL");
  return run;
}

} // namespace oseen
