/// @file driver.hpp
/// @brief Study drivers shared by the command line tool and the test suite.
///
/// Each run_* function performs one complete study: build meshes, assemble,
/// solve, measure, and (where configured) write CSV/SVG outputs under
/// cfg.out_dir. Progress lines go to the optional echo stream. Configuration
/// errors throw std::invalid_argument, numerical failures std::runtime_error.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "oseen/analysis.hpp"
#include "oseen/solver.hpp"

namespace oseen {

struct RunConfig {
  std::string case_name = "lattice";
  double mu = 1e-9;
  double sigma = 1.0;
  double delta1 = 2.0;
  double delta2 = 2.0;
  double delta3 = 2.0;
  std::string stab = "curl"; // none | classical | curl
  int degree = 2;
  int level_min = 1;
  int level_max = 5;
  int quad_tri = -1;  // -1 keeps the per-degree default
  int quad_edge = -1;
  std::string out_dir; // empty disables file output
  bool deterministic = false;
  bool plot = false;

  // Cross-section controls for the layer study; not exposed as flags.
  int section_samples = 801;
  double section_y = 0.5;
  double section_x_max = 0.8;
};

/// Maps the config's stabilization fields onto assembly settings.
StabConfig stab_config_of(const RunConfig& cfg);

/// Throws std::invalid_argument on out-of-range values.
void validate_config(const RunConfig& cfg);

/// Writes the fully resolved configuration as a flat JSON object.
void write_config_json(std::ostream& out, const RunConfig& cfg);

struct MeshInfoRow {
  int level = 0;
  int cells = 0;
  int vertices = 0;
  int facets = 0;
  int interior_facets = 0;
  double h = 0.0;
  int dofs_u = 0;
  int dofs_u_interior = 0;
  int dofs_p = 0;
  int dofs_total = 0;
  /// Unknowns of the homogeneous Dirichlet problem: interior velocity DOFs
  /// plus all pressure DOFs.
  int dofs_interior_total = 0;
};

/// Per-level mesh and space statistics. With an out_dir set, also exports
/// each mesh in the plain-text format of write_mesh_text.
std::vector<MeshInfoRow> run_meshinfo(const RunConfig& cfg,
                                      std::ostream* echo);

/// Solves one level per entry of [level_min, level_max], writes
/// convergence.csv incrementally (one flushed row per level), and returns
/// the rows with rates filled in.
std::vector<LevelResult> run_convergence(const RunConfig& cfg,
                                         std::ostream* echo);

struct LayerEntry {
  std::string preset;
  StabConfig stab;
  double indicator = 0.0;
  std::vector<SectionSample> samples;
};

struct LayerRun {
  int level = 0;
  double h = 0.0;
  std::vector<LayerEntry> entries;
};

/// Runs the boundary layer comparison at level_min for the four built-in
/// stabilization presets and measures the oscillation indicator of each.
LayerRun run_layer(const RunConfig& cfg, std::ostream* echo);

struct PatchLevel {
  int level = 0;
  double max_dev_u = 0.0;
  double max_dev_p = 0.0;
  double div_sup = 0.0;
  double grad_sup = 0.0;
};

struct PatchRun {
  std::vector<PatchLevel> levels;
  double tol_u = 1e-8;
  double tol_p = 1e-7;
  bool pass = false;
};

/// Solves the polynomial case and compares the discrete solution against
/// the nodal interpolant of the exact one; the scheme must reproduce it to
/// solver accuracy because the exact solution lies in the discrete spaces
/// and every stabilization jump of it vanishes.
PatchRun run_patch(const RunConfig& cfg, std::ostream* echo);

} // namespace oseen
