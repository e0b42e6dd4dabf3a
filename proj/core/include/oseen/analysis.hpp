/// @file analysis.hpp
/// @brief Error measurement, convergence rates and study outputs.
///
/// The energy norm is
///   |||v|||^2 = sigma ||v||^2 + mu ||grad v||^2 + |v|_S^2.
/// For the error u - u_h against a smooth exact solution the stabilization
/// seminorm reduces to S(u_h, u_h), since all jump quantities of the exact
/// solution vanish on interior facets.

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "oseen/assembly.hpp"

namespace oseen {

struct LevelResult {
  int level = 0;
  double h = 0.0;
  int dofs_u = 0;
  int dofs_p = 0;
  int dofs_total = 0;
  double err_l2_u = 0.0;
  double err_l2_p = 0.0;
  double err_energy = 0.0;
  std::optional<double> rate_l2_u, rate_l2_p, rate_energy;
  double div_sup = 0.0;
  double grad_sup = 0.0;
  double seconds = 0.0;
};

double error_l2_velocity(const VelocitySpace& space, const VectorXd& coeffs,
                         const std::function<Vec2(const Vec2&)>& exact,
                         int triangle_degree);

double error_l2_pressure(const PressureSpace& space, const VectorXd& coeffs,
                         const std::function<double(const Vec2&)>& exact,
                         int triangle_degree);

/// ||| u - u_h ||| with the S term taken as coeffs^T S coeffs. Pass the
/// assembled stabilization block of the solved system; an empty matrix
/// (size zero) stands for no stabilization.
double error_energy(const VelocitySpace& space, const VectorXd& coeffs,
                    const ProblemCase& problem, const SpMat& stab_matrix,
                    int triangle_degree);

/// rate_l = log2(e_{l-1} / e_l) against the previous row; the first row and
/// rows with nonpositive errors get no rate.
void compute_rates(std::vector<LevelResult>& rows);

struct SectionSample {
  double x = 0.0;
  double u2_h = 0.0;
  double u2_exact = 0.0;
};

/// Samples u_h,2 and the exact second component along the horizontal line at
/// height y, at `samples` equispaced points including both endpoints.
std::vector<SectionSample> cross_section(const VelocitySpace& space,
                                         const VectorXd& coeffs,
                                         const ProblemCase& problem, double y,
                                         int samples);

/// Max |u2_h - u2_exact| over the samples with x <= x_max, which excludes
/// the boundary layer itself from the measurement.
double oscillation_indicator(const std::vector<SectionSample>& samples,
                             double x_max);

/// Columns: level,h,dofs_u,dofs_p,dofs_total,err_l2_u,rate_l2_u,err_l2_p,
/// rate_l2_p,err_energy,rate_energy,div_sup,seconds. Absent rates print as
/// empty fields. With `deterministic` the seconds column prints as zero so
/// reruns are byte identical.
void write_convergence_header(std::ostream& out);
void write_convergence_row(std::ostream& out, const LevelResult& row,
                           bool deterministic);

/// Columns: x,u2_h,u2_exact.
void write_section_csv(std::ostream& out,
                       const std::vector<SectionSample>& samples);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal self-contained line plot. With log_y the y values are shown on a
/// log10 axis and nonpositive values are skipped.
void write_svg_plot(std::ostream& out, const std::string& title,
                    const std::vector<PlotSeries>& series, bool log_y);

} // namespace oseen
