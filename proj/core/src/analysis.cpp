#include "oseen/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "oseen/quadrature.hpp"

namespace oseen {

namespace {

// Reference values (and first derivatives if order >= 1) of every shape
// function at every quadrature point, one table per point.
std::vector<Eigen::MatrixXd> tabulate(const ReferenceBasis& basis,
                                      const QuadratureRule& rule, int order) {
  std::vector<Eigen::MatrixXd> tables;
  tables.reserve(rule.points.size());
  for (const auto& p : rule.points) tables.push_back(basis.evaluate(p, order));
  return tables;
}

} // namespace

double error_l2_velocity(const VelocitySpace& space, const VectorXd& coeffs,
                         const std::function<Vec2(const Vec2&)>& exact,
                         int triangle_degree) {
  if (!exact) throw std::invalid_argument("error_l2_velocity: missing exact field");
  if (coeffs.size() != space.dim())
    throw std::invalid_argument("error_l2_velocity: coefficient size mismatch");
  const Mesh& mesh = *space.mesh;
  const QuadratureRule rule = triangle_quadrature(triangle_degree);
  const auto tables = tabulate(space.basis, rule, 0);
  const int nloc = static_cast<int>(space.basis.size());

  double acc = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const AffineMap map = AffineMap::from_cell(mesh, c);
    const auto& nodes = space.cell_nodes[c];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = map.to_physical(rule.points[q]);
      Vec2 uh = Vec2::Zero();
      for (int l = 0; l < nloc; ++l) {
        const double phi = tables[q](l, 0);
        uh.x() += coeffs[space.dof(nodes[l], 0)] * phi;
        uh.y() += coeffs[space.dof(nodes[l], 1)] * phi;
      }
      acc += rule.weights[q] * map.det * (uh - exact(x)).squaredNorm();
    }
  }
  return std::sqrt(acc);
}

double error_l2_pressure(const PressureSpace& space, const VectorXd& coeffs,
                         const std::function<double(const Vec2&)>& exact,
                         int triangle_degree) {
  if (!exact) throw std::invalid_argument("error_l2_pressure: missing exact field");
  if (coeffs.size() != space.dim())
    throw std::invalid_argument("error_l2_pressure: coefficient size mismatch");
  const Mesh& mesh = *space.mesh;
  const QuadratureRule rule = triangle_quadrature(triangle_degree);
  const auto tables = tabulate(space.basis, rule, 0);
  const int nloc = space.dofs_per_cell;

  double acc = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const AffineMap map = AffineMap::from_cell(mesh, c);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = map.to_physical(rule.points[q]);
      double ph = 0.0;
      for (int l = 0; l < nloc; ++l)
        ph += coeffs[space.dof(c, l)] * tables[q](l, 0);
      const double diff = ph - exact(x);
      acc += rule.weights[q] * map.det * diff * diff;
    }
  }
  return std::sqrt(acc);
}

double error_energy(const VelocitySpace& space, const VectorXd& coeffs,
                    const ProblemCase& problem, const SpMat& stab_matrix,
                    int triangle_degree) {
  if (!problem.exact_u.value || !problem.exact_u.jacobian)
    throw std::invalid_argument("error_energy: exact velocity needs value and jacobian");
  if (coeffs.size() != space.dim())
    throw std::invalid_argument("error_energy: coefficient size mismatch");
  const Mesh& mesh = *space.mesh;
  const QuadratureRule rule = triangle_quadrature(triangle_degree);
  const auto tables = tabulate(space.basis, rule, 1);
  const int nloc = static_cast<int>(space.basis.size());

  double acc = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const AffineMap map = AffineMap::from_cell(mesh, c);
    const auto& nodes = space.cell_nodes[c];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = map.to_physical(rule.points[q]);
      Vec2 uh = Vec2::Zero();
      Mat2 jh = Mat2::Zero();
      for (int l = 0; l < nloc; ++l) {
        const double phi = tables[q](l, 0);
        // Physical gradient of the scalar shape via the chain rule.
        const Vec2 grad = map.Binv.transpose() *
                          Vec2(tables[q](l, 1), tables[q](l, 2));
        for (int comp = 0; comp < 2; ++comp) {
          const double coef = coeffs[space.dof(nodes[l], comp)];
          uh[comp] += coef * phi;
          jh.row(comp) += coef * grad.transpose();
        }
      }
      const Vec2 eu = uh - problem.exact_u.value(x);
      const Mat2 ej = jh - problem.exact_u.jacobian(x);
      acc += rule.weights[q] * map.det *
             (problem.sigma * eu.squaredNorm() + problem.mu * ej.squaredNorm());
    }
  }
  if (stab_matrix.rows() > 0) {
    if (stab_matrix.rows() != coeffs.size())
      throw std::invalid_argument("error_energy: stabilization size mismatch");
    acc += std::max(0.0, coeffs.dot(stab_matrix * coeffs));
  }
  return std::sqrt(acc);
}

void compute_rates(std::vector<LevelResult>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rate_l2_u.reset();
    rows[i].rate_l2_p.reset();
    rows[i].rate_energy.reset();
    if (i == 0) continue;
    const LevelResult& prev = rows[i - 1];
    auto rate = [](double before, double after) -> std::optional<double> {
      if (before <= 0.0 || after <= 0.0) return std::nullopt;
      return std::log2(before / after);
    };
    rows[i].rate_l2_u = rate(prev.err_l2_u, rows[i].err_l2_u);
    rows[i].rate_l2_p = rate(prev.err_l2_p, rows[i].err_l2_p);
    rows[i].rate_energy = rate(prev.err_energy, rows[i].err_energy);
  }
}

std::vector<SectionSample> cross_section(const VelocitySpace& space,
                                         const VectorXd& coeffs,
                                         const ProblemCase& problem, double y,
                                         int samples) {
  if (samples < 2) throw std::invalid_argument("cross_section: need at least 2 samples");
  if (!problem.exact_u.value)
    throw std::invalid_argument("cross_section: missing exact velocity");
  std::vector<SectionSample> out(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double x = static_cast<double>(i) / (samples - 1);
    const Vec2 p(x, y);
    const int cell = locate_cell(*space.mesh, p);
    if (cell < 0) throw std::runtime_error("cross_section: sample point outside mesh");
    const Vec2 ref = AffineMap::from_cell(*space.mesh, cell).to_reference(p);
    out[i].x = x;
    out[i].u2_h = evaluate_velocity(space, coeffs, cell, ref, 0).value().y();
    out[i].u2_exact = problem.exact_u.value(p).y();
  }
  return out;
}

double oscillation_indicator(const std::vector<SectionSample>& samples,
                             double x_max) {
  double worst = 0.0;
  for (const auto& s : samples) {
    if (s.x > x_max + 1e-12) continue;
    worst = std::max(worst, std::abs(s.u2_h - s.u2_exact));
  }
  return worst;
}

void write_convergence_header(std::ostream& out) {
  out << "level,h,dofs_u,dofs_p,dofs_total,err_l2_u,rate_l2_u,err_l2_p,"
         "rate_l2_p,err_energy,rate_energy,div_sup,seconds\n";
}

void write_convergence_row(std::ostream& out, const LevelResult& row,
                           bool deterministic) {
  char buf[640];
  auto rate_field = [](const std::optional<double>& r) {
    char tmp[32];
    if (!r) return std::string();
    std::snprintf(tmp, sizeof tmp, "%.6f", *r);
    return std::string(tmp);
  };
  std::snprintf(buf, sizeof buf,
                "%d,%.12e,%d,%d,%d,%.12e,%s,%.12e,%s,%.12e,%s,%.6e,%.6f\n",
                row.level, row.h, row.dofs_u, row.dofs_p, row.dofs_total,
                row.err_l2_u, rate_field(row.rate_l2_u).c_str(), row.err_l2_p,
                rate_field(row.rate_l2_p).c_str(), row.err_energy,
                rate_field(row.rate_energy).c_str(), row.div_sup,
                deterministic ? 0.0 : row.seconds);
  out << buf;
}

void write_section_csv(std::ostream& out,
                       const std::vector<SectionSample>& samples) {
  out << "x,u2_h,u2_exact\n";
  char buf[160];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e\n", s.x, s.u2_h,
                  s.u2_exact);
    out << buf;
  }
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

} // namespace

void write_svg_plot(std::ostream& out, const std::string& title,
                    const std::vector<PlotSeries>& series, bool log_y) {
  const double width = 800, height = 500;
  const double left = 75, right = 25, top = 45, bottom = 55;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      double yv = s.y[i];
      if (!std::isfinite(s.x[i]) || !std::isfinite(yv)) continue;
      if (log_y) {
        if (yv <= 0.0) continue;
        yv = std::log10(yv);
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, yv);
      ymax = std::max(ymax, yv);
    }
  }
  if (!(xmin <= xmax)) { xmin = 0; xmax = 1; }
  if (!(ymin <= ymax)) { ymin = 0; ymax = 1; }
  if (xmax - xmin < 1e-300) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }

  auto px = [&](double x) {
    return left + (x - xmin) / (xmax - xmin) * (width - left - right);
  };
  auto py = [&](double y) {
    return height - bottom - (y - ymin) / (ymax - ymin) * (height - top - bottom);
  };

  char buf[512];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" "
         "font-family=\"sans-serif\" font-size=\"13\">\n"
         "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"400\" y=\"24\" text-anchor=\"middle\" "
                "font-size=\"16\">%s</text>\n",
                title.c_str());
  out << buf;

  const int nticks = 5;
  for (int t = 0; t <= nticks; ++t) {
    const double fy = ymin + (ymax - ymin) * t / nticks;
    const double fx = xmin + (xmax - xmin) * t / nticks;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"#dddddd\"/>\n",
                  left, py(fy), width - right, py(fy));
    out << buf;
    if (log_y)
      std::snprintf(buf, sizeof buf,
                    "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">1e%.1f"
                    "</text>\n",
                    left - 6, py(fy) + 4, fy);
    else
      std::snprintf(buf, sizeof buf,
                    "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.3g"
                    "</text>\n",
                    left - 6, py(fy) + 4, fy);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.3g"
                  "</text>\n",
                  px(fx), height - bottom + 18, fx);
    out << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
                "fill=\"none\" stroke=\"#444444\"/>\n",
                left, top, width - left - right, height - top - bottom);
  out << buf;

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % 6];
    std::string pts;
    for (std::size_t i = 0; i < series[s].x.size() && i < series[s].y.size();
         ++i) {
      double yv = series[s].y[i];
      if (!std::isfinite(series[s].x[i]) || !std::isfinite(yv)) continue;
      if (log_y) {
        if (yv <= 0.0) continue;
        yv = std::log10(yv);
      }
      std::snprintf(buf, sizeof buf, "%.1f,%.1f ", px(series[s].x[i]), py(yv));
      pts += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" "
                  "stroke-width=\"1.6\"/>\n",
                  pts.c_str(), color);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"%s\" stroke-width=\"2.5\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\">%s</text>\n",
                  width - right - 180.0, top + 16.0 + 18.0 * s,
                  width - right - 160.0, top + 16.0 + 18.0 * s, color,
                  width - right - 152.0, top + 20.0 + 18.0 * s,
                  series[s].label.c_str());
    out << buf;
  }
  out << "</svg>\n";
}

} // namespace oseen
