#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cmcbar/base.hpp"

namespace cmcbar {

enum class ChartKind { Fermi, Polar };

std::string to_string(ChartKind c);
ChartKind chart_from_string(const std::string& name);

/// Finite-difference grid on a chart rectangle. Coordinate 0 is t (Fermi) or
/// rho (polar), coordinate 1 is x or theta. The metric length factor of
/// coordinate 1 is cosh(t) resp. sinh(rho); the polar chart therefore
/// requires c0_min > 0.
///
/// Dirichlet data is supplied per edge as a callable of the coordinate that
/// varies along that edge. apply_boundary() stamps it onto the edge nodes;
/// solves never modify boundary nodes afterwards.
struct ChartGrid {
  ChartKind chart = ChartKind::Fermi;
  double c0_min = 0.0, c0_max = 1.0;
  double c1_min = 0.0, c1_max = 1.0;
  int n0 = 0, n1 = 0;  // node counts including boundary nodes, each >= 3
  std::function<double(double)> bc_c0_min, bc_c0_max;  // of coordinate 1
  std::function<double(double)> bc_c1_min, bc_c1_max;  // of coordinate 0
  std::vector<double> u;  // row-major, u[i * n1 + j]

  static ChartGrid make(ChartKind chart, double c0_min, double c0_max, double c1_min,
                        double c1_max, int n0, int n1);

  double h0() const { return (c0_max - c0_min) / (n0 - 1); }
  double h1() const { return (c1_max - c1_min) / (n1 - 1); }
  double coord0(int i) const { return c0_min + i * h0(); }
  double coord1(int j) const { return c1_min + j * h1(); }
  double& at(int i, int j) { return u[static_cast<size_t>(i) * n1 + j]; }
  double at(int i, int j) const { return u[static_cast<size_t>(i) * n1 + j]; }
  double metric(double c0) const;

  void validate() const;
  void apply_boundary();
};

struct SolveReport {
  double residual_norm = 0.0;  // max norm over interior nodes
  int newton_iters = 0;
  double max_u = 0.0;
  double min_u = 0.0;
  bool converged = false;

  nlohmann::ordered_json to_json() const;
};

/// Discrete residual of div(grad u / sqrt(1 + |grad u|^2)) + 2H at every
/// interior node (conservative face-centered fluxes, second order). Boundary
/// entries of the returned field are zero.
std::vector<double> assemble_residual(const ChartGrid& grid, double H);

/// Damped Newton iteration on the discrete residual with an analytically
/// assembled Jacobian and a sparse direct solve. Backtracking line search
/// (up to 30 halvings); if the direct attempt from the current grid values
/// stalls, restarts with continuation in H (steps of 0.05). The grid's u is
/// the initial guess and is left holding the solution.
SolveReport newton_solve(ChartGrid& grid, double H, double tol = 1e-10, int max_iters = 50);

/// Largest metric norm of the normalized gradient over all faces of the grid;
/// algebraically below 1, so anything above 1 + 1e-12 indicates overshoot.
double max_face_flux_norm(const ChartGrid& grid, double H);

// --- exact-solution scenarios ----------------------------------------------

/// Strip scenario: Fermi rectangle t in [-l, l], x in [0, length], boundary
/// data equal to the exact translation-invariant strip profile (zero on the
/// hypercycle edges, the profile on the side walls). The finite rectangle
/// then reproduces the unbounded-strip solution; used for verification.
ChartGrid make_strip_scenario(double H, double l, double length, int n);

/// Sub-annulus scenario: polar rectangle rho_hat in [rho + d1, rho + d2],
/// theta in [0, theta_max], exact rotationally symmetric data on all edges.
/// d1 > 0 keeps the vertical tangent of the exact graph outside the domain.
ChartGrid make_annulus_scenario(double H, double rho, double d1, double d2, double theta_max,
                                int n);

/// Exact solution of the scenario at a node (functions of coordinate 0 only).
double strip_scenario_exact(double H, double l, double t);
double annulus_scenario_exact(double H, double rho, double rho_hat);

struct RefinementEntry {
  int n = 0;
  double spacing = 0.0;
  double max_error = 0.0;
};

/// Solves the chart's exact-solution scenario on `levels` grids (base_n - 1
/// doubling each level) and reports max errors against the exact solution.
std::vector<RefinementEntry> convergence_study(ChartKind chart, double H, int levels,
                                               int base_n = 33);

/// Empirical order from the finest refinement pair.
double observed_order(const std::vector<RefinementEntry>& entries);

// --- export ------------------------------------------------------------------

void write_chart_csv(const ChartGrid& grid, std::ostream& os);

/// Poincare-disk export: columns x_disk,y_disk,u.
void write_disk_csv(const ChartGrid& grid, std::ostream& os);

}  // namespace cmcbar
