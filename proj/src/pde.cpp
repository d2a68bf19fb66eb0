#include "cmcbar/pde.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <nlohmann/json.hpp>

#include "cmcbar/hyperbolic.hpp"
#include "cmcbar/profiles.hpp"
#include "cmcbar/serialize.hpp"

namespace cmcbar {

std::string to_string(ChartKind c) { return c == ChartKind::Fermi ? "fermi" : "polar"; }

ChartKind chart_from_string(const std::string& name) {
  if (name == "fermi") return ChartKind::Fermi;
  if (name == "polar") return ChartKind::Polar;
  throw std::domain_error("unknown chart '" + name + "' (expected fermi or polar)");
}

ChartGrid ChartGrid::make(ChartKind chart, double c0_min, double c0_max, double c1_min,
                          double c1_max, int n0, int n1) {
  ChartGrid g;
  g.chart = chart;
  g.c0_min = c0_min;
  g.c0_max = c0_max;
  g.c1_min = c1_min;
  g.c1_max = c1_max;
  g.n0 = n0;
  g.n1 = n1;
  g.u.assign(static_cast<size_t>(n0) * n1, 0.0);
  g.validate();
  return g;
}

double ChartGrid::metric(double c0) const {
  return chart == ChartKind::Fermi ? std::cosh(c0) : std::sinh(c0);
}

void ChartGrid::validate() const {
  if (n0 < 3 || n1 < 3) throw std::domain_error("grid needs n0, n1 >= 3");
  if (!(c0_max > c0_min) || !(c1_max > c1_min))
    throw std::domain_error("grid coordinate ranges must be increasing");
  if (chart == ChartKind::Polar && !(c0_min > 0.0))
    throw std::domain_error("polar grid needs rho_min > 0 (chart singularity at the center)");
  if (u.size() != static_cast<size_t>(n0) * n1)
    throw std::domain_error("grid field size does not match n0 * n1");
}

void ChartGrid::apply_boundary() {
  validate();
  auto eval = [](const std::function<double(double)>& f, double c) { return f ? f(c) : 0.0; };
  for (int i = 0; i < n0; ++i) {
    at(i, 0) = eval(bc_c1_min, coord0(i));
    at(i, n1 - 1) = eval(bc_c1_max, coord0(i));
  }
  for (int j = 0; j < n1; ++j) {
    at(0, j) = eval(bc_c0_min, coord1(j));
    at(n0 - 1, j) = eval(bc_c0_max, coord1(j));
  }
}

namespace {

// Face fluxes of the conservative discretization. A c0-face sits between
// nodes (i, j) and (i+1, j); a c1-face between (i, j) and (i, j+1). The
// transverse derivative at a face is the average of the neighboring central
// differences, which makes the scheme second order.
struct Discretization {
  const ChartGrid& g;
  double H;
  double h0, h1;

  explicit Discretization(const ChartGrid& grid, double H_) : g(grid), H(H_) {
    h0 = g.h0();
    h1 = g.h1();
  }

  // normal + transverse gradient components at the c0-face (i+1/2, j)
  void face0_gradient(int i, int j, double& a, double& b) const {
    a = (g.at(i + 1, j) - g.at(i, j)) / h0;
    b = (g.at(i + 1, j + 1) + g.at(i, j + 1) - g.at(i + 1, j - 1) - g.at(i, j - 1)) / (4.0 * h1);
  }

  void face1_gradient(int i, int j, double& a, double& b) const {
    a = (g.at(i + 1, j) + g.at(i + 1, j + 1) - g.at(i - 1, j) - g.at(i - 1, j + 1)) / (4.0 * h0);
    b = (g.at(i, j + 1) - g.at(i, j)) / h1;
  }

  double face0_metric(int i) const { return g.metric(g.coord0(i) + 0.5 * h0); }

  // flux through the c0-face (i+1/2, j): a / W
  double flux0(int i, int j) const {
    double a, b;
    face0_gradient(i, j, a, b);
    const double bh = b / face0_metric(i);
    return a / std::sqrt(1.0 + a * a + bh * bh);
  }

  // flux through the c1-face (i, j+1/2): (b / metric^2) / W
  double flux1(int i, int j) const {
    double a, b;
    face1_gradient(i, j, a, b);
    const double m = g.metric(g.coord0(i));
    const double bh = b / m;
    return bh / (m * std::sqrt(1.0 + a * a + bh * bh));
  }

  double residual_at(int i, int j) const {
    const double mi = g.metric(g.coord0(i));
    const double div0 =
        (face0_metric(i) * flux0(i, j) - face0_metric(i - 1) * flux0(i - 1, j)) / (mi * h0);
    const double div1 = (flux1(i, j) - flux1(i, j - 1)) / h1;
    return div0 + div1 + 2.0 * H;
  }
};

int interior_count(const ChartGrid& g) { return (g.n0 - 2) * (g.n1 - 2); }

int unknown_index(const ChartGrid& g, int i, int j) { return (i - 1) * (g.n1 - 2) + (j - 1); }

bool is_interior(const ChartGrid& g, int i, int j) {
  return i >= 1 && i <= g.n0 - 2 && j >= 1 && j <= g.n1 - 2;
}

Eigen::VectorXd interior_residual(const ChartGrid& g, double H) {
  const Discretization dis(g, H);
  Eigen::VectorXd r(interior_count(g));
  for (int i = 1; i <= g.n0 - 2; ++i)
    for (int j = 1; j <= g.n1 - 2; ++j) r[unknown_index(g, i, j)] = dis.residual_at(i, j);
  return r;
}

// Linearization of the interior residual w.r.t. the interior unknowns,
// assembled face by face from the analytic derivatives of each normalized
// flux. With frozen_w the normalization factors W are held fixed, which
// yields the Picard (lagged-coefficient) operator instead of the exact
// Jacobian; its steps are tamer far from the solution.
Eigen::SparseMatrix<double> interior_jacobian(const ChartGrid& g, double H, bool frozen_w) {
  const Discretization dis(g, H);
  const int n = interior_count(g);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * 9);

  auto add = [&](int row_i, int row_j, double row_coef, int col_i, int col_j, double dvalue) {
    if (!is_interior(g, row_i, row_j) || !is_interior(g, col_i, col_j)) return;
    trips.emplace_back(unknown_index(g, row_i, row_j), unknown_index(g, col_i, col_j),
                       row_coef * dvalue);
  };

  const double h0 = dis.h0, h1 = dis.h1;

  // c0-faces (i+1/2, j); each feeds the residual rows (i, j) and (i+1, j)
  for (int i = 0; i <= g.n0 - 2; ++i) {
    const double gf = dis.face0_metric(i);
    for (int j = 1; j <= g.n1 - 2; ++j) {
      double a, b;
      dis.face0_gradient(i, j, a, b);
      const double bh = b / gf;
      const double W = std::sqrt(1.0 + a * a + bh * bh);
      const double W3 = W * W * W;
      const double dF_da = frozen_w ? 1.0 / W : (1.0 + bh * bh) / W3;
      const double dF_db = frozen_w ? 0.0 : -a * bh / (gf * W3);

      const double coef_lo = gf / (g.metric(g.coord0(i)) * h0);        // into row (i, j)
      const double coef_hi = -gf / (g.metric(g.coord0(i + 1)) * h0);   // into row (i+1, j)
      for (const auto& [ri, coef] : {std::pair{i, coef_lo}, std::pair{i + 1, coef_hi}}) {
        add(ri, j, coef, i + 1, j, dF_da / h0);
        add(ri, j, coef, i, j, -dF_da / h0);
        add(ri, j, coef, i + 1, j + 1, dF_db / (4.0 * h1));
        add(ri, j, coef, i, j + 1, dF_db / (4.0 * h1));
        add(ri, j, coef, i + 1, j - 1, -dF_db / (4.0 * h1));
        add(ri, j, coef, i, j - 1, -dF_db / (4.0 * h1));
      }
    }
  }

  // c1-faces (i, j+1/2); each feeds the residual rows (i, j) and (i, j+1)
  for (int i = 1; i <= g.n0 - 2; ++i) {
    const double m = g.metric(g.coord0(i));
    for (int j = 0; j <= g.n1 - 2; ++j) {
      double a, b;
      dis.face1_gradient(i, j, a, b);
      const double bh = b / m;
      const double W = std::sqrt(1.0 + a * a + bh * bh);
      const double W3 = W * W * W;
      const double dF_db = frozen_w ? 1.0 / (m * m * W) : (1.0 + a * a) / (m * m * W3);
      const double dF_da = frozen_w ? 0.0 : -a * bh / (m * W3);

      for (const auto& [rj, coef] : {std::pair{j, 1.0 / h1}, std::pair{j + 1, -1.0 / h1}}) {
        add(i, rj, coef, i, j + 1, dF_db / h1);
        add(i, rj, coef, i, j, -dF_db / h1);
        add(i, rj, coef, i + 1, j, dF_da / (4.0 * h0));
        add(i, rj, coef, i + 1, j + 1, dF_da / (4.0 * h0));
        add(i, rj, coef, i - 1, j, -dF_da / (4.0 * h0));
        add(i, rj, coef, i - 1, j + 1, -dF_da / (4.0 * h0));
      }
    }
  }

  Eigen::SparseMatrix<double> J(n, n);
  J.setFromTriplets(trips.begin(), trips.end());
  return J;
}

void add_to_interior(ChartGrid& g, const Eigen::VectorXd& delta, double alpha) {
  for (int i = 1; i <= g.n0 - 2; ++i)
    for (int j = 1; j <= g.n1 - 2; ++j) g.at(i, j) += alpha * delta[unknown_index(g, i, j)];
}

// One linearized direction (exact Jacobian or frozen-W Picard operator)
// followed by a backtracking line search on the L2 merit. Directions larger
// than step_cap in the max norm are rejected outright: updates beyond the
// height scale of the problem head into the saturated |grad u| regime, whose
// residual plateau can out-score physical states in any norm. Returns false
// if the direction is oversized or no step length gives sufficient decrease.
bool try_direction(ChartGrid& g, double H, bool frozen_w, double tol, double step_cap,
                   int max_halvings, Eigen::VectorXd& r, double& merit) {
  Eigen::SparseMatrix<double> J = interior_jacobian(g, H, frozen_w);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(J);
  if (lu.info() != Eigen::Success) return false;
  const Eigen::VectorXd delta = lu.solve(-r);
  if (!(delta.lpNorm<Eigen::Infinity>() <= step_cap)) return false;

  double alpha = 1.0;
  for (int halving = 0; halving <= max_halvings; ++halving) {
    add_to_interior(g, delta, alpha);
    const Eigen::VectorXd r_try = interior_residual(g, H);
    const double merit_try = r_try.norm();
    if (merit_try < (1.0 - 1e-4 * alpha) * merit || r_try.lpNorm<Eigen::Infinity>() < tol) {
      r = r_try;
      merit = merit_try;
      return true;
    }
    add_to_interior(g, delta, -alpha);  // undo and retry shorter
    alpha *= 0.5;
  }
  return false;
}

double boundary_scale(const ChartGrid& g) {
  double m = 0.0;
  for (int j = 0; j < g.n1; ++j)
    m = std::max({m, std::fabs(g.at(0, j)), std::fabs(g.at(g.n0 - 1, j))});
  for (int i = 0; i < g.n0; ++i)
    m = std::max({m, std::fabs(g.at(i, 0)), std::fabs(g.at(i, g.n1 - 1))});
  return m;
}

// Convergence is judged in the max norm; the line search uses the L2 merit.
// The Picard direction backs up the exact Newton direction whenever the
// latter is oversized or fails its line search; the Picard target solves the
// lagged linear problem with the true boundary data, so it is physical no
// matter where the iterate stands.
bool newton_inner(ChartGrid& g, double H, double tol, int max_iters, SolveReport& rep) {
  const double step_cap = 8.0 * (1.0 + boundary_scale(g));
  Eigen::VectorXd r = interior_residual(g, H);
  double norm = r.lpNorm<Eigen::Infinity>();
  double merit = r.norm();
  for (int it = 0; it < max_iters; ++it) {
    if (norm < tol) {
      rep.residual_norm = norm;
      rep.converged = true;
      return true;
    }
    ++rep.newton_iters;
    const bool accepted = try_direction(g, H, false, tol, step_cap, 8, r, merit) ||
                          try_direction(g, H, true, tol, 4.0 * step_cap, 30, r, merit);
    norm = r.lpNorm<Eigen::Infinity>();
    if (!accepted) {
      rep.residual_norm = norm;
      return false;  // no acceptable step in either direction
    }
  }
  rep.residual_norm = norm;
  rep.converged = norm < tol;
  return rep.converged;
}

}  // namespace

std::vector<double> assemble_residual(const ChartGrid& grid, double H) {
  grid.validate();
  const Discretization dis(grid, H);
  std::vector<double> r(grid.u.size(), 0.0);
  for (int i = 1; i <= grid.n0 - 2; ++i)
    for (int j = 1; j <= grid.n1 - 2; ++j)
      r[static_cast<size_t>(i) * grid.n1 + j] = dis.residual_at(i, j);
  return r;
}

SolveReport newton_solve(ChartGrid& grid, double H, double tol, int max_iters) {
  if (!(H >= 0.0 && H < 0.5)) throw std::domain_error("newton_solve needs H in [0, 1/2)");
  grid.apply_boundary();

  SolveReport rep;
  if (!newton_inner(grid, H, tol, max_iters, rep) && H > 0.0) {
    // continuation in H from the zero guess
    for (int i = 1; i <= grid.n0 - 2; ++i)
      for (int j = 1; j <= grid.n1 - 2; ++j) grid.at(i, j) = 0.0;
    rep.converged = false;
    const double h_step = 0.05;
    double h_cur = 0.0;
    while (h_cur < H) {
      h_cur = std::min(h_cur + h_step, H);
      SolveReport stage;
      if (!newton_inner(grid, h_cur, tol, max_iters, stage)) {
        rep.newton_iters += stage.newton_iters;
        rep.residual_norm = stage.residual_norm;
        rep.converged = false;
        break;
      }
      rep.newton_iters += stage.newton_iters;
      rep.residual_norm = stage.residual_norm;
      rep.converged = (h_cur == H);
    }
  }

  const auto [mn, mx] = std::minmax_element(grid.u.begin(), grid.u.end());
  rep.min_u = *mn;
  rep.max_u = *mx;
  return rep;
}

double max_face_flux_norm(const ChartGrid& grid, double H) {
  const Discretization dis(grid, H);
  double worst = 0.0;
  for (int i = 0; i <= grid.n0 - 2; ++i) {
    const double gf = dis.face0_metric(i);
    for (int j = 1; j <= grid.n1 - 2; ++j) {
      double a, b;
      dis.face0_gradient(i, j, a, b);
      const double bh = b / gf;
      const double W2 = 1.0 + a * a + bh * bh;
      worst = std::max(worst, std::sqrt((a * a + bh * bh) / W2));
    }
  }
  for (int i = 1; i <= grid.n0 - 2; ++i) {
    const double m = grid.metric(grid.coord0(i));
    for (int j = 0; j <= grid.n1 - 2; ++j) {
      double a, b;
      dis.face1_gradient(i, j, a, b);
      const double bh = b / m;
      const double W2 = 1.0 + a * a + bh * bh;
      worst = std::max(worst, std::sqrt((a * a + bh * bh) / W2));
    }
  }
  return worst;
}

// --- scenarios ---------------------------------------------------------------

double strip_scenario_exact(double H, double l, double t) {
  return strip_profile(H, l, std::min(std::fabs(t), l));
}

double annulus_scenario_exact(double H, double rho, double rho_hat) {
  return nodoid_profile(H, rho, rho_hat - rho);
}

ChartGrid make_strip_scenario(double H, double l, double length, int n) {
  ChartGrid g = ChartGrid::make(ChartKind::Fermi, -l, l, 0.0, length, n, n);
  g.bc_c0_min = [](double) { return 0.0; };
  g.bc_c0_max = [](double) { return 0.0; };
  if (H == 0.0) {  // the translation-invariant minimal graph is u = 0
    g.bc_c1_min = [](double) { return 0.0; };
  } else {
    g.bc_c1_min = [H, l](double t) { return strip_scenario_exact(H, l, t); };
  }
  g.bc_c1_max = g.bc_c1_min;
  return g;
}

ChartGrid make_annulus_scenario(double H, double rho, double d1, double d2, double theta_max,
                                int n) {
  if (!(0.0 < d1 && d1 < d2))
    throw std::domain_error("annulus scenario needs 0 < d1 < d2");
  ChartGrid g = ChartGrid::make(ChartKind::Polar, rho + d1, rho + d2, 0.0, theta_max, n, n);
  auto radial = [H, rho](double rho_hat) { return annulus_scenario_exact(H, rho, rho_hat); };
  const double u_inner = radial(rho + d1);
  const double u_outer = radial(rho + d2);
  g.bc_c0_min = [u_inner](double) { return u_inner; };
  g.bc_c0_max = [u_outer](double) { return u_outer; };
  g.bc_c1_min = radial;
  g.bc_c1_max = radial;
  return g;
}

std::vector<RefinementEntry> convergence_study(ChartKind chart, double H, int levels, int base_n) {
  if (levels < 1) throw std::domain_error("convergence_study needs levels >= 1");
  const double l = 1.0, rho = 1.0, d1 = 0.25, d2 = 1.75, theta_max = 1.0;
  std::vector<RefinementEntry> out;
  for (int lev = 0; lev < levels; ++lev) {
    const int n = (base_n - 1) * (1 << lev) + 1;
    ChartGrid g = chart == ChartKind::Fermi ? make_strip_scenario(H, l, 2.0, n)
                                            : make_annulus_scenario(H, rho, d1, d2, theta_max, n);
    const SolveReport rep = newton_solve(g, H);
    if (!rep.converged)
      throw ConvergenceError("convergence_study: solve did not converge at n = " +
                             std::to_string(n));
    double err = 0.0;
    for (int i = 0; i < g.n0; ++i) {
      const double exact = chart == ChartKind::Fermi
                               ? strip_scenario_exact(H, l, g.coord0(i))
                               : annulus_scenario_exact(H, rho, g.coord0(i));
      for (int j = 0; j < g.n1; ++j) err = std::max(err, std::fabs(g.at(i, j) - exact));
    }
    out.push_back({n, g.h0(), err});
  }
  return out;
}

double observed_order(const std::vector<RefinementEntry>& entries) {
  if (entries.size() < 2) throw std::domain_error("observed_order needs at least two levels");
  const auto& coarse = entries[entries.size() - 2];
  const auto& fine = entries.back();
  return std::log2(coarse.max_error / fine.max_error);
}

// --- export -------------------------------------------------------------------

void write_chart_csv(const ChartGrid& grid, std::ostream& os) {
  os << (grid.chart == ChartKind::Fermi ? "t,x,u\n" : "rho,theta,u\n");
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j)
      os << format_real(grid.coord0(i)) << ',' << format_real(grid.coord1(j)) << ','
         << format_real(grid.at(i, j)) << '\n';
}

void write_disk_csv(const ChartGrid& grid, std::ostream& os) {
  os << "x_disk,y_disk,u\n";
  for (int i = 0; i < grid.n0; ++i)
    for (int j = 0; j < grid.n1; ++j) {
      const DiskPoint p = grid.chart == ChartKind::Fermi
                              ? fermi_to_disk(grid.coord0(i), grid.coord1(j))
                              : polar_to_disk(grid.coord0(i), grid.coord1(j));
      os << format_real(p.x) << ',' << format_real(p.y) << ',' << format_real(grid.at(i, j))
         << '\n';
    }
}

nlohmann::ordered_json SolveReport::to_json() const {
  nlohmann::ordered_json j;
  j["residual_norm"] = json_real(residual_norm);
  j["newton_iters"] = newton_iters;
  j["max_u"] = json_real(max_u);
  j["min_u"] = json_real(min_u);
  j["converged"] = converged;
  return j;
}

}  // namespace cmcbar
