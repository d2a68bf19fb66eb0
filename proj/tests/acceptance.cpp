// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and runtime budgets are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "cmcbar/ode_oracle.hpp"
#include "cmcbar/pde.hpp"
#include "cmcbar/profiles.hpp"
#include "cmcbar/quadrature.hpp"
#include "cmcbar/scalar_solvers.hpp"

using namespace cmcbar;

namespace {

int failures = 0;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = lo + (hi - lo) * k / (n - 1);
  return v;
}

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// 1. Closed-form strip height vs profile quadrature, |diff| < 1e-8 on the
//    full (H, l) grid, under 10 s.
void criterion_1() {
  Stopwatch timer;
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i)
    for (int j = 1; j <= 16; ++j) {
      const double H = 0.05 * i;
      const double l = 0.25 * j;
      worst = std::max(worst, std::fabs(strip_height(H, l) - strip_profile(H, l, 0.0)));
    }
  const double elapsed = timer.seconds();
  report(1, worst < 1e-8 && elapsed < 10.0, "closed-form vs quadrature strip height",
         fmt("max |diff| = %.3e on 9x16 grid, %.2f s", worst, elapsed));
}

// 2. Quadrature heights vs ODE oracle heights, |diff| < 1e-6 on 10x10 grids
//    per family, under 60 s.
void criterion_2() {
  Stopwatch timer;
  const auto H_grid = linspace(0.05, 0.45, 10);
  const auto r_grid = linspace(0.0, 2.25, 10);
  const auto rho_grid = linspace(0.25, 2.5, 10);
  const auto l_grid = linspace(0.25, 2.5, 10);
  double worst = 0.0;
  for (double H : H_grid) {
    for (double r : r_grid)
      worst = std::max(worst, std::fabs(hypercycle_height(H, r) -
                                        oracle_height({H, BarrierFamily::Hypercycle, r})));
    for (double rho : rho_grid)
      worst = std::max(worst, std::fabs(nodoid_height(H, rho) -
                                        oracle_height({H, BarrierFamily::Nodoid, rho})));
    for (double l : l_grid)
      worst = std::max(worst,
                       std::fabs(strip_height(H, l) - oracle_height({H, BarrierFamily::Strip, l})));
  }
  const double elapsed = timer.seconds();
  report(2, worst < 1e-6 && elapsed < 60.0, "quadrature heights vs flux-ODE oracle",
         fmt("max |diff| = %.3e on 3 x 10x10 grids, %.2f s", worst, elapsed));
}

// 3. Width and decay inequalities with strictly positive margin.
void criterion_3() {
  const auto H_grid = linspace(0.05, 0.45, 20);
  const auto r_grid = linspace(0.0, 2.375, 20);
  const auto rho_grid = linspace(0.25, 2.625, 20);

  double min_margin = 1e300;
  bool ok = true;
  for (double H : H_grid) {
    for (double r : r_grid) {
      const double width = solve_hypercycle_width(H, r).value;
      min_margin = std::min(min_margin, width - 2.0 * hypercycle_apex_distance(H, r));
      const double z = hypercycle_apex_distance(H, r);
      for (int k = 1; k <= 20; ++k) {
        const double s = z * k / 21.0;
        min_margin =
            std::min(min_margin, hypercycle_flux(H, r, z - s) + hypercycle_flux(H, r, z + s));
      }
    }
    for (double rho : rho_grid) {
      const double width = solve_nodoid_width(H, rho).value;
      min_margin = std::min(min_margin, width - 2.0 * nodoid_apex_distance(H, rho));
    }
    for (int k = 1; k <= 10; ++k) {
      const double r = min_hypercycle_offset(H) * k / 11.0;
      min_margin = std::min(min_margin, hypercycle_height(H, r) - strip_height(H, -r));
      min_margin = std::min(min_margin, hypercycle_apex_distance(H, r) + r);
    }
  }
  ok = min_margin > 0.0;
  report(3, ok, "barrier inequalities with positive margin on 20x20 grids",
         fmt("min margin = %.3e", min_margin));
}

// 4. Large-shape limits of both heights and the limit-height quadrature.
void criterion_4() {
  double worst = 0.0;
  for (double H : {0.05, 0.15, 0.25, 0.35, 0.45}) {
    const double lim = limit_height(H);
    worst = std::max(worst, std::fabs(hypercycle_height(H, 25.0) - lim));
    worst = std::max(worst, std::fabs(nodoid_height(H, 25.0) - lim));
  }
  const double H = 0.25;
  auto integrand = [H](double t) {
    const double c = limit_flux(H, t);
    return c / std::sqrt((1.0 - c) * (1.0 + c));
  };
  const auto quad = integrate_sqrt_singular_left(integrand, limit_apex_distance(H), 1e-12);
  const double quad_diff = std::fabs(quad.value - limit_height(H));
  report(4, worst < 1e-4 && quad.converged && quad_diff < 1e-8,
         "barrier heights approach the common limit",
         fmt("max |height(25) - limit| = %.3e, |quad - closed form| = %.3e", worst, quad_diff));
}

// 5. Strict monotonicity of the two heights and the cross-family bound.
void criterion_5() {
  bool ok = true;
  double min_cross = 1e300;
  for (double H : {0.1, 0.25, 0.4}) {
    const auto r_grid = linspace(min_hypercycle_offset(H) + 0.1, 4.0, 50);
    const auto rho_grid = linspace(0.05, 4.0, 50);
    std::vector<double> a(50), A(50);
    for (int k = 0; k < 50; ++k) {
      a[k] = hypercycle_height(H, r_grid[k]);
      A[k] = nodoid_height(H, rho_grid[k]);
    }
    for (int k = 0; k + 1 < 50; ++k) {
      ok = ok && a[k] > a[k + 1];  // strictly decreasing
      ok = ok && A[k] < A[k + 1];  // strictly increasing
    }
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 50; ++j) min_cross = std::min(min_cross, a[i] - A[j]);
  }
  ok = ok && min_cross >= 0.0;
  report(5, ok, "height monotonicity and cross-family bound on 50-point grids",
         fmt("min (hypercycle - nodoid) = %.3e", min_cross));
}

// 6. Scalar solve residuals below 1e-9 and the limit-halfwidth identity.
void criterion_6() {
  double worst_res = 0.0, worst_id = 0.0;
  for (double H : {0.05, 0.15, 0.25, 0.35, 0.45}) {
    const ScalarReport width_h = solve_hypercycle_width(H, 1.0);
    const ScalarReport width_n = solve_nodoid_width(H, 1.0);
    const ScalarReport ell = solve_limit_halfwidth(H);
    const ScalarReport match_h = solve_matching_halfwidth_hypercycle(H, 1.0);
    const ScalarReport match_n = solve_matching_halfwidth_nodoid(H, 1.0);
    for (const auto& rep : {width_h, width_n, ell, match_h, match_n})
      worst_res = std::max(worst_res, std::fabs(rep.residual));
    worst_id = std::max(worst_id, std::fabs(strip_height(H, ell.value) - limit_height(H)));
  }
  report(6, worst_res < 1e-9 && worst_id < 1e-8, "scalar solve residuals and halfwidth identity",
         fmt("max |residual| = %.3e, max |identity gap| = %.3e", worst_res, worst_id));
}

// 7. Dirichlet solves reproduce the exact symmetric solutions at second order.
void criterion_7() {
  bool ok = true;
  std::string detail;
  const double H = 0.25;
  for (ChartKind chart : {ChartKind::Fermi, ChartKind::Polar}) {
    std::vector<double> errors;
    double max_solve_seconds = 0.0;
    double finest_max_u = 0.0;
    for (int n : {33, 65, 129}) {
      ChartGrid g = chart == ChartKind::Fermi
                        ? make_strip_scenario(H, 1.0, 2.0, n)
                        : make_annulus_scenario(H, 1.0, 0.25, 1.75, 1.0, n);
      Stopwatch timer;
      const SolveReport rep = newton_solve(g, H);
      max_solve_seconds = std::max(max_solve_seconds, timer.seconds());
      ok = ok && rep.converged;
      double err = 0.0;
      for (int i = 0; i < g.n0; ++i) {
        const double exact = chart == ChartKind::Fermi
                                 ? strip_scenario_exact(H, 1.0, g.coord0(i))
                                 : annulus_scenario_exact(H, 1.0, g.coord0(i));
        for (int j = 0; j < g.n1; ++j) err = std::max(err, std::fabs(g.at(i, j) - exact));
      }
      errors.push_back(err);
      finest_max_u = rep.max_u;
    }
    const double order = std::log2(errors[1] / errors[2]);
    ok = ok && errors[2] < 1e-3 && order >= 1.7 && order <= 2.3 && max_solve_seconds < 30.0;
    if (chart == ChartKind::Fermi)
      ok = ok && finest_max_u <= strip_height(H, 1.0) + 10.0 * errors[2];
    detail += fmt("%s: err@129 = %.3e order = %.2f slowest solve %.1f s; ",
                  to_string(chart).c_str(), errors[2], order, max_solve_seconds);
  }
  report(7, ok, "Dirichlet solves match exact symmetric solutions", detail);
}

// 8. Height-bound dispatch: exact infinities, the limit value at kappa = -1,
//    and monotonicity across 100 samples of kappa.
void criterion_8() {
  const double H = 0.25;
  bool ok = true;
  for (double kappa : {2.0 * H, 0.6, 1.0, 5.0}) ok = ok && std::isinf(curvature_height_bound(H, kappa));
  ok = ok && curvature_height_bound(H, -1.0) == limit_height(H);
  double prev = 0.0;
  double min_step = 1e300;
  for (int k = 0; k < 100; ++k) {
    const double kappa = -2.0 + 3.0 * (k + 0.5) / 100.0;
    const double v = curvature_height_bound(H, kappa);
    if (k > 0 && !(std::isinf(prev) && std::isinf(v))) min_step = std::min(min_step, v - prev);
    prev = v;
  }
  ok = ok && min_step >= 0.0;
  report(8, ok, "height-bound dispatch: infinities, limit value, monotonicity",
         fmt("min consecutive increment = %.3e", min_step));
}

}  // namespace

int main() {
  Stopwatch total;
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::printf("%d of 8 criteria passed in %.1f s\n", 8 - failures, total.seconds());
  return failures == 0 ? 0 : 1;
}
