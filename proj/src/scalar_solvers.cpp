#include "cmcbar/scalar_solvers.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include <nlohmann/json.hpp>

#include "cmcbar/root_finding.hpp"
#include "cmcbar/serialize.hpp"

namespace cmcbar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScalarReport from_root(SolvedQuantity q, const RootResult& r) {
  ScalarReport rep;
  rep.quantity = q;
  rep.value = r.root;
  rep.residual = r.f_root;
  rep.iterations = r.iterations;
  rep.bracket = {r.bracket_lo, r.bracket_hi};
  return rep;
}

ScalarReport unbounded_report(SolvedQuantity q) {
  ScalarReport rep;
  rep.quantity = q;
  rep.value = kInf;
  rep.unbounded = true;
  rep.bracket = {kInf, kInf};
  return rep;
}

// Root of `profile` beyond the apex. profile(apex) is the (positive) barrier
// height and the profile decreases linearly for large d, so doubling the
// upper end from twice the apex distance must find a sign change.
ScalarReport solve_width(SolvedQuantity q, double apex, const std::function<double(double)>& profile,
                         const Tolerances& tol) {
  double lo = 2.0 * apex;
  double flo = profile(lo);
  if (flo == 0.0) {
    ScalarReport rep;
    rep.quantity = q;
    rep.value = lo;
    rep.bracket = {lo, lo};
    return rep;
  }
  if (flo < 0.0) {
    // the inequality width >= 2*apex failed: that is a quadrature bug
    throw ConvergenceError("width solve: profile negative already at twice the apex distance");
  }
  double hi = lo, fhi = flo;
  for (int k = 0; k < 60 && fhi > 0.0; ++k) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = profile(hi);
  }
  if (fhi > 0.0) throw ConvergenceError("width solve: bracket not found (quadrature failure?)");
  return from_root(q, find_root_bracketed(profile, lo, hi, flo, fhi, tol.root_x, tol.root_f));
}

// Monotone solve of strip_height(H, l) = target on the increasing height map.
ScalarReport solve_halfwidth_for_height(SolvedQuantity q, double H, double target,
                                        const Tolerances& tol) {
  if (std::isinf(target)) return unbounded_report(q);
  auto f = [H, target](double l) { return strip_height(H, l) - target; };
  double hi = 1.0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw ConvergenceError("halfwidth solve: target height out of reach");
  }
  return from_root(q, find_root_bracketed(f, 0.0, hi, tol.root_x, tol.root_f));
}

}  // namespace

std::string to_string(SolvedQuantity q) {
  switch (q) {
    case SolvedQuantity::HypercycleWidth: return "hypercycle_width";
    case SolvedQuantity::NodoidWidth: return "nodoid_width";
    case SolvedQuantity::LimitHalfwidth: return "limit_halfwidth";
    case SolvedQuantity::HypercycleMatchingHalfwidth: return "hypercycle_matching_halfwidth";
    case SolvedQuantity::NodoidMatchingHalfwidth: return "nodoid_matching_halfwidth";
  }
  return "?";
}

ScalarReport solve_hypercycle_width(double H, double r, const Tolerances& tol) {
  const double apex = hypercycle_apex_distance(H, r);
  auto profile = [H, r, &tol](double d) { return hypercycle_profile(H, r, d, tol.quadrature); };
  return solve_width(SolvedQuantity::HypercycleWidth, apex, profile, tol);
}

ScalarReport solve_nodoid_width(double H, double rho, const Tolerances& tol) {
  const double apex = nodoid_apex_distance(H, rho);
  auto profile = [H, rho, &tol](double d) { return nodoid_profile(H, rho, d, tol.quadrature); };
  return solve_width(SolvedQuantity::NodoidWidth, apex, profile, tol);
}

ScalarReport solve_limit_halfwidth(double H, const Tolerances& tol) {
  return solve_halfwidth_for_height(SolvedQuantity::LimitHalfwidth, H, limit_height(H), tol);
}

ScalarReport solve_matching_halfwidth_hypercycle(double H, double r, const Tolerances& tol) {
  const double target = hypercycle_height(H, r, tol.quadrature);
  return solve_halfwidth_for_height(SolvedQuantity::HypercycleMatchingHalfwidth, H, target, tol);
}

ScalarReport solve_matching_halfwidth_nodoid(double H, double rho, const Tolerances& tol) {
  const double target = nodoid_height(H, rho, tol.quadrature);
  return solve_halfwidth_for_height(SolvedQuantity::NodoidMatchingHalfwidth, H, target, tol);
}

double curvature_height_bound(double H, double kappa, double quad_tol) {
  validate_mean_curvature(H);
  if (kappa >= 2.0 * H) return kInf;
  if (kappa > -1.0) return hypercycle_height(H, std::atanh(-kappa), quad_tol);
  if (kappa == -1.0) return limit_height(H);
  return nodoid_height(H, std::atanh(-1.0 / kappa), quad_tol);
}

nlohmann::ordered_json ScalarReport::to_json() const {
  nlohmann::ordered_json j;
  j["quantity"] = to_string(quantity);
  j["value"] = json_real(value);
  j["residual"] = json_real(residual);
  j["iterations"] = iterations;
  j["bracket"] = {json_real(bracket[0]), json_real(bracket[1])};
  j["unbounded"] = unbounded;
  return j;
}

}  // namespace cmcbar
