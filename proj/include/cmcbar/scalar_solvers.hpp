#pragma once

#include <array>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "cmcbar/base.hpp"
#include "cmcbar/profiles.hpp"

namespace cmcbar {

enum class SolvedQuantity {
  HypercycleWidth,              // distance between the zero levels of the hypercycle barrier
  NodoidWidth,                  // same for the nodoid barrier
  LimitHalfwidth,               // strip half-width whose height equals the limit height
  HypercycleMatchingHalfwidth,  // strip half-width matching a hypercycle barrier height
  NodoidMatchingHalfwidth,      // strip half-width matching a nodoid barrier height
};

std::string to_string(SolvedQuantity q);

/// Result of a bracketed scalar solve. On success |residual| is at or below
/// the configured tolerance and value lies inside bracket. `unbounded` marks
/// the degenerate case where the target height is +infinity and no finite
/// solution exists.
struct ScalarReport {
  SolvedQuantity quantity = SolvedQuantity::HypercycleWidth;
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::array<double, 2> bracket = {0.0, 0.0};
  bool unbounded = false;

  nlohmann::ordered_json to_json() const;
};

/// Width of the positive part of the hypercycle barrier: the d > apex where
/// the profile returns to zero. Bracketed by doubling from twice the apex
/// distance (the profile eventually decreases linearly).
ScalarReport solve_hypercycle_width(double H, double r, const Tolerances& tol = {});

ScalarReport solve_nodoid_width(double H, double rho, const Tolerances& tol = {});

/// The strip half-width at which the strip height reaches the common limit
/// of the barrier heights. Monotone solve on the increasing strip height.
ScalarReport solve_limit_halfwidth(double H, const Tolerances& tol = {});

/// Strip half-width whose height equals the hypercycle barrier height at r.
/// Reports unbounded when that target is +infinity (r at the domain edge).
ScalarReport solve_matching_halfwidth_hypercycle(double H, double r, const Tolerances& tol = {});

ScalarReport solve_matching_halfwidth_nodoid(double H, double rho, const Tolerances& tol = {});

/// A priori height bound as a function of the infimum kappa of the boundary
/// geodesic curvature:
///   +infinity                          for kappa >= 2H,
///   hypercycle height at atanh(-kappa) for kappa in (-1, 2H),
///   the common limit height            at kappa = -1,
///   nodoid height at acoth(-kappa)     for kappa < -1.
/// Monotone non-decreasing in kappa and continuous across kappa = -1.
double curvature_height_bound(double H, double kappa, double quad_tol = 1e-10);

}  // namespace cmcbar
