#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cmcbar/base.hpp"

namespace cmcbar {

/// The three barrier graph families over regions of the hyperbolic plane:
///  - Strip: graph over the band between two hypercycles equidistant l from a
///    geodesic, parametrized by the distance d to the geodesic, zero on both
///    boundary curves.
///  - Hypercycle: graph over one side of a hypercycle of curvature -tanh(r),
///    parametrized by the distance d to it, zero on the curve itself.
///  - Nodoid: rotationally symmetric graph over an annulus outside a circle
///    of radius rho, parametrized by the distance d to the circle.
enum class BarrierFamily { Strip, Hypercycle, Nodoid };

std::string to_string(BarrierFamily f);
BarrierFamily family_from_string(const std::string& name);

/// Identifies one member of a barrier family: the mean curvature H in
/// (0, 1/2) together with the family's shape parameter (l > 0 for Strip,
/// r > atanh(-2H) for Hypercycle, rho > 0 for Nodoid).
struct BarrierParams {
  double H = 0.25;
  BarrierFamily family = BarrierFamily::Strip;
  double shape = 1.0;

  void validate() const;  // throws std::domain_error
};

void validate_mean_curvature(double H);

/// Lower bound of the hypercycle shape parameter: atanh(-2H).
double min_hypercycle_offset(double H);

// --- closed-form scalar functions -----------------------------------------

/// Flux (sine of the inclination angle) of the hypercycle barrier profile at
/// offset t >= 0 from the boundary curve. Equals 1 at t = 0, is strictly
/// decreasing, and tends to -2H as t -> infinity.
double hypercycle_flux(double H, double r, double t);

/// 1 - hypercycle_flux, computed without cancellation near t = 0.
double hypercycle_flux_gap(double H, double r, double t);

/// Flux of the nodoid barrier profile at offset t >= 0 from the inner circle
/// of radius rho > 0.
double nodoid_flux(double H, double rho, double t);
double nodoid_flux_gap(double H, double rho, double t);

/// Common large-shape limit of both fluxes: (1+2H) e^{-t} - 2H.
double limit_flux(double H, double t);

/// Distance from the boundary curve to the profile maximum (where the flux
/// vanishes).
double hypercycle_apex_distance(double H, double r);
double nodoid_apex_distance(double H, double rho);

/// Limit of both apex distances as the shape parameter grows: log(1/(2H)+1).
double limit_apex_distance(double H);

// --- profiles and heights ---------------------------------------------------

/// Height of the strip barrier profile at distance d from the geodesic,
/// 0 <= d <= l: the quadrature of 2H tanh(s)/sqrt(1-4H^2 tanh^2 s) over [d, l].
double strip_profile(double H, double l, double d, double quad_tol = 1e-10);

/// Closed-form height of the strip barrier of half-width l >= 0. Vanishes at
/// l = 0 and increases without bound.
double strip_height(double H, double l);

/// Height of the hypercycle barrier profile at distance d >= 0 from the
/// boundary curve. Zero at d = 0 with vertical tangent (one-sided),
/// maximal at the apex distance, and tends to -infinity as d grows.
double hypercycle_profile(double H, double r, double d, double quad_tol = 1e-10);

double nodoid_profile(double H, double rho, double d, double quad_tol = 1e-10);

/// Maximal height of the hypercycle barrier. Strictly decreasing in r;
/// returns +infinity exactly at r = atanh(-2H), where the family degenerates.
double hypercycle_height(double H, double r, double quad_tol = 1e-10);

/// Maximal height of the nodoid barrier; strictly increasing in rho. Both
/// heights share the limit limit_height(H).
double nodoid_height(double H, double rho, double quad_tol = 1e-10);

/// Common limit of the two barrier heights:
/// pi/2 - (4H/sqrt(1-4H^2)) atanh((1-2H)/sqrt(1-4H^2)).
double limit_height(double H);

// --- sampled profile curves -------------------------------------------------

/// A sampled barrier profile d -> u(d) with its extremum metadata.
struct ProfileCurve {
  BarrierParams params;
  std::vector<std::array<double, 2>> samples;  // (d, u), ascending in d
  double d_max = 0.0;
  double argmax_d = 0.0;
  double height = 0.0;

  void write_csv(std::ostream& os) const;  // columns d,u
  nlohmann::ordered_json to_json() const;
};

/// Samples a profile on [0, d_max]. Hypercycle/Nodoid samples are clustered
/// near d = 0 (quadratic map) to resolve the vertical tangent; Strip samples
/// are uniform. Default 512 samples.
ProfileCurve sample_profile(const BarrierParams& params, double d_max, int n_samples = 512,
                            double quad_tol = 1e-10);

}  // namespace cmcbar
