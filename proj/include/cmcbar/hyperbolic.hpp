#pragma once

#include <cmath>
#include <stdexcept>

namespace cmcbar {

/// Fermi chart (t, x) about a geodesic of the hyperbolic plane:
/// t is the signed distance to the geodesic, x the arclength along it,
/// and the metric is dt^2 + cosh^2(t) dx^2.
struct FermiChart {
  /// Length factor of the x coordinate (the area element is also cosh t).
  static double metric_coeff(double t) { return std::cosh(t); }

  /// Geodesic curvature of the level curve {t = s}, oriented with the normal
  /// pointing toward decreasing t.
  static double level_curvature(double s) { return -std::tanh(s); }
};

/// Geodesic polar chart (rho, theta) about a point: rho is the distance to
/// the base point, theta in [0, 2pi), metric drho^2 + sinh^2(rho) dtheta^2.
/// rho = 0 is a coordinate singularity.
struct PolarChart {
  static double metric_coeff(double rho) { return std::sinh(rho); }

  /// Laplacian of the distance function to the circle {rho = base}, evaluated
  /// at offset d from it: coth(base + d).
  static double distance_laplacian(double base, double d) {
    return 1.0 / std::tanh(base + d);
  }
};

/// Squared norm of the gradient of u in the Fermi chart from the partials
/// (du/dt, du/dx): du_dt^2 + du_dx^2 / cosh^2(t).
inline double fermi_gradient_norm_sq(double du_dt, double du_dx, double t) {
  const double g = std::cosh(t);
  return du_dt * du_dt + (du_dx / g) * (du_dx / g);
}

/// Same in the polar chart: du_dr^2 + du_dth^2 / sinh^2(rho). rho must be
/// positive (the chart degenerates at the center).
inline double polar_gradient_norm_sq(double du_dr, double du_dth, double rho) {
  if (!(rho > 0.0))
    throw std::domain_error("polar_gradient_norm_sq: rho must be > 0 (chart singularity)");
  const double g = std::sinh(rho);
  return du_dr * du_dr + (du_dth / g) * (du_dth / g);
}

struct DiskPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Maps Fermi coordinates to the Poincare disk, with the base geodesic on the
/// horizontal diameter and (t, x) = (0, 0) at the center. Route: half-plane
/// point (e^x tanh t, e^x sech t) followed by the Cayley transform.
inline DiskPoint fermi_to_disk(double t, double x) {
  const double ex = std::exp(x);
  const double X = ex * std::tanh(t);
  const double Y = ex / std::cosh(t);
  // w = (z - i) / (z + i)
  const double den = X * X + (Y + 1.0) * (Y + 1.0);
  return {(X * X + Y * Y - 1.0) / den, -2.0 * X / den};
}

/// Maps polar coordinates about the disk center: hyperbolic distance rho
/// corresponds to Euclidean radius tanh(rho / 2).
inline DiskPoint polar_to_disk(double rho, double theta) {
  if (rho < 0.0) throw std::domain_error("polar_to_disk: rho must be >= 0");
  const double rad = std::tanh(0.5 * rho);
  return {rad * std::cos(theta), rad * std::sin(theta)};
}

}  // namespace cmcbar
