#include "cmcbar/profiles.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cmcbar/quadrature.hpp"

namespace cmcbar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_offset(double H, double r) {
  if (!(r > min_hypercycle_offset(H)))
    throw std::domain_error("hypercycle shape parameter must satisfy r > atanh(-2H)");
}

void check_radius(double rho) {
  if (!(rho > 0.0)) throw std::domain_error("nodoid shape parameter rho must be > 0");
}

void check_nonneg(double t, const char* what) {
  if (!(t >= 0.0)) throw std::domain_error(std::string(what) + " must be >= 0");
}

double quad_or_throw(const QuadratureResult& q, const char* what) {
  if (!q.converged)
    throw ConvergenceError(std::string("quadrature for ") + what + " did not converge (error ~" +
                           std::to_string(q.error_estimate) + ")");
  return q.value;
}

}  // namespace

std::string to_string(BarrierFamily f) {
  switch (f) {
    case BarrierFamily::Strip: return "strip";
    case BarrierFamily::Hypercycle: return "hypercycle";
    case BarrierFamily::Nodoid: return "nodoid";
  }
  return "?";
}

BarrierFamily family_from_string(const std::string& name) {
  if (name == "strip") return BarrierFamily::Strip;
  if (name == "hypercycle") return BarrierFamily::Hypercycle;
  if (name == "nodoid") return BarrierFamily::Nodoid;
  throw std::domain_error("unknown barrier family '" + name +
                          "' (expected strip, hypercycle or nodoid)");
}

void validate_mean_curvature(double H) {
  if (!(H > 0.0 && H < 0.5))
    throw std::domain_error("mean curvature H must lie in (0, 1/2)");
}

void BarrierParams::validate() const {
  validate_mean_curvature(H);
  switch (family) {
    case BarrierFamily::Strip:
      if (!(shape > 0.0)) throw std::domain_error("strip half-width l must be > 0");
      break;
    case BarrierFamily::Hypercycle:
      check_offset(H, shape);
      break;
    case BarrierFamily::Nodoid:
      check_radius(shape);
      break;
  }
}

double min_hypercycle_offset(double H) {
  validate_mean_curvature(H);
  return std::atanh(-2.0 * H);
}

// The fluxes are evaluated in a form normalized by cosh r (resp. sinh rho):
//   flux = (1 - 2H [g (cosh t - 1) + sinh t]) / (cosh t + g sinh t)
// with g = tanh r (resp. coth rho). This stays finite for every admissible
// shape, including r of order 25 where cosh(r + t) would lose the leading
// digits, and recovers the large-shape limit exactly at g = 1.
namespace {

// cosh t - 1 = 2 sinh^2(t/2): no cancellation for small t
double cosh_minus_one(double t) {
  const double s = std::sinh(0.5 * t);
  return 2.0 * s * s;
}

double flux_normalized(double H, double g, double t) {
  const double chm1 = cosh_minus_one(t);
  const double sh = std::sinh(t);
  return (1.0 - 2.0 * H * (g * chm1 + sh)) / (1.0 + chm1 + g * sh);
}

// 1 - flux:
//   gap = [(cosh t - 1)(1 + 2H g) + sinh t (g + 2H)] / (cosh t + g sinh t),
// every term nonnegative on the admissible domain, so the value is accurate
// down to t of order machine epsilon.
double flux_gap_normalized(double H, double g, double t) {
  const double chm1 = cosh_minus_one(t);
  const double sh = std::sinh(t);
  return (chm1 * (1.0 + 2.0 * H * g) + sh * (g + 2.0 * H)) / (1.0 + chm1 + g * sh);
}

double slope_from_gap(double flux, double gap) {
  // flux / sqrt(1 - flux^2) with 1 - flux^2 = gap (2 - gap)
  return flux / std::sqrt(gap * (2.0 - gap));
}

}  // namespace

double hypercycle_flux(double H, double r, double t) {
  validate_mean_curvature(H);
  check_offset(H, r);
  check_nonneg(t, "offset t");
  return flux_normalized(H, std::tanh(r), t);
}

double hypercycle_flux_gap(double H, double r, double t) {
  validate_mean_curvature(H);
  check_offset(H, r);
  check_nonneg(t, "offset t");
  return flux_gap_normalized(H, std::tanh(r), t);
}

double nodoid_flux(double H, double rho, double t) {
  validate_mean_curvature(H);
  check_radius(rho);
  check_nonneg(t, "offset t");
  return flux_normalized(H, 1.0 / std::tanh(rho), t);
}

double nodoid_flux_gap(double H, double rho, double t) {
  validate_mean_curvature(H);
  check_radius(rho);
  check_nonneg(t, "offset t");
  return flux_gap_normalized(H, 1.0 / std::tanh(rho), t);
}

double limit_flux(double H, double t) {
  validate_mean_curvature(H);
  return (1.0 + 2.0 * H) * std::exp(-t) - 2.0 * H;
}

double hypercycle_apex_distance(double H, double r) {
  validate_mean_curvature(H);
  check_offset(H, r);
  return std::asinh(std::sinh(r) + std::cosh(r) / (2.0 * H)) - r;
}

double nodoid_apex_distance(double H, double rho) {
  validate_mean_curvature(H);
  check_radius(rho);
  return std::acosh(std::cosh(rho) + std::sinh(rho) / (2.0 * H)) - rho;
}

double limit_apex_distance(double H) {
  validate_mean_curvature(H);
  return std::log(1.0 / (2.0 * H) + 1.0);
}

double strip_profile(double H, double l, double d, double quad_tol) {
  validate_mean_curvature(H);
  if (!(l >= 0.0)) throw std::domain_error("strip half-width l must be >= 0");
  if (!(d >= 0.0 && d <= l)) throw std::domain_error("strip profile needs 0 <= d <= l");
  const double HH4 = 4.0 * H * H;
  auto integrand = [H, HH4](double s) {
    const double th = std::tanh(s);
    return 2.0 * H * th / std::sqrt(1.0 - HH4 * th * th);
  };
  return quad_or_throw(integrate_adaptive(integrand, d, l, quad_tol), "strip profile");
}

double strip_height(double H, double l) {
  validate_mean_curvature(H);
  if (!(l >= 0.0)) throw std::domain_error("strip half-width l must be >= 0");
  const double k = std::sqrt(1.0 - 4.0 * H * H);
  const double th = std::tanh(l);
  const double inner = (k + std::sqrt(1.0 - 4.0 * H * H * th * th)) / (k + 1.0);
  return (2.0 * H / k) * std::log(inner * std::cosh(l));
}

namespace {

double barrier_profile(double H, double g, double d, double quad_tol, const char* what) {
  auto integrand = [H, g](double t) {
    const double gap = flux_gap_normalized(H, g, t);
    return slope_from_gap(1.0 - gap, gap);
  };
  return quad_or_throw(integrate_sqrt_singular_left(integrand, d, quad_tol), what);
}

}  // namespace

double hypercycle_profile(double H, double r, double d, double quad_tol) {
  validate_mean_curvature(H);
  check_offset(H, r);
  check_nonneg(d, "distance d");
  return barrier_profile(H, std::tanh(r), d, quad_tol, "hypercycle profile");
}

double nodoid_profile(double H, double rho, double d, double quad_tol) {
  validate_mean_curvature(H);
  check_radius(rho);
  check_nonneg(d, "distance d");
  return barrier_profile(H, 1.0 / std::tanh(rho), d, quad_tol, "nodoid profile");
}

double hypercycle_height(double H, double r, double quad_tol) {
  validate_mean_curvature(H);
  const double rmin = min_hypercycle_offset(H);
  if (r == rmin) return kInf;  // the family degenerates: height diverges
  check_offset(H, r);
  return hypercycle_profile(H, r, hypercycle_apex_distance(H, r), quad_tol);
}

double nodoid_height(double H, double rho, double quad_tol) {
  return nodoid_profile(H, rho, nodoid_apex_distance(H, rho), quad_tol);
}

double limit_height(double H) {
  validate_mean_curvature(H);
  const double k = std::sqrt(1.0 - 4.0 * H * H);
  return M_PI / 2.0 - (4.0 * H / k) * std::atanh((1.0 - 2.0 * H) / k);
}

// --- sampled curves ---------------------------------------------------------

ProfileCurve sample_profile(const BarrierParams& params, double d_max, int n_samples,
                            double quad_tol) {
  params.validate();
  if (n_samples < 2) throw std::domain_error("profile sampling needs at least 2 samples");
  if (!(d_max > 0.0)) throw std::domain_error("profile sampling needs d_max > 0");

  ProfileCurve curve;
  curve.params = params;
  curve.d_max = d_max;
  curve.samples.reserve(n_samples);

  if (params.family == BarrierFamily::Strip) {
    if (d_max > params.shape)
      throw std::domain_error("strip profile is defined for d <= l");
    curve.argmax_d = 0.0;
    curve.height = strip_height(params.H, params.shape);
    // integrate the increments downward from the zero-level boundary at d = l
    std::vector<double> u(n_samples);
    const double step = d_max / (n_samples - 1);
    const double HH4 = 4.0 * params.H * params.H;
    const double H = params.H;
    auto integrand = [H, HH4](double s) {
      const double th = std::tanh(s);
      return 2.0 * H * th / std::sqrt(1.0 - HH4 * th * th);
    };
    u[n_samples - 1] = strip_profile(params.H, params.shape, d_max, quad_tol);
    for (int k = n_samples - 2; k >= 0; --k) {
      const double a = k * step, b = (k + 1) * step;
      u[k] = u[k + 1] + integrate_adaptive(integrand, a, b, quad_tol).value;
    }
    for (int k = 0; k < n_samples; ++k)
      curve.samples.push_back({k * step, u[k]});
    return curve;
  }

  const bool hyper = params.family == BarrierFamily::Hypercycle;
  const double g = hyper ? std::tanh(params.shape) : 1.0 / std::tanh(params.shape);
  curve.argmax_d = hyper ? hypercycle_apex_distance(params.H, params.shape)
                         : nodoid_apex_distance(params.H, params.shape);
  const double H = params.H;
  auto integrand = [H, g](double t) {
    const double gap = flux_gap_normalized(H, g, t);
    return slope_from_gap(1.0 - gap, gap);
  };
  // quadratic clustering resolves the vertical tangent at d = 0
  double u_prev = 0.0, d_prev = 0.0;
  curve.samples.push_back({0.0, 0.0});
  for (int k = 1; k < n_samples; ++k) {
    const double frac = static_cast<double>(k) / (n_samples - 1);
    const double d = d_max * frac * frac;
    double u;
    if (d_prev == 0.0) {
      u = quad_or_throw(integrate_sqrt_singular_left(integrand, d, quad_tol), "profile sample");
    } else {
      u = u_prev + integrate_adaptive(integrand, d_prev, d, quad_tol).value;
    }
    curve.samples.push_back({d, u});
    u_prev = u;
    d_prev = d;
  }
  curve.height = barrier_profile(H, g, curve.argmax_d, quad_tol, "profile height");
  return curve;
}

void ProfileCurve::write_csv(std::ostream& os) const {
  os << "d,u\n";
  char line[64];
  for (const auto& [d, u] : samples) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g\n", d, u);
    os << line;
  }
}

nlohmann::ordered_json ProfileCurve::to_json() const {
  nlohmann::ordered_json j;
  j["params"] = {{"family", to_string(params.family)}, {"H", params.H}, {"shape", params.shape}};
  j["d_max"] = d_max;
  j["argmax_d"] = argmax_d;
  j["height"] = height;
  auto& arr = j["samples"] = nlohmann::ordered_json::array();
  for (const auto& [d, u] : samples) arr.push_back({d, u});
  return j;
}

}  // namespace cmcbar
