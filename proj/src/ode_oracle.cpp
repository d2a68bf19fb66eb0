#include "cmcbar/ode_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cmcbar/base.hpp"

namespace cmcbar {

namespace {

using State = std::array<double, 2>;  // (phi, u)

template <class Rhs>
State rk4_step(const Rhs& f, double x, const State& y, double h) {
  const State k1 = f(x, y);
  const State k2 = f(x + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
  const State k3 = f(x + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
  const State k4 = f(x + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
  return {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
          y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

double slope(double phi) { return phi / std::sqrt((1.0 - phi) * (1.0 + phi)); }

void check_stable(double phi) {
  if (!(std::fabs(phi) <= 1.0 + 1e-9))
    throw ConvergenceError("flux ODE step instability: |phi| = " + std::to_string(std::fabs(phi)));
}

// curvature of the level curves of the distance function, as a function of d
struct LevelCurvature {
  bool polar;
  double base;  // r or rho
  double operator()(double d) const {
    return polar ? 1.0 / std::tanh(base + d) : std::tanh(base + d);
  }
};

// RHS in the substituted variable tau = sqrt(d)
struct SubstitutedRhs {
  double H;
  LevelCurvature curv;
  State operator()(double tau, const State& y) const {
    const double dphi = -2.0 * H - y[0] * curv(tau * tau);
    return {2.0 * tau * dphi, 2.0 * tau * slope(y[0])};
  }
};

struct StripRhs {
  double H;
  State operator()(double d, const State& y) const {
    return {-2.0 * H - y[0] * std::tanh(d), slope(y[0])};
  }
};

// Series start at d = eps. With g the level curvature at d = 0 and
// lam = 2H + g, the flux expands as 1 - lam d + c2 d^2 and the height head
// integrates to sqrt(2 eps / lam) (1 + mu eps / 3).
State singular_start(double H, double g, double eps) {
  const double lam = 2.0 * H + g;
  const double c2 = 0.5 * (lam * g - (1.0 - g * g));
  const double mu = c2 / (2.0 * lam) - 0.75 * lam;
  return {1.0 - lam * eps + c2 * eps * eps,
          std::sqrt(2.0 * eps / lam) * (1.0 + mu * eps / 3.0)};
}

// The u component is steeply sensitive to phi while tau is small, so steps
// are graded to a fixed fraction of tau before settling at `step`.
double graded_step(double tau, double step) { return std::min(step, 0.05 * tau); }

}  // namespace

OdeRun integrate_flux(const BarrierParams& params, double step, double d_end,
                      double epsilon_start) {
  params.validate();
  if (!(step > 0.0)) throw std::domain_error("integrate_flux: step must be > 0");

  OdeRun run;
  run.params = params;
  run.step = step;

  if (params.family == BarrierFamily::Strip) {
    if (!(d_end >= 0.0 && d_end < params.shape))
      throw std::domain_error("strip flux run integrates from d = l down to d_end in [0, l)");
    run.epsilon_start = 0.0;
    const StripRhs rhs{params.H};
    State y = {-2.0 * params.H * std::tanh(params.shape), 0.0};
    const int n = std::max(1, static_cast<int>(std::ceil((params.shape - d_end) / step)));
    const double h = -(params.shape - d_end) / n;
    double d = params.shape;
    run.phi_samples.push_back({d, y[0]});
    for (int k = 0; k < n; ++k) {
      y = rk4_step(rhs, d, y, h);
      d = params.shape + (k + 1) * h;
      check_stable(y[0]);
      run.phi_samples.push_back({d, y[0]});
    }
    run.height_estimate = y[1];
    return run;
  }

  if (!(epsilon_start > 0.0 && epsilon_start < d_end))
    throw std::domain_error("integrate_flux: need 0 < epsilon_start < d_end");
  run.epsilon_start = epsilon_start;
  const bool polar = params.family == BarrierFamily::Nodoid;
  const double g = polar ? 1.0 / std::tanh(params.shape) : std::tanh(params.shape);
  const SubstitutedRhs rhs{params.H, {polar, params.shape}};
  State y = singular_start(params.H, g, epsilon_start);
  double tau = std::sqrt(epsilon_start);
  const double tau_end = std::sqrt(d_end);
  run.phi_samples.push_back({epsilon_start, y[0]});
  while (tau < tau_end) {
    const double h = std::min(graded_step(tau, step), tau_end - tau);
    y = rk4_step(rhs, tau, y, h);
    tau += h;
    check_stable(y[0]);
    run.phi_samples.push_back({tau * tau, y[0]});
  }
  run.height_estimate = y[1];
  return run;
}

double oracle_height(const BarrierParams& params, double step, double epsilon_start) {
  params.validate();
  if (params.family == BarrierFamily::Strip)
    return integrate_flux(params, step, 0.0).height_estimate;

  const bool polar = params.family == BarrierFamily::Nodoid;
  const double g = polar ? 1.0 / std::tanh(params.shape) : std::tanh(params.shape);
  const SubstitutedRhs rhs{params.H, {polar, params.shape}};

  State y = singular_start(params.H, g, epsilon_start);
  double tau = std::sqrt(epsilon_start);
  constexpr double kTauCap = 8.0;  // d = 64 is far beyond any apex
  while (y[0] > 0.0) {
    if (tau > kTauCap)
      throw ConvergenceError("oracle_height: no flux zero crossing before d = 64");
    const double h = graded_step(tau, step);
    const State y_next = rk4_step(rhs, tau, y, h);
    check_stable(y_next[0]);
    if (y_next[0] <= 0.0) {
      // refine the crossing inside [tau, tau + h] with bisected substeps
      auto advance = [&](double dt) {
        State z = y;
        const double sub = dt / 4.0;
        for (int k = 0; k < 4; ++k) z = rk4_step(rhs, tau + k * sub, z, sub);
        return z;
      };
      double lo = 0.0, hi = h;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (advance(mid)[0] > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      return advance(0.5 * (lo + hi))[1];
    }
    y = y_next;
    tau += h;
  }
  return y[1];
}

nlohmann::ordered_json OdeRun::to_json() const {
  nlohmann::ordered_json j;
  j["params"] = {{"family", to_string(params.family)}, {"H", params.H}, {"shape", params.shape}};
  j["step"] = step;
  j["epsilon_start"] = epsilon_start;
  j["height_estimate"] = height_estimate;
  auto& arr = j["phi_samples"] = nlohmann::ordered_json::array();
  for (const auto& [d, phi] : phi_samples) arr.push_back({d, phi});
  return j;
}

}  // namespace cmcbar
