#pragma once

#include <array>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cmcbar/profiles.hpp"

namespace cmcbar {

/// One run of the reduced flux ODE
///     phi' = -2H - phi * tanh(r + d)    (hypercycle, Fermi chart)
///     phi' = -2H - phi * coth(rho + d)  (nodoid, polar chart)
///     phi' = -2H - phi * tanh(d)        (strip, integrated inward from d = l)
/// where phi = u' / sqrt(1 + u'^2). The height rides along as a second state
/// component with u' = phi / sqrt(1 - phi^2).
///
/// This path shares no code with the profile quadratures; it is the
/// brute-force check for every height and flux value they produce.
struct OdeRun {
  BarrierParams params;
  double step = 0.0;           // strip: step in d; otherwise step in tau = sqrt(d)
  double epsilon_start = 0.0;  // offset of the start point from the singular endpoint
  std::vector<std::array<double, 2>> phi_samples;  // (d, phi) at accepted steps
  double height_estimate = 0.0;                    // profile value at the terminus

  nlohmann::ordered_json to_json() const;
};

/// Fourth-order (classical RK4) integration of the flux ODE up to d_end.
/// Hypercycle/Nodoid runs start at d = epsilon_start with the one-term
/// expansions phi = 1 - (2H + g) eps and u = sqrt(2 eps / (2H + g)), and step
/// in the substituted variable tau = sqrt(d) where both components are
/// smooth. Strip runs start at d = l with the boundary slope phi = -2H tanh l
/// and integrate down to d_end.
/// Throws ConvergenceError if |phi| leaves [-1, 1] beyond tolerance
/// (step instability is reported, never clamped).
OdeRun integrate_flux(const BarrierParams& params, double step, double d_end,
                      double epsilon_start = 1e-6);

/// Independent height estimate: for Hypercycle/Nodoid, integrates until the
/// flux crosses zero (the profile maximum) and returns the height there; for
/// Strip, integrates from d = l down to the geodesic and returns u(0).
double oracle_height(const BarrierParams& params, double step = 5e-4,
                     double epsilon_start = 1e-6);

}  // namespace cmcbar
