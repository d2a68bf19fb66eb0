#include "cmcbar/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

#include "cmcbar/ode_oracle.hpp"
#include "cmcbar/profiles.hpp"
#include "cmcbar/scalar_solvers.hpp"
#include "cmcbar/serialize.hpp"

namespace cmcbar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Task = std::function<VerificationEntry()>;

VerificationEntry inequality(std::string id, std::string tag, nlohmann::ordered_json params,
                             double lhs, double rhs) {
  VerificationEntry e;
  e.property_id = std::move(id);
  e.tag = std::move(tag);
  e.params = std::move(params);
  e.kind = "inequality";
  e.lhs = lhs;
  e.rhs = rhs;
  e.margin = lhs - rhs;
  e.pass = e.margin >= 0.0;
  return e;
}

VerificationEntry identity(std::string id, std::string tag, nlohmann::ordered_json params,
                           double lhs, double rhs, double tol) {
  VerificationEntry e;
  e.property_id = std::move(id);
  e.tag = std::move(tag);
  e.params = std::move(params);
  e.kind = "identity";
  e.lhs = lhs;
  e.rhs = rhs;
  e.margin = lhs - rhs;
  e.tolerance = tol;
  e.pass = std::fabs(e.margin) <= tol;
  return e;
}

// minimum of consecutive differences sign * (v[k+1] - v[k]); +inf pairs that
// stay +inf count as flat
double min_consecutive_diff(const std::vector<double>& v, double sign) {
  double worst = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k + 1 < v.size(); ++k) {
    if (std::isinf(v[k]) && std::isinf(v[k + 1])) continue;
    worst = std::min(worst, sign * (v[k + 1] - v[k]));
  }
  return worst;
}

}  // namespace

SweepConfig SweepConfig::defaults() {
  SweepConfig c;
  c.H_grid = {0.05, 0.15, 0.25, 0.35, 0.45};
  c.r_grid = {0.0, 0.5, 1.0, 1.5, 2.0};
  c.rho_grid = {0.5, 1.0, 1.5, 2.0, 2.5};
  c.l_grid = {0.5, 1.0, 2.0, 3.0};
  return c;
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
  SweepConfig c = defaults();
  if (j.contains("H_grid")) c.H_grid = j.at("H_grid").get<std::vector<double>>();
  if (j.contains("r_grid")) c.r_grid = j.at("r_grid").get<std::vector<double>>();
  if (j.contains("rho_grid")) c.rho_grid = j.at("rho_grid").get<std::vector<double>>();
  if (j.contains("l_grid")) c.l_grid = j.at("l_grid").get<std::vector<double>>();
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (t.contains("quadrature")) c.tolerances.quadrature = t.at("quadrature").get<double>();
    if (t.contains("root")) c.tolerances.root_f = t.at("root").get<double>();
    if (t.contains("ode")) c.tolerances.ode = t.at("ode").get<double>();
    if (t.contains("pde")) c.tolerances.pde = t.at("pde").get<double>();
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("formats")) c.formats = j.at("formats").get<std::vector<std::string>>();
  return c;
}

nlohmann::ordered_json SweepConfig::to_json() const {
  nlohmann::ordered_json j;
  j["H_grid"] = H_grid;
  j["r_grid"] = r_grid;
  j["rho_grid"] = rho_grid;
  j["l_grid"] = l_grid;
  j["tolerances"] = {{"quadrature", tolerances.quadrature},
                     {"root", tolerances.root_f},
                     {"ode", tolerances.ode},
                     {"pde", tolerances.pde}};
  j["output_dir"] = output_dir;
  j["formats"] = formats;
  return j;
}

void SweepConfig::validate() const {
  if (H_grid.empty() || r_grid.empty() || rho_grid.empty() || l_grid.empty())
    throw std::domain_error("sweep config: all parameter grids must be non-empty");
  for (double H : H_grid) validate_mean_curvature(H);
  for (double l : l_grid)
    if (!(l > 0.0)) throw std::domain_error("sweep config: l grid values must be > 0");
  for (double rho : rho_grid)
    if (!(rho > 0.0)) throw std::domain_error("sweep config: rho grid values must be > 0");
  const double h_min = *std::min_element(H_grid.begin(), H_grid.end());
  const double r_floor = min_hypercycle_offset(h_min);
  for (double r : r_grid)
    if (!(r > r_floor))
      throw std::domain_error("sweep config: r grid values must exceed atanh(-2H) for every H");
  if (!(tolerances.quadrature > 0.0 && tolerances.root_f > 0.0 && tolerances.ode > 0.0 &&
        tolerances.pde > 0.0))
    throw std::domain_error("sweep config: tolerances must be positive");
  for (const auto& f : formats)
    if (f != "json" && f != "csv")
      throw std::domain_error("sweep config: formats must be a subset of {json, csv}");
}

VerificationReport run_verification(const SweepConfig& config) {
  config.validate();
  const Tolerances& tol = config.tolerances;
  const double identity_tol = 100.0 * tol.quadrature;

  std::vector<Task> tasks;

  for (double H : config.H_grid) {
    for (double r : config.r_grid) {
      tasks.push_back([=] {
        const auto rep = solve_hypercycle_width(H, r, tol);
        return inequality("hypercycle-width-ge-twice-apex", "barrier-width",
                          {{"H", H}, {"r", r}}, rep.value,
                          2.0 * hypercycle_apex_distance(H, r));
      });
      tasks.push_back([=] {
        const double apex = hypercycle_apex_distance(H, r);
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 20; ++k) {
          const double s = apex * k / 21.0;
          worst = std::min(worst, hypercycle_flux(H, r, apex - s) + hypercycle_flux(H, r, apex + s));
        }
        return inequality("flux-symmetric-decay", "flux-decay", {{"H", H}, {"r", r}}, worst, 0.0);
      });
      tasks.push_back([=] {
        const auto rep = solve_matching_halfwidth_hypercycle(H, r, tol);
        return identity("hypercycle-matching-halfwidth", "matching-halfwidth",
                        {{"H", H}, {"r", r}}, strip_height(H, rep.value),
                        hypercycle_height(H, r, tol.quadrature), 10.0 * tol.root_f);
      });
      tasks.push_back([=] {
        BarrierParams p{H, BarrierFamily::Hypercycle, r};
        return identity("hypercycle-height-oracle", "oracle-agreement", {{"H", H}, {"r", r}},
                        hypercycle_height(H, r, tol.quadrature), oracle_height(p), tol.ode);
      });
    }
    for (double rho : config.rho_grid) {
      tasks.push_back([=] {
        const auto rep = solve_nodoid_width(H, rho, tol);
        return inequality("nodoid-width-ge-twice-apex", "barrier-width", {{"H", H}, {"rho", rho}},
                          rep.value, 2.0 * nodoid_apex_distance(H, rho));
      });
      tasks.push_back([=] {
        const auto rep = solve_matching_halfwidth_nodoid(H, rho, tol);
        return identity("nodoid-matching-halfwidth", "matching-halfwidth",
                        {{"H", H}, {"rho", rho}}, strip_height(H, rep.value),
                        nodoid_height(H, rho, tol.quadrature), 10.0 * tol.root_f);
      });
      tasks.push_back([=] {
        BarrierParams p{H, BarrierFamily::Nodoid, rho};
        return identity("nodoid-height-oracle", "oracle-agreement", {{"H", H}, {"rho", rho}},
                        nodoid_height(H, rho, tol.quadrature), oracle_height(p), tol.ode);
      });
    }
    for (double l : config.l_grid) {
      tasks.push_back([=] {
        return identity("strip-height-identity", "height-identity", {{"H", H}, {"l", l}},
                        strip_height(H, l), strip_profile(H, l, 0.0, tol.quadrature),
                        identity_tol);
      });
      tasks.push_back([=] {
        BarrierParams p{H, BarrierFamily::Strip, l};
        return identity("strip-height-oracle", "oracle-agreement", {{"H", H}, {"l", l}},
                        strip_height(H, l), oracle_height(p), tol.ode);
      });
    }

    // monotonicity along refined shape grids
    tasks.push_back([=] {
      std::vector<double> heights;
      for (int k = 0; k <= 24; ++k)
        heights.push_back(hypercycle_height(H, 0.1 + k * 0.1, tol.quadrature));
      return inequality("hypercycle-height-decreasing", "height-monotonicity", {{"H", H}},
                        min_consecutive_diff(heights, -1.0), 0.0);
    });
    tasks.push_back([=] {
      std::vector<double> heights;
      for (int k = 0; k <= 24; ++k)
        heights.push_back(nodoid_height(H, 0.1 + k * 0.1, tol.quadrature));
      return inequality("nodoid-height-increasing", "height-monotonicity", {{"H", H}},
                        min_consecutive_diff(heights, +1.0), 0.0);
    });
    tasks.push_back([=] {
      double a_min = std::numeric_limits<double>::infinity();
      double A_max = -std::numeric_limits<double>::infinity();
      for (double r : config.r_grid)
        a_min = std::min(a_min, hypercycle_height(H, r, tol.quadrature));
      for (double rho : config.rho_grid)
        A_max = std::max(A_max, nodoid_height(H, rho, tol.quadrature));
      return inequality("nodoid-below-hypercycle", "cross-family-bound", {{"H", H}}, a_min,
                        A_max);
    });

    // negative shape offsets: the strip barrier of half-width |r| stays below
    // the hypercycle barrier, and |r| stays below the apex distance
    for (int k = 1; k <= 10; ++k) {
      const double r = min_hypercycle_offset(H) * k / 11.0;
      tasks.push_back([=] {
        return inequality("strip-below-hypercycle-at-negative-offset", "negative-offset",
                          {{"H", H}, {"r", r}}, hypercycle_height(H, r, tol.quadrature),
                          strip_height(H, -r));
      });
      tasks.push_back([=] {
        return inequality("offset-below-apex", "negative-offset", {{"H", H}, {"r", r}},
                          hypercycle_apex_distance(H, r), -r);
      });
    }

    tasks.push_back([=] {
      return identity("hypercycle-limit-height", "limit", {{"H", H}, {"r", 25.0}},
                      hypercycle_height(H, 25.0, tol.quadrature), limit_height(H), 1e-4);
    });
    tasks.push_back([=] {
      return identity("nodoid-limit-height", "limit", {{"H", H}, {"rho", 25.0}},
                      nodoid_height(H, 25.0, tol.quadrature), limit_height(H), 1e-4);
    });
    tasks.push_back([=] {
      const auto rep = solve_limit_halfwidth(H, tol);
      return identity("limit-halfwidth-identity", "matching-halfwidth", {{"H", H}},
                      strip_height(H, rep.value), limit_height(H), 10.0 * tol.root_f);
    });
    tasks.push_back([=] {
      std::vector<double> bounds;
      bounds.reserve(100);
      for (int k = 0; k < 100; ++k)
        bounds.push_back(curvature_height_bound(H, -2.0 + 3.0 * (k + 0.5) / 100.0,
                                                tol.quadrature));
      return inequality("height-bound-monotone", "dispatch", {{"H", H}},
                        min_consecutive_diff(bounds, +1.0), 0.0);
    });
  }

  VerificationReport report;
  report.entries.resize(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), [&](int k) {
    try {
      report.entries[k] = tasks[k]();
    } catch (const std::exception& e) {
      VerificationEntry bad;
      bad.property_id = "task-" + std::to_string(k);
      bad.tag = "error";
      bad.kind = "error";
      bad.lhs = bad.rhs = bad.margin = kNaN;
      bad.pass = false;
      bad.note = e.what();
      report.entries[k] = bad;
    }
  });
  return report;
}

int VerificationReport::failed() const {
  return static_cast<int>(
      std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.pass; }));
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  auto& arr = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json je;
    je["property_id"] = e.property_id;
    je["tag"] = e.tag;
    je["params"] = e.params;
    je["kind"] = e.kind;
    je["lhs"] = json_real(e.lhs);
    je["rhs"] = json_real(e.rhs);
    je["margin"] = json_real(e.margin);
    if (e.kind == "identity") je["tolerance"] = e.tolerance;
    je["pass"] = e.pass;
    if (!e.note.empty()) je["note"] = e.note;
    arr.push_back(std::move(je));
  }
  j["summary"] = {{"total", total()}, {"passed", total() - failed()}, {"failed", failed()}};
  return j;
}

void VerificationReport::write_csv(std::ostream& os) const {
  os << "property_id,tag,params,kind,lhs,rhs,margin,pass\n";
  for (const auto& e : entries) {
    std::string params = e.params.dump();
    std::replace(params.begin(), params.end(), ',', ';');
    std::replace(params.begin(), params.end(), '"', '\'');
    os << e.property_id << ',' << e.tag << ',' << params << ',' << e.kind << ','
       << format_real(e.lhs) << ',' << format_real(e.rhs) << ',' << format_real(e.margin) << ','
       << (e.pass ? "true" : "false") << '\n';
  }
}

}  // namespace cmcbar
