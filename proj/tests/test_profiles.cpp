#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cmcbar/profiles.hpp"
#include "cmcbar/quadrature.hpp"

using namespace cmcbar;

// reference values computed independently at 50-digit precision

TEST_CASE("flux closed forms") {
  // equals 1 exactly at t = 0 for any admissible shape
  CHECK(hypercycle_flux(0.25, 0.0, 0.0) == 1.0);
  CHECK(hypercycle_flux(0.1, -0.05, 0.0) == 1.0);
  CHECK(nodoid_flux(0.25, 1.0, 0.0) == 1.0);

  CHECK(hypercycle_flux(0.25, 0.0, 1.0) ==
        doctest::Approx(0.26725719568600296).epsilon(1e-14));
  CHECK(nodoid_flux(0.25, 1.0, 1.0) ==
        doctest::Approx(0.018099308527999038).epsilon(1e-12));

  // vanishes at the apex distance
  const double z = hypercycle_apex_distance(0.25, 0.0);
  CHECK(hypercycle_flux(0.25, 0.0, z) == doctest::Approx(0.0).epsilon(1e-15));
  const double Z = nodoid_apex_distance(0.25, 1.0);
  CHECK(nodoid_flux(0.25, 1.0, Z) == doctest::Approx(0.0).epsilon(1e-15));

  // tends to -2H far out
  CHECK(hypercycle_flux(0.25, 0.0, 40.0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(nodoid_flux(0.3, 2.0, 40.0) == doctest::Approx(-0.6).epsilon(1e-12));

  CHECK_THROWS_AS(hypercycle_flux(0.25, 0.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(hypercycle_flux(0.25, std::atanh(-0.5) - 0.01, 1.0), std::domain_error);
  CHECK_THROWS_AS(nodoid_flux(0.25, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(hypercycle_flux(0.6, 0.0, 1.0), std::domain_error);
}

TEST_CASE("flux stays in (-1, 1] and is strictly decreasing") {
  for (double H : {0.05, 0.25, 0.45})
    for (double r : {min_hypercycle_offset(H) * 0.5, 0.0, 1.0, 10.0}) {
      double prev = hypercycle_flux(H, r, 0.0);
      CHECK(prev == 1.0);
      for (int k = 1; k <= 40; ++k) {
        const double c = hypercycle_flux(H, r, 0.15 * k);
        CHECK(c < prev);
        CHECK(c > -1.0);
        prev = c;
      }
    }
}

TEST_CASE("flux gap matches 1 - flux and is accurate near zero") {
  for (double t : {1e-12, 1e-8, 1e-3, 0.5, 4.0}) {
    const double gap = hypercycle_flux_gap(0.25, 0.3, t);
    CHECK(gap == doctest::Approx(1.0 - hypercycle_flux(0.25, 0.3, t)).epsilon(1e-9));
    CHECK(gap > 0.0);
  }
  // leading behaviour (2H + tanh r) t
  const double lam = 2.0 * 0.25 + std::tanh(0.3);
  CHECK(hypercycle_flux_gap(0.25, 0.3, 1e-9) == doctest::Approx(lam * 1e-9).epsilon(1e-6));
  const double lam_n = 2.0 * 0.25 + 1.0 / std::tanh(0.7);
  CHECK(nodoid_flux_gap(0.25, 0.7, 1e-9) == doctest::Approx(lam_n * 1e-9).epsilon(1e-6));
}

TEST_CASE("large-shape flux limit") {
  for (double t : {0.1, 0.7, 2.0}) {
    CHECK(hypercycle_flux(0.25, 30.0, t) == doctest::Approx(limit_flux(0.25, t)).epsilon(1e-12));
    CHECK(nodoid_flux(0.25, 30.0, t) == doctest::Approx(limit_flux(0.25, t)).epsilon(1e-12));
  }
}

TEST_CASE("apex distances") {
  CHECK(hypercycle_apex_distance(0.25, 0.0) == doctest::Approx(std::asinh(2.0)).epsilon(1e-15));
  CHECK(nodoid_apex_distance(0.25, 1.0) == doctest::Approx(1.0355361004055605).epsilon(1e-14));
  // large-shape limit log(1/(2H) + 1), approached decreasing in r / increasing in rho
  CHECK(hypercycle_apex_distance(0.25, 25.0) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(nodoid_apex_distance(0.25, 25.0) == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(limit_apex_distance(0.25) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  CHECK(hypercycle_apex_distance(0.25, 0.0) > std::log(3.0));
  CHECK(nodoid_apex_distance(0.25, 1.0) < std::log(3.0));
}

TEST_CASE("strip profile and height") {
  CHECK(strip_profile(0.25, 1.0, 1.0) == 0.0);
  CHECK(strip_height(0.25, 0.0) == doctest::Approx(0.0));
  CHECK(strip_profile(0.25, 1.0, 0.0) == doctest::Approx(0.22664912718174558).epsilon(1e-12));
  CHECK(strip_height(0.25, 1.0) == doctest::Approx(0.22664912718174558).epsilon(1e-14));
  CHECK(strip_profile(0.25, 1.0, 0.5) == doctest::Approx(0.16573472655829477).epsilon(1e-12));
  CHECK(strip_height(0.1, 0.5) == doctest::Approx(0.024076488617017083).epsilon(1e-14));
  CHECK(strip_height(0.45, 3.0) == doctest::Approx(3.7592302925793004).epsilon(1e-14));

  // flat tangent at the geodesic: psi(0) - psi(d) = O(d^2)
  const double drop = strip_profile(0.25, 1.0, 0.0) - strip_profile(0.25, 1.0, 1e-5);
  CHECK(std::fabs(drop) < 1e-9);

  // strictly decreasing in d
  for (int k = 0; k + 1 < 8; ++k)
    CHECK(strip_profile(0.25, 1.0, k / 8.0) > strip_profile(0.25, 1.0, (k + 1) / 8.0));

  // increasing and unbounded in l
  double prev = 0.0;
  for (double l : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double h = strip_height(0.25, l);
    CHECK(h > prev);
    prev = h;
  }
  CHECK(prev > 1.5);

  CHECK_THROWS_AS(strip_profile(0.25, 1.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(strip_profile(0.25, 1.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(strip_height(0.25, -1.0), std::domain_error);
}

TEST_CASE("closed-form strip height equals the profile quadrature") {
  for (double H : {0.05, 0.2, 0.35, 0.45})
    for (double l : {0.25, 1.0, 2.5, 4.0})
      CHECK(strip_height(H, l) == doctest::Approx(strip_profile(H, l, 0.0)).epsilon(1e-11));
}

TEST_CASE("barrier profiles") {
  CHECK(hypercycle_profile(0.25, 0.0, 0.0) == 0.0);
  CHECK(nodoid_profile(0.25, 1.0, 0.0) == 0.0);
  CHECK(hypercycle_profile(0.25, 0.0, 1.0) == doctest::Approx(1.4897534586852442).epsilon(1e-11));
  CHECK(nodoid_profile(0.25, 1.0, 0.5) == doctest::Approx(0.62555970364902947).epsilon(1e-11));

  // profile maximum value is the barrier height
  const double z = hypercycle_apex_distance(0.25, 0.0);
  CHECK(hypercycle_profile(0.25, 0.0, z) == doctest::Approx(1.5466552379308349).epsilon(1e-10));
  const double Z = nodoid_apex_distance(0.25, 1.0);
  CHECK(nodoid_profile(0.25, 1.0, Z) == doctest::Approx(0.71585692801554286).epsilon(1e-10));

  // far out the profile is negative and heading down
  CHECK(hypercycle_profile(0.25, 0.0, 8.0) < -0.5);
  CHECK(hypercycle_profile(0.25, 0.0, 10.0) < hypercycle_profile(0.25, 0.0, 8.0));
}

TEST_CASE("profile derivative matches flux slope away from the boundary") {
  const double H = 0.3, r = 0.4, step = 1e-4;
  for (double d : {0.4, 0.9, 1.6}) {
    const double numeric = (hypercycle_profile(H, r, d + step, 1e-12) -
                            hypercycle_profile(H, r, d - step, 1e-12)) /
                           (2.0 * step);
    const double c = hypercycle_flux(H, r, d);
    const double analytic = c / std::sqrt(1.0 - c * c);
    CHECK(numeric == doctest::Approx(analytic).epsilon(1e-7));
  }
}

TEST_CASE("barrier heights and the degenerate endpoint") {
  CHECK(hypercycle_height(0.25, 1.0) == doctest::Approx(0.90503529568213734).epsilon(1e-11));
  CHECK(hypercycle_height(0.1, 0.5) == doctest::Approx(1.5331841136379295).epsilon(1e-11));
  CHECK(hypercycle_height(0.4, 2.0) == doctest::Approx(0.65546036704597676).epsilon(1e-11));
  CHECK(hypercycle_height(0.3, -0.3) == doctest::Approx(1.9290421293661882).epsilon(1e-11));
  CHECK(nodoid_height(0.1, 0.5) == doctest::Approx(0.71688815184681074).epsilon(1e-11));
  CHECK(nodoid_height(0.4, 2.0) == doctest::Approx(0.63770064804387572).epsilon(1e-11));

  // at exactly r = atanh(-2H) the height is a genuine infinity
  const double rmin = min_hypercycle_offset(0.25);
  CHECK(std::isinf(hypercycle_height(0.25, rmin)));
  CHECK(hypercycle_height(0.25, rmin) > 0.0);
  CHECK_THROWS_AS(hypercycle_height(0.25, rmin - 1e-6), std::domain_error);

  // both heights approach the common limit, nodoid from below
  const double lim = limit_height(0.25);
  CHECK(std::fabs(hypercycle_height(0.25, 20.0) - lim) < 1e-4);
  CHECK(std::fabs(nodoid_height(0.25, 20.0) - lim) < 1e-4);
  CHECK(nodoid_height(0.25, 3.0) < lim);  // at rho = 20 the gap is below quadrature noise
  CHECK(hypercycle_height(0.25, 3.0) > lim);
  CHECK(hypercycle_height(0.25, 30.0) == doctest::Approx(lim).epsilon(1e-9));
}

TEST_CASE("limit height closed form") {
  CHECK(limit_height(0.25) == doctest::Approx(0.81045033049395027).epsilon(1e-14));
  CHECK(limit_height(0.05) == doctest::Approx(1.2699661118094148).epsilon(1e-14));
  // decreasing in H, approaching pi/2 - 1 near the upper endpoint
  CHECK(limit_height(0.4999) == doctest::Approx(0.57086300146255389).epsilon(1e-12));
  double prev = 10.0;
  for (double H : {0.05, 0.15, 0.25, 0.35, 0.45, 0.4999}) {
    const double v = limit_height(H);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
  // agrees with direct quadrature of the limit profile up to its apex
  const double H = 0.25;
  auto integrand = [H](double t) {
    const double c = limit_flux(H, t);
    return c / std::sqrt((1.0 - c) * (1.0 + c));
  };
  const auto quad = integrate_sqrt_singular_left(integrand, limit_apex_distance(H), 1e-12);
  CHECK(quad.converged);
  CHECK(limit_height(H) == doctest::Approx(quad.value).epsilon(1e-10));
}

TEST_CASE("symmetric decay of the flux about the apex") {
  for (double H : {0.1, 0.25, 0.4})
    for (double r : {min_hypercycle_offset(H) * 0.6, 0.0, 0.8, 2.0}) {
      const double z = hypercycle_apex_distance(H, r);
      for (int k = 1; k <= 20; ++k) {
        const double s = z * k / 21.0;
        CHECK(-hypercycle_flux(H, r, z + s) <= hypercycle_flux(H, r, z - s));
      }
    }
}

TEST_CASE("flux monotonicity in the shape parameter") {
  const double fd = 1e-6;
  for (double H : {0.1, 0.3})
    for (double t : {0.3, 1.1, 2.5}) {
      // hypercycle flux decreases with r
      for (double r : {-0.1, 0.5, 1.5}) {
        const double d_dr =
            (hypercycle_flux(H, r + fd, t) - hypercycle_flux(H, r - fd, t)) / (2.0 * fd);
        CHECK(d_dr < 0.0);
      }
      // nodoid flux increases with rho
      for (double rho : {0.4, 1.0, 2.0}) {
        const double d_drho =
            (nodoid_flux(H, rho + fd, t) - nodoid_flux(H, rho - fd, t)) / (2.0 * fd);
        CHECK(d_drho > 0.0);
      }
    }
}

TEST_CASE("negative shape offsets stay below apex and hypercycle height") {
  for (double H : {0.1, 0.25, 0.4})
    for (int k = 1; k <= 10; ++k) {
      const double r = min_hypercycle_offset(H) * k / 11.0;
      CHECK(-r < hypercycle_apex_distance(H, r));
      CHECK(strip_height(H, -r) < hypercycle_height(H, r));
    }
}

TEST_CASE("sampled profile curves") {
  BarrierParams params{0.25, BarrierFamily::Hypercycle, 0.0};
  const double width = 5.197708059201888;  // zero level of this profile
  const ProfileCurve curve = sample_profile(params, width, 128);

  REQUIRE(curve.samples.size() == 128);
  CHECK(curve.samples.front()[0] == 0.0);
  CHECK(curve.samples.front()[1] == 0.0);
  CHECK(curve.samples.back()[0] == doctest::Approx(width));
  CHECK(std::fabs(curve.samples.back()[1]) < 1e-7);
  CHECK(curve.argmax_d == doctest::Approx(std::asinh(2.0)));
  CHECK(curve.height == doctest::Approx(1.5466552379308349).epsilon(1e-9));

  // non-negative up to twice the apex distance, unimodal overall
  bool rising = true;
  double prev = curve.samples.front()[1];
  for (size_t k = 1; k < curve.samples.size(); ++k) {
    const auto [d, u] = curve.samples[k];
    if (d <= 2.0 * curve.argmax_d) CHECK(u >= -1e-12);
    if (rising && u < prev - 1e-12) rising = false;
    if (!rising) CHECK(u <= prev + 1e-12);
    prev = u;
  }
  CHECK_FALSE(rising);  // the maximum is interior

  // strip curve: maximum at d = 0, zero at d = l, strictly decreasing
  BarrierParams strip{0.25, BarrierFamily::Strip, 1.0};
  const ProfileCurve sc = sample_profile(strip, 1.0, 64);
  CHECK(sc.samples.front()[1] == doctest::Approx(0.22664912718174558).epsilon(1e-10));
  CHECK(std::fabs(sc.samples.back()[1]) < 1e-12);
  CHECK(sc.argmax_d == 0.0);
  for (size_t k = 0; k + 1 < sc.samples.size(); ++k)
    CHECK(sc.samples[k][1] > sc.samples[k + 1][1]);

  CHECK_THROWS_AS(sample_profile(strip, 2.0, 64), std::domain_error);  // beyond l
  CHECK_THROWS_AS(sample_profile(params, width, 1), std::domain_error);
}

TEST_CASE("profile curve serialization") {
  BarrierParams params{0.3, BarrierFamily::Nodoid, 1.0};
  const ProfileCurve curve = sample_profile(params, 1.5, 16);

  std::ostringstream csv;
  curve.write_csv(csv);
  std::istringstream in(csv.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "d,u");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 16);

  const auto j = curve.to_json();
  CHECK(j["params"]["family"] == "nodoid");
  CHECK(j["params"]["H"] == 0.3);
  CHECK(j["samples"].size() == 16);
  CHECK(j["height"].get<double>() == doctest::Approx(curve.height));
  // JSON round-trips exactly
  const auto reparsed = nlohmann::ordered_json::parse(j.dump());
  CHECK(reparsed.dump() == j.dump());
}

TEST_CASE("randomized flux invariants") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> uH(0.02, 0.48);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double H = uH(rng);
    const double r = min_hypercycle_offset(H) * u01(rng) + 3.0 * u01(rng);
    const double rho = 0.05 + 3.0 * u01(rng);
    const double t = 4.0 * u01(rng);

    const double c = hypercycle_flux(H, r, t);
    CHECK(c > -1.0);
    CHECK(c <= 1.0);
    CHECK(hypercycle_flux_gap(H, r, t) ==
          doctest::Approx(1.0 - c).epsilon(1e-10));

    const double s = nodoid_flux(H, rho, t);
    CHECK(s > -1.0);
    CHECK(s <= 1.0);
    CHECK(nodoid_flux_gap(H, rho, t) == doctest::Approx(1.0 - s).epsilon(1e-10));

    // the flux vanishes at the apex and decays symmetrically about it
    const double z = hypercycle_apex_distance(H, r);
    CHECK(z > 0.0);
    CHECK(std::fabs(hypercycle_flux(H, r, z)) < 1e-13);
    const double off = z * u01(rng);
    if (off > 0.0)
      CHECK(-hypercycle_flux(H, r, z + off) <= hypercycle_flux(H, r, z - off) + 1e-15);

    const double Z = nodoid_apex_distance(H, rho);
    CHECK(Z > 0.0);
    CHECK(std::fabs(nodoid_flux(H, rho, Z)) < 1e-13);
  }
}

TEST_CASE("parameter validation") {
  BarrierParams bad{0.6, BarrierFamily::Strip, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = {0.25, BarrierFamily::Strip, -1.0};
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = {0.25, BarrierFamily::Hypercycle, -0.7};  // below atanh(-0.5)
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = {0.25, BarrierFamily::Nodoid, 0.0};
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  CHECK_THROWS_AS(family_from_string("sphere"), std::domain_error);
  CHECK(family_from_string("strip") == BarrierFamily::Strip);
  CHECK(to_string(BarrierFamily::Nodoid) == "nodoid");
}
