#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "cmcbar/verify.hpp"

using namespace cmcbar;

namespace {

SweepConfig small_config() {
  SweepConfig c = SweepConfig::defaults();
  c.H_grid = {0.15, 0.35};
  c.r_grid = {0.0, 1.0};
  c.rho_grid = {0.5, 1.5};
  c.l_grid = {0.5, 2.0};
  return c;
}

}  // namespace

TEST_CASE("default property suite passes") {
  const VerificationReport report = run_verification(small_config());
  CHECK(report.total() > 30);
  for (const auto& e : report.entries) {
    INFO(e.property_id, " ", e.params.dump(), " margin=", e.margin, " ", e.note);
    CHECK(e.pass);
  }
  CHECK(report.all_pass());
  CHECK(report.failed() == 0);
}

TEST_CASE("config validation") {
  SweepConfig c = small_config();
  c.H_grid.clear();
  CHECK_THROWS_AS(c.validate(), std::domain_error);

  c = small_config();
  c.H_grid = {0.55};
  CHECK_THROWS_AS(c.validate(), std::domain_error);

  c = small_config();
  c.r_grid = {-2.0};  // below atanh(-2H) for the smallest H
  CHECK_THROWS_AS(c.validate(), std::domain_error);

  c = small_config();
  c.tolerances.quadrature = 0.0;
  CHECK_THROWS_AS(c.validate(), std::domain_error);

  c = small_config();
  c.formats = {"yaml"};
  CHECK_THROWS_AS(c.validate(), std::domain_error);
}

TEST_CASE("config json round trip") {
  const SweepConfig c = small_config();
  const auto j = c.to_json();
  const SweepConfig back = SweepConfig::from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.to_json().dump() == j.dump());
  CHECK(back.H_grid == c.H_grid);
  CHECK(back.tolerances.ode == c.tolerances.ode);

  // partial documents inherit defaults
  const SweepConfig partial = SweepConfig::from_json(nlohmann::json::parse(R"({"H_grid":[0.2]})"));
  CHECK(partial.H_grid == std::vector<double>{0.2});
  CHECK(partial.r_grid == SweepConfig::defaults().r_grid);
}

TEST_CASE("report serialization and round trip") {
  SweepConfig c = small_config();
  c.H_grid = {0.25};
  c.r_grid = {1.0};
  c.rho_grid = {1.0};
  c.l_grid = {1.0};
  const VerificationReport report = run_verification(c);

  const auto j = report.to_json();
  CHECK(j["summary"]["total"].get<int>() == report.total());
  CHECK(j["summary"]["failed"].get<int>() == 0);
  for (const auto& e : j["entries"]) {
    CHECK(e.contains("property_id"));
    CHECK(e.contains("tag"));
    CHECK_FALSE(e["tag"].get<std::string>().empty());
    CHECK(e.contains("margin"));
    CHECK(e.contains("pass"));
  }
  // parse -> serialize -> parse is idempotent
  const auto reparsed = nlohmann::ordered_json::parse(j.dump());
  CHECK(reparsed.dump() == j.dump());

  std::ostringstream csv;
  report.write_csv(csv);
  std::istringstream in(csv.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "property_id,tag,params,kind,lhs,rhs,margin,pass");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == report.total());
}

TEST_CASE("identical configs give byte-identical reports") {
  SweepConfig c = small_config();
  c.H_grid = {0.3};
  const std::string a = run_verification(c).to_json().dump();
  const std::string b = run_verification(c).to_json().dump();
  CHECK(a == b);

  // thread count must not change the bytes
  setenv("CMCBAR_THREADS", "1", 1);
  const std::string serial = run_verification(c).to_json().dump();
  unsetenv("CMCBAR_THREADS");
  CHECK(serial == a);
}
