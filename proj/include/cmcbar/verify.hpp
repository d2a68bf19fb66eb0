#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cmcbar/base.hpp"

namespace cmcbar {

/// Parameter grids and tolerances of a verification sweep. Loaded from a
/// single JSON document; CLI flags override file values.
struct SweepConfig {
  std::vector<double> H_grid;
  std::vector<double> r_grid;    // hypercycle shape values (>= 0 so they suit every H)
  std::vector<double> rho_grid;  // nodoid shape values
  std::vector<double> l_grid;    // strip half-widths
  Tolerances tolerances;
  std::string output_dir = "out";
  std::vector<std::string> formats = {"json", "csv"};

  static SweepConfig defaults();
  static SweepConfig from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
  void validate() const;  // throws std::domain_error on bad grids/tolerances
};

/// One checked property instance. For inequalities pass means margin >= 0
/// (margin = lhs - rhs); for identities pass means |lhs - rhs| <= tolerance.
/// Numeric failures inside a check are recorded in `note` with pass = false
/// rather than aborting the sweep.
struct VerificationEntry {
  std::string property_id;
  std::string tag;  // stable group id of the property family
  nlohmann::ordered_json params;
  std::string kind;  // "inequality" or "identity"
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;  // identities only
  bool pass = false;
  std::string note;
};

struct VerificationReport {
  std::vector<VerificationEntry> entries;

  int total() const { return static_cast<int>(entries.size()); }
  int failed() const;
  bool all_pass() const { return failed() == 0; }

  nlohmann::ordered_json to_json() const;
  void write_csv(std::ostream& os) const;
};

/// Runs the full property suite over the configured grids. Entries are
/// evaluated concurrently (capped by CMCBAR_THREADS) and assembled in a
/// fixed order, so identical configs give byte-identical reports.
VerificationReport run_verification(const SweepConfig& config);

}  // namespace cmcbar
