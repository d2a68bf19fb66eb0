// Command-line front end: profiles, verification sweeps, Dirichlet solves,
// reference tables and Poincare-disk export.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
// 3 numeric non-convergence.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cmcbar/hyperbolic.hpp"
#include "cmcbar/ode_oracle.hpp"
#include "cmcbar/pde.hpp"
#include "cmcbar/profiles.hpp"
#include "cmcbar/scalar_solvers.hpp"
#include "cmcbar/serialize.hpp"
#include "cmcbar/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
}

struct ProfileArgs {
  std::string family;
  double H = 0.25;
  std::optional<double> l, r, rho;
  int samples = 512;
  std::string out = "profile";
};

int run_profile(const ProfileArgs& a) {
  using namespace cmcbar;
  const BarrierFamily family = family_from_string(a.family);
  double shape = 0.0;
  switch (family) {
    case BarrierFamily::Strip:
      if (!a.l) throw std::domain_error("profile strip needs --l");
      shape = *a.l;
      break;
    case BarrierFamily::Hypercycle:
      if (!a.r) throw std::domain_error("profile hypercycle needs --r");
      shape = *a.r;
      break;
    case BarrierFamily::Nodoid:
      if (!a.rho) throw std::domain_error("profile nodoid needs --rho");
      shape = *a.rho;
      break;
  }
  BarrierParams params{a.H, family, shape};
  params.validate();

  double d_max = shape;  // strip: the profile lives on [0, l]
  if (family == BarrierFamily::Hypercycle)
    d_max = solve_hypercycle_width(a.H, shape).value;
  else if (family == BarrierFamily::Nodoid)
    d_max = solve_nodoid_width(a.H, shape).value;

  const ProfileCurve curve = sample_profile(params, d_max, a.samples);

  std::ostringstream csv;
  curve.write_csv(csv);
  write_text_file(a.out + ".csv", csv.str());
  write_text_file(a.out + ".json", curve.to_json().dump(2) + "\n");

  std::cout << "profile " << a.family << " H=" << a.H << " shape=" << shape
            << "  height=" << format_real(curve.height) << " argmax_d=" << format_real(curve.argmax_d)
            << " d_max=" << format_real(curve.d_max) << "\n"
            << "wrote " << a.out << ".csv, " << a.out << ".json\n";
  return kExitOk;
}

struct VerifyArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> formats;
  std::vector<double> H_grid, r_grid, rho_grid, l_grid;
};

int run_verify(const VerifyArgs& a) {
  using namespace cmcbar;
  SweepConfig config = SweepConfig::defaults();
  if (!a.config_path.empty()) {
    std::ifstream is(a.config_path);
    if (!is) throw std::domain_error("cannot read config file " + a.config_path);
    nlohmann::json j;
    is >> j;
    config = SweepConfig::from_json(j);
  }
  // flags override file values
  if (!a.out_dir.empty()) config.output_dir = a.out_dir;
  if (!a.formats.empty()) config.formats = a.formats;
  if (!a.H_grid.empty()) config.H_grid = a.H_grid;
  if (!a.r_grid.empty()) config.r_grid = a.r_grid;
  if (!a.rho_grid.empty()) config.rho_grid = a.rho_grid;
  if (!a.l_grid.empty()) config.l_grid = a.l_grid;
  config.validate();

  const VerificationReport report = run_verification(config);

  const fs::path dir(config.output_dir);
  for (const auto& fmt : config.formats) {
    if (fmt == "json") {
      write_text_file(dir / "verification.json", report.to_json().dump(2) + "\n");
    } else {
      std::ostringstream csv;
      report.write_csv(csv);
      write_text_file(dir / "verification.csv", csv.str());
    }
  }

  for (const auto& e : report.entries)
    if (!e.pass)
      std::cout << "FAIL " << e.property_id << " " << e.params.dump()
                << " margin=" << format_real(e.margin)
                << (e.note.empty() ? "" : " (" + e.note + ")") << "\n";
  std::cout << "verification: " << (report.total() - report.failed()) << "/" << report.total()
            << " properties passed\n";
  return report.all_pass() ? kExitOk : kExitVerifyFail;
}

struct SolveArgs {
  std::string chart = "fermi";
  double H = 0.25;
  double l = 1.0;
  double length = 2.0;
  double rho = 1.0;
  double d1 = 0.25;
  double d2 = 1.75;
  double theta_max = 1.0;
  int n = 65;
  int levels = 1;
  double tol = 1e-10;
  int max_iters = 50;
  std::string out = "solve";
};

int run_solve(const SolveArgs& a) {
  using namespace cmcbar;
  const ChartKind chart = chart_from_string(a.chart);

  if (a.levels > 1) {
    const auto entries = convergence_study(chart, a.H, a.levels, a.n);
    std::cout << "n,spacing,max_error\n";
    std::ostringstream csv;
    csv << "n,spacing,max_error\n";
    for (const auto& e : entries) {
      const std::string line = std::to_string(e.n) + "," + format_real(e.spacing) + "," +
                               format_real(e.max_error) + "\n";
      std::cout << line;
      csv << line;
    }
    std::cout << "observed order: " << format_real(observed_order(entries)) << "\n";
    write_text_file(a.out + "_refinement.csv", csv.str());
    return kExitOk;
  }

  ChartGrid grid = chart == ChartKind::Fermi
                       ? make_strip_scenario(a.H, a.l, a.length, a.n)
                       : make_annulus_scenario(a.H, a.rho, a.d1, a.d2, a.theta_max, a.n);
  const SolveReport rep = newton_solve(grid, a.H, a.tol, a.max_iters);

  std::ostringstream csv;
  write_chart_csv(grid, csv);
  write_text_file(a.out + ".csv", csv.str());
  write_text_file(a.out + "_report.json", rep.to_json().dump(2) + "\n");

  std::cout << "solve " << a.chart << " H=" << a.H << " n=" << a.n
            << "  converged=" << (rep.converged ? "yes" : "no")
            << " residual=" << format_real(rep.residual_norm) << " newton_iters=" << rep.newton_iters
            << " max_u=" << format_real(rep.max_u) << " min_u=" << format_real(rep.min_u) << "\n"
            << "wrote " << a.out << ".csv, " << a.out << "_report.json\n";
  return rep.converged ? kExitOk : kExitNoConvergence;
}

struct TablesArgs {
  std::vector<double> H_grid = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45};
  double r = 1.0;
  double rho = 1.0;
  std::string out_dir = "tables";
};

int run_tables(const TablesArgs& a) {
  using namespace cmcbar;
  std::ostringstream barrier;
  barrier << "H,offset_min,hyp_apex,nod_apex,hyp_height,nod_height,hyp_width,nod_width,"
             "limit_apex,limit_height,limit_halfwidth,matching_halfwidth_hyp,"
             "matching_halfwidth_nod\n";
  std::ostringstream bound;
  bound << "H,kappa,height_bound\n";
  ordered_json scalars = ordered_json::array();

  for (double H : a.H_grid) {
    validate_mean_curvature(H);
    const ScalarReport hyp_width = solve_hypercycle_width(H, a.r);
    const ScalarReport nod_width = solve_nodoid_width(H, a.rho);
    const ScalarReport ell = solve_limit_halfwidth(H);
    const ScalarReport match_hyp = solve_matching_halfwidth_hypercycle(H, a.r);
    const ScalarReport match_nod = solve_matching_halfwidth_nodoid(H, a.rho);
    barrier << format_real(H) << ',' << format_real(min_hypercycle_offset(H)) << ','
            << format_real(hypercycle_apex_distance(H, a.r)) << ','
            << format_real(nodoid_apex_distance(H, a.rho)) << ','
            << format_real(hypercycle_height(H, a.r)) << ','
            << format_real(nodoid_height(H, a.rho)) << ','
            << format_real(hyp_width.value) << ',' << format_real(nod_width.value) << ','
            << format_real(limit_apex_distance(H)) << ',' << format_real(limit_height(H)) << ','
            << format_real(ell.value) << ',' << format_real(match_hyp.value) << ','
            << format_real(match_nod.value) << '\n';
    for (double kappa : {-2.0, -1.5, -1.0, -0.5, 0.0, 0.25 * 2.0 * H, 2.0 * H, 1.0})
      bound << format_real(H) << ',' << format_real(kappa) << ','
            << format_real(curvature_height_bound(H, kappa)) << '\n';
    ordered_json solved = ordered_json::array();
    for (const auto& rep : {hyp_width, nod_width, ell, match_hyp, match_nod})
      solved.push_back(rep.to_json());
    scalars.push_back({{"H", H}, {"r", a.r}, {"rho", a.rho}, {"solves", solved}});
  }

  const fs::path dir(a.out_dir);
  write_text_file(dir / "barriers.csv", barrier.str());
  write_text_file(dir / "height_bound.csv", bound.str());
  write_text_file(dir / "scalars.json", scalars.dump(2) + "\n");
  std::cout << barrier.str() << "\nwrote " << (dir / "barriers.csv").string() << ", "
            << (dir / "height_bound.csv").string() << ", " << (dir / "scalars.json").string()
            << "\n";
  return kExitOk;
}

struct ExportDiskArgs {
  std::string chart = "fermi";
  std::string in;
  std::string out = "disk.csv";
};

int run_export_disk(const ExportDiskArgs& a) {
  using namespace cmcbar;
  const ChartKind chart = chart_from_string(a.chart);
  std::ifstream is(a.in);
  if (!is) throw std::domain_error("cannot read " + a.in);
  std::string header;
  std::getline(is, header);
  const std::string expected = chart == ChartKind::Fermi ? "t,x,u" : "rho,theta,u";
  if (header != expected)
    throw std::domain_error("expected header '" + expected + "' in " + a.in + ", got '" +
                            header + "'");
  std::ostringstream os;
  os << "x_disk,y_disk,u\n";
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double c0, c1, u;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &c0, &c1, &u) != 3)
      throw std::domain_error("malformed CSV row: " + line);
    const DiskPoint p = chart == ChartKind::Fermi ? fermi_to_disk(c0, c1) : polar_to_disk(c0, c1);
    os << format_real(p.x) << ',' << format_real(p.y) << ',' << format_real(u) << '\n';
  }
  write_text_file(a.out, os.str());
  std::cout << "wrote " << a.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CMC barrier surfaces and height estimates in H^2 x R"};
  app.require_subcommand(1);

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "sample a barrier profile to CSV/JSON");
  profile->add_option("family", pa.family, "strip | hypercycle | nodoid")->required();
  profile->add_option("--H", pa.H, "mean curvature in (0, 1/2)")->required();
  profile->add_option("--l", pa.l, "strip half-width");
  profile->add_option("--r", pa.r, "hypercycle offset");
  profile->add_option("--rho", pa.rho, "nodoid inner radius");
  profile->add_option("--samples", pa.samples, "sample count (default 512)");
  profile->add_option("--out", pa.out, "output path prefix");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the property verification sweep");
  verify->add_option("--config", va.config_path, "JSON config file");
  verify->add_option("--out-dir", va.out_dir, "report output directory");
  verify->add_option("--format", va.formats, "json and/or csv");
  verify->add_option("--H-grid", va.H_grid, "override H grid");
  verify->add_option("--r-grid", va.r_grid, "override hypercycle offset grid");
  verify->add_option("--rho-grid", va.rho_grid, "override nodoid radius grid");
  verify->add_option("--l-grid", va.l_grid, "override strip half-width grid");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "solve the Dirichlet problem on a chart rectangle");
  solve->add_option("--chart", sa.chart, "fermi | polar")->required();
  solve->add_option("--H", sa.H, "mean curvature in [0, 1/2)")->required();
  solve->add_option("--l", sa.l, "strip half-width (fermi)");
  solve->add_option("--length", sa.length, "strip x-extent (fermi)");
  solve->add_option("--rho", sa.rho, "inner circle radius (polar)");
  solve->add_option("--d1", sa.d1, "sub-annulus inner offset (polar)");
  solve->add_option("--d2", sa.d2, "sub-annulus outer offset (polar)");
  solve->add_option("--theta-max", sa.theta_max, "sector angle (polar)");
  solve->add_option("--n", sa.n, "nodes per side");
  solve->add_option("--levels", sa.levels, "run a refinement study with this many levels");
  solve->add_option("--tol", sa.tol, "Newton residual tolerance");
  solve->add_option("--max-iters", sa.max_iters, "Newton iteration cap");
  solve->add_option("--out", sa.out, "output path prefix");

  TablesArgs ta;
  auto* tables = app.add_subcommand("tables", "tabulate barrier quantities over an H grid");
  tables->add_option("--H-grid", ta.H_grid, "H values");
  tables->add_option("--r", ta.r, "hypercycle offset for shape-dependent columns");
  tables->add_option("--rho", ta.rho, "nodoid radius for shape-dependent columns");
  tables->add_option("--out-dir", ta.out_dir, "output directory");

  ExportDiskArgs ea;
  auto* exp = app.add_subcommand("export-disk", "map a chart CSV to Poincare disk coordinates");
  exp->add_option("--chart", ea.chart, "fermi | polar")->required();
  exp->add_option("--in", ea.in, "input chart CSV (from solve)")->required();
  exp->add_option("--out", ea.out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (profile->parsed()) return run_profile(pa);
    if (verify->parsed()) return run_verify(va);
    if (solve->parsed()) return run_solve(sa);
    if (tables->parsed()) return run_tables(ta);
    if (exp->parsed()) return run_export_disk(ea);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cmcbar::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
