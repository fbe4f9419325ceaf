#include "qdiss/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qdiss/cli/builtins.hpp"
#include "qdiss/cli/output.hpp"
#include "qdiss/error.hpp"
#include "qdiss/gaussian.hpp"
#include "qdiss/transport.hpp"
#include "qdiss/units.hpp"

namespace qdiss::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kResidualTolerance = 1e-10;

struct RunOptions {
  std::string config;
  std::string scenario;
  std::string sweep;
  bool zero_offdiag = false;
  std::size_t grid = 0;
  std::string out_dir = ".";
  bool force = false;
};

class ValidationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json report_json(const ValidationReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks()) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"measured", std::isfinite(c.measured) ? json(c.measured) : json(nullptr)},
                      {"bound", std::isfinite(c.bound) ? json(c.bound) : json(nullptr)},
                      {"relation", c.relation},
                      {"note", c.note}});
  }
  return {{"passed", report.ok()}, {"checks", checks}, {"notes", report.notes()}};
}

json spectrum_json(const Spectrum& s) {
  json ev = json::array();
  for (const auto& z : s.eigenvalues) ev.push_back({z.real(), z.imag()});
  return {{"stable", s.is_stable}, {"max_real_part", s.max_real_part}, {"eigenvalues", ev}};
}

// Upper-triangle entries keyed like the CSV columns.
json named_covariance(const Matrix& s, const std::vector<std::string>& labels) {
  const auto coords = coordinate_names(labels);
  json out = json::object();
  for (std::size_t a = 0; a < coords.size(); ++a) {
    for (std::size_t b = a; b < coords.size(); ++b) {
      out["sigma_" + coords[a] + "_" + coords[b]] = s(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }
  return out;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ConfigDocument load_document(const RunOptions& opt) {
  if (opt.config.empty() == opt.scenario.empty()) throw ConfigError("give exactly one of --config or --scenario");
  ConfigDocument doc = opt.config.empty() ? load_builtin(opt.scenario) : ConfigDocument::load(opt.config);
  if (opt.grid > 0) doc.set("grid", opt.grid);
  if (opt.zero_offdiag) doc.set("off_diagonal_D", "zeroed");
  return doc;
}

std::vector<SweepMember> load_members(const RunOptions& opt) {
  const ConfigDocument doc = load_document(opt);
  std::optional<SweepSpec> sweep;
  if (!opt.sweep.empty()) sweep = parse_sweep(opt.sweep);
  return expand_sweep(doc, sweep);
}

std::string member_stem(const std::vector<SweepMember>& members, std::size_t i) {
  const std::string& name = members[i].config.name;
  return members.size() == 1 && !members[i].value ? name : name + "_" + std::to_string(i + 1);
}

json member_header(const SweepMember& m, std::size_t i) {
  json j = {{"index", i + 1}, {"parameter_hash", hex(parameter_hash(m.config.system, m.config.dissipation))}};
  if (m.value) {
    j["sweep"] = {{"spec", m.config.sweep ? m.config.sweep->text : ""}, {"value", *m.value}};
  } else {
    j["sweep"] = nullptr;
  }
  return j;
}

// Validates every member; prints the reports of failing members and throws
// unless forced.
std::vector<ValidationReport> validate_members(const std::vector<SweepMember>& members, bool force,
                                               std::ostream& err) {
  std::vector<ValidationReport> reports;
  bool failed = false;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (const auto& w : members[i].config.warnings) err << "warning: " << w << "\n";
    reports.push_back(validate_scenario(members[i].config));
    if (!reports.back().ok()) {
      failed = true;
      err << "validation failed for " << members[i].config.name;
      if (members[i].value) err << " (sweep value " << format_number(*members[i].value) << ")";
      err << ":\n";
      for (const auto& c : reports.back().checks()) {
        if (!c.passed) err << "  FAIL " << c.name << ": measured " << c.measured << ", bound " << c.bound << "\n";
      }
    }
  }
  if (failed && !force) throw ValidationFailure("validation failed; rerun with --force to simulate anyway");
  if (failed) err << "warning: continuing despite validation failures (--force)\n";
  return reports;
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

int cmd_validate(const RunOptions& opt, bool write_json_file, std::ostream& out, std::ostream& err) {
  const auto members = load_members(opt);
  json summary = {{"command", "validate"}, {"scenario", members.front().config.name}, {"members", json::array()}};
  bool all_ok = true;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& m = members[i];
    for (const auto& w : m.config.warnings) err << "warning: " << w << "\n";
    const ValidationReport report = validate_scenario(m.config);
    all_ok = all_ok && report.ok();
    out << "== " << m.config.name;
    if (m.value) out << " [" << m.config.sweep->text << "] value " << format_number(*m.value);
    out << "\n" << report.to_text();
    json member = member_header(m, i);
    member["report"] = report_json(report);
    member["warnings"] = m.config.warnings;
    summary["members"].push_back(std::move(member));
  }
  summary["passed"] = all_ok;
  if (write_json_file) {
    const fs::path dir = prepare_out_dir(opt.out_dir);
    const fs::path path = dir / (members.front().config.name + "_validation.json");
    write_json(path, summary);
    out << "wrote " << path.string() << "\n";
  }
  return all_ok ? kExitOk : kExitValidation;
}

int cmd_simulate(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  const auto members = load_members(opt);
  const auto reports = validate_members(members, opt.force, err);
  const fs::path dir = prepare_out_dir(opt.out_dir);

  json summary = {{"command", "simulate"},
                  {"scenario", members.front().config.name},
                  {"description", members.front().config.description},
                  {"labels", members.front().config.labels},
                  {"time_unit", "s"},
                  {"members", json::array()}};
  for (std::size_t i = 0; i < members.size(); ++i) {
    const ScenarioConfig& cfg = members[i].config;
    TrajectoryOptions topt;
    topt.zero_cross_mode_diffusion = cfg.zero_cross_mode_diffusion;
    const Trajectory traj = trajectory(cfg.system, cfg.dissipation, cfg.initial_state(), cfg.time_grid(), topt);

    const std::string csv_name = member_stem(members, i) + ".csv";
    write_file(dir / csv_name, to_csv(trajectory_table(traj, cfg.labels)));
    out << "wrote " << (dir / csv_name).string() << "\n";

    json m = member_header(members[i], i);
    m["csv"] = csv_name;
    m["off_diagonal_D"] = cfg.zero_cross_mode_diffusion ? "zeroed" : "full";
    m["validation_passed"] = reports[i].ok();
    m["integrated"] = traj.integrated;

    const DriftMatrix drift = drift_matrix(cfg.system, cfg.dissipation);
    DiffusionMatrix diff = diffusion_matrix(cfg.system, cfg.dissipation);
    if (cfg.zero_cross_mode_diffusion) diff = without_cross_mode_terms(diff);
    const Spectrum spectrum = stability(drift);
    m["spectrum"] = spectrum_json(spectrum);
    m["diffusion_matrix"] = matrix_json(diff.matrix());
    if (spectrum.is_stable) {
      const Matrix steady = steady_covariance(drift, diff);
      m["steady_covariance"] = matrix_json(steady);
      m["steady_state"] = named_covariance(steady, cfg.labels);
    } else {
      m["steady_covariance"] = nullptr;
      m["steady_state"] = nullptr;
    }
    const Matrix gibbs = gibbs_covariance(cfg.system, cfg.dissipation.temperature);
    m["gibbs_covariance"] = matrix_json(gibbs);
    m["gibbs_targets"] = named_covariance(gibbs, cfg.labels);

    double min_product = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.states) {
      for (double u : uncertainty_products(s)) min_product = std::min(min_product, u);
    }
    m["min_uncertainty_product"] = min_product;
    m["max_uncertainty_violation"] = std::max(0.0, 0.25 - min_product);

    const EinsteinDeviations ein = einstein_deviation(cfg.system, cfg.dissipation);
    json modes = json::array();
    for (const auto& v : ein.mode) modes.push_back(optional_json(v));
    json pairs = json::array();
    for (const auto& p : ein.pairs) {
      pairs.push_back({{"modes", {cfg.labels[p.k], cfg.labels[p.j]}}, {"deviation", optional_json(p.deviation)}});
    }
    m["einstein_deviation"] = {{"modes", modes}, {"pairs", pairs}};
    m["initial_energy_MeV"] = mean_energy(cfg.system, traj.states.front());
    m["asymptotic_energy_MeV"] =
        cfg.system.has_barrier() ? json(nullptr) : json(asymptotic_energy(cfg.system, cfg.dissipation.temperature));
    summary["members"].push_back(std::move(m));
  }
  const fs::path path = dir / (members.front().config.name + "_summary.json");
  write_json(path, summary);
  out << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_tunnel(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  const auto members = load_members(opt);
  for (const auto& m : members) {
    if (!m.config.system.has_barrier() || !m.config.penetration_mode) {
      throw ValidationFailure("tunnel needs at least one inverted_barrier mode");
    }
  }
  const auto reports = validate_members(members, opt.force, err);
  const fs::path dir = prepare_out_dir(opt.out_dir);

  json summary = {{"command", "tunnel"},
                  {"scenario", members.front().config.name},
                  {"description", members.front().config.description},
                  {"labels", members.front().config.labels},
                  {"time_unit", "s"},
                  {"members", json::array()}};
  for (std::size_t i = 0; i < members.size(); ++i) {
    const ScenarioConfig& cfg = members[i].config;
    const std::size_t mode = *cfg.penetration_mode;
    TrajectoryOptions topt;
    topt.zero_cross_mode_diffusion = cfg.zero_cross_mode_diffusion;
    const Trajectory traj = trajectory(cfg.system, cfg.dissipation, cfg.initial_state(), cfg.time_grid(), topt);

    const std::string stem = member_stem(members, i);
    const std::string csv_name = stem + "_penetration.csv";
    const CsvTable table = penetration_table(traj, mode);
    write_file(dir / csv_name, to_csv(table));
    out << "wrote " << (dir / csv_name).string() << "\n";

    json m = member_header(members[i], i);
    m["csv"] = csv_name;
    m["penetration_mode"] = cfg.labels[mode];
    m["validation_passed"] = reports[i].ok();
    m["integrated"] = traj.integrated;
    m["spectrum"] = spectrum_json(stability(drift_matrix(cfg.system, cfg.dissipation)));
    m["P_initial"] = table.rows.front()[1];
    m["P_final"] = table.rows.back()[1];
    m["initial_energy_MeV"] = mean_energy(cfg.system, traj.states.front());
    m["note"] = "diffusion coefficients use the real equilibrium frequency for barrier modes";

    json frames = json::array();
    if (!cfg.density.times_s.empty()) {
      std::vector<double> times;
      for (double t : cfg.density.times_s) times.push_back(seconds_to_internal(t));
      const Trajectory snaps = trajectory(cfg.system, cfg.dissipation, cfg.initial_state(), times, topt);
      for (std::size_t f = 0; f < snaps.states.size(); ++f) {
        const std::string frame_name = stem + "_density_" + std::to_string(f + 1) + ".csv";
        write_file(dir / frame_name, to_csv(density_table(snaps.states[f], cfg.density, cfg.labels)));
        out << "wrote " << (dir / frame_name).string() << "\n";
        frames.push_back({{"csv", frame_name}, {"t_seconds", cfg.density.times_s[f]}});
      }
    }
    m["density_frames"] = frames;
    summary["members"].push_back(std::move(m));
  }
  const fs::path path = dir / (members.front().config.name + "_tunnel.json");
  write_json(path, summary);
  out << "wrote " << path.string() << "\n";
  return kExitOk;
}

void add_run_options(CLI::App* cmd, RunOptions& opt) {
  auto* config = cmd->add_option("--config", opt.config, "scenario file");
  auto* scenario = cmd->add_option("--scenario", opt.scenario, "built-in scenario name");
  config->excludes(scenario);
  cmd->add_option("--sweep", opt.sweep, "parameter sweep, e.g. nu_MeV[1,2]=3000,-1869,-3000");
  cmd->add_flag("--zero-offdiag-D", opt.zero_offdiag, "zero the cross-mode blocks of the diffusion matrix");
  cmd->add_option("--grid", opt.grid, "number of time points")->check(CLI::Range(2, 100000000));
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_flag("--force", opt.force, "run even if validation fails");
}

}  // namespace

ValidationReport validate_scenario(const ScenarioConfig& cfg) {
  const SystemParams& p = cfg.system;
  const DissipationParams& d = cfg.dissipation;
  ValidationReport report = validate_hamiltonian(p);
  report.merge(validate_dissipation(d, p));

  const DiffusionMatrix diff = diffusion_matrix(p, d);
  report.merge(fundamental_constraints(diff, d));

  const DriftMatrix drift = drift_matrix(p, d);
  const Spectrum spectrum = stability(drift);
  const double bound = -1e-12 * one_norm(drift.matrix());
  if (p.has_barrier()) {
    std::ostringstream os;
    os << "drift spectrum max real part " << spectrum.max_real_part
       << (spectrum.is_stable ? " (stable)" : " (unstable; moments are integrated numerically)");
    report.add_note(os.str());
    report.add_note("diffusion coefficients of barrier modes use the real equilibrium frequency");
  } else {
    report.add({"drift_stable", spectrum.is_stable, spectrum.max_real_part, bound, "<", "max real part of eigenvalues"});
  }

  const ResidualReport residuals = algebraic_residuals(p, d, diff, d.beta());
  if (residuals.evaluable) {
    std::string worst;
    for (const auto& r : residuals.equations) {
      if (r.scaled == residuals.max_scaled) {
        worst = "largest in " + r.name;
        break;
      }
    }
    report.add({"algebraic_residuals", residuals.max_scaled <= kResidualTolerance, residuals.max_scaled,
                kResidualTolerance, "<=", worst});
  } else {
    report.add_note("algebraic residuals not evaluable at this temperature");
  }
  if (cfg.zero_cross_mode_diffusion) {
    report.add_note("simulation uses a diffusion matrix with zeroed cross-mode blocks; checks use the full matrix");
  }
  for (const auto& w : cfg.warnings) report.add_note("warning: " + w);
  return report;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian moment dynamics of coupled dissipative quantum oscillators", "qdiss"};
  app.require_subcommand(1);

  RunOptions opt;
  bool validate_json = false;
  auto* validate = app.add_subcommand("validate", "check a scenario's parameters");
  add_run_options(validate, opt);
  validate->add_flag("--json", validate_json, "also write <name>_validation.json to --out");
  auto* simulate = app.add_subcommand("simulate", "propagate moments and write trajectory CSV and summary JSON");
  add_run_options(simulate, opt);
  auto* tunnel = app.add_subcommand("tunnel", "penetration probability and density frames for barrier scenarios");
  add_run_options(tunnel, opt);

  auto* scenarios = app.add_subcommand("scenarios", "built-in scenarios");
  scenarios->require_subcommand(1);
  auto* list = scenarios->add_subcommand("list", "list built-in scenarios");
  std::string show_name;
  auto* show = scenarios->add_subcommand("show", "print a built-in scenario file");
  show->add_option("name", show_name, "scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (list->parsed()) {
      for (const auto& b : builtin_scenarios()) out << b.name << "\t" << b.summary << "\n";
      return kExitOk;
    }
    if (show->parsed()) {
      const BuiltinScenario* b = find_builtin(show_name);
      if (!b) throw ConfigError("unknown scenario '" + show_name + "'");
      out << b->text;
      return kExitOk;
    }
    if (validate->parsed()) return cmd_validate(opt, validate_json, out, err);
    if (simulate->parsed()) return cmd_simulate(opt, out, err);
    if (tunnel->parsed()) return cmd_tunnel(opt, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ModelError& e) {
    err << "error: invalid parameters: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace qdiss::cli
