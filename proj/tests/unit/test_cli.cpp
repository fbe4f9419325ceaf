#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qdiss/cli/builtins.hpp"
#include "qdiss/cli/commands.hpp"
#include "qdiss/cli/config.hpp"
#include "qdiss/cli/output.hpp"
#include "qdiss/cli/scenario.hpp"
#include "qdiss/error.hpp"
#include "qdiss/units.hpp"

using namespace qdiss;
using namespace qdiss::cli;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "qdiss");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qdiss_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kMinimal =
    "mass_hbar2_per_MeV = [1, 1]\n"
    "omega_MeV = [1, 1]\n"
    "lambda_MeV = [[0.5, 0], [0, 0.5]]\n"
    "T_MeV = 1\n"
    "initial_var_q = [0.5, 0.5]\n"
    "t_end_s = 1e-22\n";

std::string slurp(const fs::path& p) { return read_file(p); }

}  // namespace

TEST(Config, ParsesCommentsAndMultilineArrays) {
  const auto doc = ConfigDocument::parse(
      "# header\n"
      "name = \"a # not a comment\"  # trailing\n"
      "\n"
      "nu_MeV = [[0, 1],   # first row\n"
      "          [1, 0]]\n"
      "flag = true\n");
  ASSERT_EQ(doc.entries().size(), 3u);
  EXPECT_EQ(doc.find("name")->value.get<std::string>(), "a # not a comment");
  EXPECT_EQ(doc.find("nu_MeV")->value[1][0].get<double>(), 1.0);
  EXPECT_EQ(doc.find("nu_MeV")->line, 4);
  EXPECT_EQ(doc.find("flag")->line, 6);
}

TEST(Config, ErrorsCarryLineNumbers) {
  const auto message = [](const char* text) {
    try {
      ConfigDocument::parse(text, "x.cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("a = 1\nb 2\n").find("x.cfg:2"), std::string::npos);
  EXPECT_NE(message("a = 1\n\na = 2\n").find("x.cfg:3: duplicate key"), std::string::npos);
  EXPECT_NE(message("a = [1,\n 2\n").find("unbalanced"), std::string::npos);
  EXPECT_NE(message("a = 1\nb = 1.2.3\n").find("x.cfg:2"), std::string::npos);
  EXPECT_NE(message("a = {\"x\": 1}\n").find("x.cfg:1"), std::string::npos);
  EXPECT_NE(message("9a = 1\n").find("invalid key"), std::string::npos);
  EXPECT_NE(message("a =\n").find("missing value"), std::string::npos);
}

TEST(Config, MissingFileIsIoError) { EXPECT_THROW(ConfigDocument::load("/nonexistent/x.cfg"), IoError); }

TEST(Scenario, BindsUnitsIntoInternalValues) {
  const auto cfg = bind_scenario(load_builtin("fig6"));
  EXPECT_EQ(cfg.system.mass[0], 461.6344);
  EXPECT_EQ(cfg.system.nu(0, 1), -1869.0);
  EXPECT_EQ(cfg.dissipation.temperature, 2.0);
  EXPECT_EQ(cfg.labels, (std::vector<std::string>{"Z", "N"}));
  EXPECT_NEAR(cfg.initial_covariance(1, 1), 0.25 / 1e-4, 1e-9);
  EXPECT_NEAR(cfg.time_grid().back(), seconds_to_internal(30e-22), 1e-14);
  EXPECT_EQ(cfg.time_grid().size(), cfg.grid);
  ASSERT_TRUE(cfg.sweep.has_value());
  EXPECT_EQ(cfg.sweep->values.size(), 3u);
}

TEST(Scenario, KappaInPerMeVSecondsSquared) {
  auto doc = ConfigDocument::parse(kMinimal);
  doc.set("kappa_per_MeV_s2", nlohmann::json::parse("[[0, 1e38], [1e38, 0]]"));
  const auto cfg = bind_scenario(doc);
  EXPECT_NEAR(cfg.system.kappa(0, 1), 1e38 * kHbarSquaredMeV2Seconds2, 1e-20);
}

TEST(Scenario, SchemaErrors) {
  auto doc = ConfigDocument::parse(std::string(kMinimal) + "colour = 3\n");
  try {
    bind_scenario(doc);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(":7: unknown key 'colour'"), std::string::npos) << e.what();
  }
  doc = ConfigDocument::parse(kMinimal);
  doc.erase("mass_hbar2_per_MeV");
  EXPECT_THROW(bind_scenario(doc), ConfigError);
  doc = ConfigDocument::parse(std::string(kMinimal) + "omega_MeV_per_hbar = [1, 1]\n");
  EXPECT_THROW(bind_scenario(doc), ConfigError);
  doc = ConfigDocument::parse(kMinimal);
  doc.set("omega_MeV", nlohmann::json::parse("[1, 1, 1]"));
  EXPECT_THROW(bind_scenario(doc), ConfigError);
  doc = ConfigDocument::parse(kMinimal);
  doc.set("nu_MeV", nlohmann::json::parse("[[0, 1], [2, 0]]"));
  EXPECT_THROW(bind_scenario(doc), ModelError);
  doc = ConfigDocument::parse(kMinimal);
  doc.set("density_times_s", nlohmann::json::parse("[0, 2e-22, 1e-22]"));
  doc.set("density_q_range", nlohmann::json::parse("[[-1, 1]]"));
  EXPECT_THROW(bind_scenario(doc), ConfigError);
}

TEST(Scenario, EveryBuiltinUsesOnlySchemaKeys) {
  const auto& keys = schema_keys();
  for (const auto& b : builtin_scenarios()) {
    const auto doc = load_builtin(b.name);
    for (const auto& e : doc.entries())
      EXPECT_NE(std::find(keys.begin(), keys.end(), e.key), keys.end()) << b.name << ": " << e.key;
    EXPECT_NO_THROW(bind_scenario(doc)) << b.name;
  }
  EXPECT_EQ(builtin_scenarios().size(), 10u);
  EXPECT_THROW(load_builtin("fig11"), ConfigError);
}

TEST(Scenario, SubUncertaintyInitialStateWarns) {
  auto doc = ConfigDocument::parse(kMinimal);
  doc.set("initial_var_p", nlohmann::json::parse("[0.1, 0.5]"));
  const auto cfg = bind_scenario(doc);
  ASSERT_EQ(cfg.warnings.size(), 1u);
  EXPECT_NE(cfg.warnings[0].find("uncertainty"), std::string::npos);
}

TEST(Sweep, ParsesTargetsAndValues) {
  const auto s = parse_sweep("lambda_MeV[1,1]+lambda_MeV[2,2]=3,2,1.6");
  ASSERT_EQ(s.targets.size(), 2u);
  EXPECT_EQ(s.targets[1].key, "lambda_MeV");
  EXPECT_EQ(s.targets[1].index, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(s.values, (std::vector<double>{3, 2, 1.6}));
  EXPECT_THROW(parse_sweep("lambda_MeV[0,1]=1"), ConfigError);
  EXPECT_THROW(parse_sweep("lambda_MeV[1,1]"), ConfigError);
  EXPECT_THROW(parse_sweep("colour[1]=1"), ConfigError);
  EXPECT_THROW(parse_sweep("lambda_MeV[1,1]=x"), ConfigError);
}

TEST(Sweep, MirrorsSymmetricAndAntisymmetricPartners) {
  auto doc = ConfigDocument::parse(kMinimal);
  apply_sweep_value(doc, parse_sweep("nu_MeV[1,2]=0.3").targets[0], 0.3);
  apply_sweep_value(doc, parse_sweep("alpha_MeV[1,2]=0.01").targets[0], 0.01);
  const auto cfg = bind_scenario(doc);
  EXPECT_EQ(cfg.system.nu(1, 0), 0.3);
  EXPECT_EQ(cfg.dissipation.alpha(0, 1), 0.01);
  EXPECT_EQ(cfg.dissipation.alpha(1, 0), -0.01);
  EXPECT_THROW(apply_sweep_value(doc, parse_sweep("nu_MeV[1,3]=1").targets[0], 1.0), ConfigError);
}

TEST(Sweep, ExpandsOneMemberPerValue) {
  const auto members = expand_sweep(load_builtin("fig2"));
  ASSERT_EQ(members.size(), 3u);
  EXPECT_EQ(members[0].config.system.nu(0, 1), 3000.0);
  EXPECT_EQ(members[2].config.system.nu(1, 0), -3000.0);
  EXPECT_EQ(*members[1].value, -1869.0);
  const auto single = expand_sweep(load_builtin("fig1"));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_FALSE(single[0].value.has_value());
  const auto overridden = expand_sweep(load_builtin("fig1"), parse_sweep("T_MeV=1,2"));
  EXPECT_EQ(overridden[1].config.dissipation.temperature, 2.0);
}

TEST(Csv, NumbersRoundTripExactly) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> e(-300, 300);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, e(rng)) * (i % 2 ? -1 : 1);
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.25), "0.25");
}

TEST(Csv, TrajectoryTableRoundTripsByteForByte) {
  const auto cfg = bind_scenario(load_builtin("fig8"));
  std::vector<double> t = cfg.time_grid();
  t.resize(50);
  const auto tr = trajectory(cfg.system, cfg.dissipation, cfg.initial_state(), t);
  const auto table = trajectory_table(tr, cfg.labels);
  const std::string text = to_csv(table);
  const auto back = parse_csv(text);
  EXPECT_EQ(back.header, table.header);
  EXPECT_EQ(back.rows, table.rows);
  EXPECT_EQ(to_csv(back), text);
  EXPECT_EQ(table.header.front(), "t_seconds");
  EXPECT_EQ(table.header.size(), 1u + 4u + 10u + 2u + 1u);
  EXPECT_EQ(table.header[5], "sigma_q_Z_q_Z");
  EXPECT_EQ(table.header.back(), "chi_Z_N");
  EXPECT_THROW(parse_csv("a,b\n1\n"), IoError);
  EXPECT_THROW(parse_csv("a,b\n1,x\n"), IoError);
}

TEST(Csv, CoordinateNames) {
  EXPECT_EQ(coordinate_names({"Z", "N"}), (std::vector<std::string>{"q_Z", "p_Z", "q_N", "p_N"}));
}

TEST(Cli, ScenariosListAndShow) {
  const auto r = run({"scenarios", "list"});
  EXPECT_EQ(r.code, 0);
  for (int i = 1; i <= 10; ++i) EXPECT_NE(r.out.find("fig" + std::to_string(i) + "\t"), std::string::npos);
  const auto s = run({"scenarios", "show", "fig9"});
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("inverted_barrier"), std::string::npos);
  EXPECT_EQ(run({"scenarios", "show", "nope"}).code, kExitInput);
}

TEST(Cli, ValidateExitCodes) {
  EXPECT_EQ(run({"validate", "--scenario", "fig1"}).code, kExitOk);
  EXPECT_EQ(run({"validate", "--config", "/nonexistent/x.cfg"}).code, kExitInput);
  EXPECT_EQ(run({"validate"}).code, kExitInput);
  EXPECT_EQ(run({"frobnicate"}).code, kExitInput);
  EXPECT_EQ(run({"--help"}).code, kExitOk);

  const auto dir = scratch("validate");
  const double m = 461.6344;
  std::string text(find_builtin("fig1")->text);
  text += "kappa_per_MeV_s2 = [[0, " + format_number(1.5 / m / kHbarSquaredMeV2Seconds2) + "], [" +
          format_number(1.5 / m / kHbarSquaredMeV2Seconds2) + ", 0]]\n";
  write_file(dir / "bad.cfg", text);
  const auto r = run({"validate", "--config", (dir / "bad.cfg").string()});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.out.find("FAIL kinetic_form_positive_definite"), std::string::npos) << r.out;

  write_file(dir / "syntax.cfg", "mass_hbar2_per_MeV = [1,\n");
  const auto s = run({"validate", "--config", (dir / "syntax.cfg").string()});
  EXPECT_EQ(s.code, kExitInput);
  EXPECT_NE(s.err.find("syntax.cfg:1"), std::string::npos) << s.err;
}

TEST(Cli, ValidateJsonReport) {
  const auto dir = scratch("validate_json");
  ASSERT_EQ(run({"validate", "--scenario", "fig8", "--json", "--out", dir.string()}).code, 0);
  const auto j = nlohmann::json::parse(slurp(dir / "fig8_validation.json"));
  EXPECT_TRUE(j["passed"].get<bool>());
  const auto& report = j["members"][0]["report"];
  EXPECT_TRUE(report["passed"].get<bool>());
  EXPECT_FALSE(report["checks"].empty());
  EXPECT_TRUE(report.contains("notes"));
}

TEST(Cli, EveryBuiltinSimulates) {
  const auto dir = scratch("builtins");
  for (const auto& b : builtin_scenarios()) {
    const auto r = run({"simulate", "--scenario", std::string(b.name), "--grid", "300", "--out", dir.string()});
    EXPECT_EQ(r.code, 0) << b.name << "\n" << r.err;
    const auto summary = nlohmann::json::parse(slurp(dir / (std::string(b.name) + "_summary.json")));
    ASSERT_TRUE(summary.contains("members"));
    for (const auto& member : summary["members"]) {
      for (const char* key : {"index", "parameter_hash", "sweep", "csv", "off_diagonal_D", "validation_passed",
                              "integrated", "spectrum", "diffusion_matrix", "steady_state", "gibbs_covariance",
                              "gibbs_targets", "min_uncertainty_product", "einstein_deviation"})
        EXPECT_TRUE(member.contains(key)) << b.name << " missing " << key;
      const auto table = parse_csv(slurp(dir / member["csv"].get<std::string>()));
      EXPECT_EQ(table.rows.size(), 300u);
      EXPECT_EQ(table.header.front(), "t_seconds");
      if (!member["steady_state"].is_null()) {
        for (const auto& [col, value] : member["steady_state"].items())
          EXPECT_NE(std::find(table.header.begin(), table.header.end(), col), table.header.end()) << col;
      }
    }
  }
}

TEST(Cli, RerunsAreBitIdentical) {
  const auto a = scratch("rerun_a");
  const auto b = scratch("rerun_b");
  ASSERT_EQ(run({"simulate", "--scenario", "fig10", "--grid", "200", "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"simulate", "--scenario", "fig10", "--grid", "200", "--out", b.string()}).code, 0);
  int files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
    ++files;
  }
  EXPECT_EQ(files, 6);
}

TEST(Cli, ForceRunsDespiteValidationFailure) {
  const auto dir = scratch("force");
  std::string text(find_builtin("fig1")->text);
  text += "alpha_MeV = [[0, 0.0016], [-0.0016, 0]]\n";
  write_file(dir / "alpha.cfg", text);
  const auto r = run({"simulate", "--config", (dir / "alpha.cfg").string(), "--grid", "20", "--out", dir.string()});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("FAIL alpha_bound[1,2]"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir / "fig1.csv"));
  const auto f =
      run({"simulate", "--config", (dir / "alpha.cfg").string(), "--grid", "20", "--out", dir.string(), "--force"});
  EXPECT_EQ(f.code, 0) << f.err;
  const auto j = nlohmann::json::parse(slurp(dir / "fig1_summary.json"));
  EXPECT_FALSE(j["members"][0]["validation_passed"].get<bool>());
}

TEST(Cli, ZeroedCrossDiffusionFlag) {
  const auto dir = scratch("zeroed");
  ASSERT_EQ(run({"simulate", "--scenario", "fig1", "--grid", "20", "--zero-offdiag-D", "--out", dir.string()}).code,
            0);
  const auto j = nlohmann::json::parse(slurp(dir / "fig1_summary.json"));
  EXPECT_EQ(j["members"][0]["off_diagonal_D"], "zeroed");
  const auto& d = j["members"][0]["diffusion_matrix"];
  EXPECT_EQ(d[0][2].get<double>(), 0.0);
  EXPECT_EQ(d[1][3].get<double>(), 0.0);
}

TEST(Cli, TunnelOutputs) {
  const auto dir = scratch("tunnel");
  const auto r = run({"tunnel", "--scenario", "fig9", "--grid", "100", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pen = parse_csv(slurp(dir / "fig9_penetration.csv"));
  EXPECT_EQ(pen.header, (std::vector<std::string>{"t_seconds", "P", "mean_q", "var_q"}));
  const auto j = nlohmann::json::parse(slurp(dir / "fig9_tunnel.json"));
  EXPECT_NEAR(j["members"][0]["P_initial"].get<double>(), 0.5 * std::erfc(6.0 / std::sqrt(0.8)), 1e-30);
  int frames = 0;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().filename().string().find("_density_") != std::string::npos) {
      const auto t = parse_csv(slurp(entry.path()));
      EXPECT_EQ(t.header, (std::vector<std::string>{"q_q1", "q_q2", "rho"}));
      EXPECT_EQ(t.rows.size(), 61u * 61u);
      ++frames;
    }
  EXPECT_EQ(frames, 4);
  EXPECT_EQ(run({"tunnel", "--scenario", "fig1", "--out", scratch("tunnel_bad").string()}).code, kExitValidation);
}
