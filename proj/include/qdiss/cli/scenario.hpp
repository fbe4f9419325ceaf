#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdiss/cli/config.hpp"
#include "qdiss/dynamics.hpp"
#include "qdiss/model.hpp"

namespace qdiss::cli {

/// `target[+target...]=v1,v2,...` where a target is `key`, `key[i]` or
/// `key[i,j]` with 1-based indices.
struct SweepSpec {
  struct Target {
    std::string key;
    std::vector<std::size_t> index;  // 0-based
  };
  std::vector<Target> targets;
  std::vector<double> values;
  std::string text;
};

SweepSpec parse_sweep(std::string_view text);

struct DensityRequest {
  std::vector<double> times_s;
  std::vector<std::size_t> modes;                  // 0-based
  std::vector<std::pair<double, double>> ranges;  // one per mode
  std::size_t points = 61;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  std::vector<std::string> labels;
  SystemParams system;
  DissipationParams dissipation;
  Vector initial_mean;
  Matrix initial_covariance;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  std::size_t grid = 2000;
  bool zero_cross_mode_diffusion = false;
  std::optional<SweepSpec> sweep;
  std::optional<std::size_t> penetration_mode;  // 0-based
  DensityRequest density;
  /// Non-fatal findings, e.g. an initial state below the uncertainty bound.
  std::vector<std::string> warnings;

  /// Uniform grid from t_start_s to t_end_s, in internal units.
  std::vector<double> time_grid() const;
  MomentState initial_state() const;
};

/// Converts a parsed document into internal-unit parameters. Throws
/// ConfigError for schema problems and ModelError for parameters that break
/// structural invariants.
ScenarioConfig bind_scenario(const ConfigDocument& doc);

struct SweepMember {
  std::optional<double> value;
  ScenarioConfig config;
};

/// One member per sweep value (or a single member without a sweep). The
/// override, when given, replaces the document's own `sweep` entry.
std::vector<SweepMember> expand_sweep(const ConfigDocument& doc, const std::optional<SweepSpec>& override_spec = {});

/// Writes `value` into the document at a sweep target, creating a zero
/// matrix for absent coupling matrices. nu and kappa targets also set the
/// transposed entry; alpha and eta set it to -value.
void apply_sweep_value(ConfigDocument& doc, const SweepSpec::Target& target, double value);

/// Every key the schema accepts.
const std::vector<std::string>& schema_keys();

}  // namespace qdiss::cli
