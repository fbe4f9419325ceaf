#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qdiss/cli/scenario.hpp"
#include "qdiss/dynamics.hpp"

namespace qdiss::cli {

/// Shortest decimal text that parses back to exactly x.
std::string format_number(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Header row, then one line per row; '\n' line endings.
std::string to_csv(const CsvTable& table);
/// Inverse of to_csv. Throws IoError on malformed input.
CsvTable parse_csv(std::string_view text);

/// Phase-space coordinate names in interleaved order: q_<label>, p_<label>.
std::vector<std::string> coordinate_names(const std::vector<std::string>& labels);

/// t_seconds, mean_<x> for every coordinate, sigma_<x>_<y> over the upper
/// triangle in row-major order, uncertainty_<label> per mode, then
/// chi_<a>_<b> for every pair of modes.
CsvTable trajectory_table(const Trajectory& traj, const std::vector<std::string>& labels);

/// t_seconds, P, mean_q, var_q for one mode.
CsvTable penetration_table(const Trajectory& traj, std::size_t mode);

/// Long-format density grid: one column per selected coordinate, then rho.
CsvTable density_table(const MomentState& state, const DensityRequest& request,
                       const std::vector<std::string>& labels);

void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace qdiss::cli
