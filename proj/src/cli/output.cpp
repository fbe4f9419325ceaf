#include "qdiss/cli/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qdiss/gaussian.hpp"
#include "qdiss/units.hpp"

namespace qdiss::cli {

std::string format_number(double x) {
  if (x == 0.0) return "0";  // also folds -0
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw IoError("cannot format number");
  return std::string(buf.data(), ptr);
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    if (end == std::string_view::npos) throw IoError("CSV must end with a newline");
    const std::string_view line = text.substr(0, end);
    text.remove_prefix(end + 1);
    ++line_no;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }

    if (line_no == 1) {
      for (auto f : fields) {
        if (f.empty()) throw IoError("CSV header has an empty column name");
        table.header.emplace_back(f);
      }
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw IoError("CSV line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                    " fields, expected " + std::to_string(table.header.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      double x = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw IoError("CSV line " + std::to_string(line_no) + ": cannot parse '" + std::string(f) + "'");
      }
      row.push_back(x);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw IoError("CSV has no header");
  return table;
}

std::vector<std::string> coordinate_names(const std::vector<std::string>& labels) {
  std::vector<std::string> names;
  for (const auto& l : labels) {
    names.push_back("q_" + l);
    names.push_back("p_" + l);
  }
  return names;
}

CsvTable trajectory_table(const Trajectory& traj, const std::vector<std::string>& labels) {
  const std::vector<std::string> coords = coordinate_names(labels);
  const std::size_t n = labels.size();
  const std::size_t dim = 2 * n;
  CsvTable table;
  table.header.push_back("t_seconds");
  for (const auto& c : coords) table.header.push_back("mean_" + c);
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = a; b < dim; ++b) table.header.push_back("sigma_" + coords[a] + "_" + coords[b]);
  for (const auto& l : labels) table.header.push_back("uncertainty_" + l);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) table.header.push_back("chi_" + labels[i] + "_" + labels[j]);

  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    const MomentState& s = traj.states[r];
    std::vector<double> row;
    row.reserve(table.header.size());
    row.push_back(internal_to_seconds(traj.times[r]));
    for (std::size_t a = 0; a < dim; ++a) row.push_back(s.mean()[static_cast<Eigen::Index>(a)]);
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = a; b < dim; ++b)
        row.push_back(s.covariance()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
    for (double u : uncertainty_products(s)) row.push_back(u);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) row.push_back(correlation_coefficient(s, i, j));
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable penetration_table(const Trajectory& traj, std::size_t mode) {
  CsvTable table;
  table.header = {"t_seconds", "P", "mean_q", "var_q"};
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    const MomentState& s = traj.states[r];
    table.rows.push_back({internal_to_seconds(traj.times[r]), penetration_probability(s, mode),
                          s.mean()[q_index(mode)], s.covariance()(q_index(mode), q_index(mode))});
  }
  return table;
}

CsvTable density_table(const MomentState& state, const DensityRequest& request,
                       const std::vector<std::string>& labels) {
  const PositionMarginal marginal(GaussianState(state), request.modes);
  const std::size_t dims = request.modes.size();
  CsvTable table;
  for (std::size_t m : request.modes) table.header.push_back("q_" + labels[m]);
  table.header.push_back("rho");

  std::size_t total = 1;
  for (std::size_t d = 0; d < dims; ++d) total *= request.points;
  Vector q(static_cast<Eigen::Index>(dims));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    std::vector<double> row;
    // last coordinate varies fastest
    for (std::size_t d = dims; d-- > 0;) {
      const std::size_t i = rest % request.points;
      rest /= request.points;
      const auto [lo, hi] = request.ranges[d];
      q[static_cast<Eigen::Index>(d)] =
          lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(request.points - 1);
    }
    for (std::size_t d = 0; d < dims; ++d) row.push_back(q[static_cast<Eigen::Index>(d)]);
    row.push_back(marginal(q));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace qdiss::cli
