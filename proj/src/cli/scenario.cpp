#include "qdiss/cli/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "qdiss/error.hpp"
#include "qdiss/units.hpp"

namespace qdiss::cli {
namespace {

using nlohmann::json;

struct Quantity {
  const char* base;
  std::vector<Unit> units;
};

// Physical quantities are keyed as <base>_<unit tag>.
const std::vector<Quantity>& quantities() {
  static const std::vector<Quantity> q = {
      {"mass", {Unit::Hbar2PerMeV}},
      {"mass_eq", {Unit::Hbar2PerMeV}},
      {"omega", {Unit::MeV, Unit::MeVPerHbar}},
      {"omega_eq", {Unit::MeV, Unit::MeVPerHbar}},
      {"mu", {Unit::MeV, Unit::MeVPerHbar}},
      {"nu", {Unit::MeV}},
      {"kappa", {Unit::MeV, Unit::PerMeVSeconds2}},
      {"lambda", {Unit::MeV, Unit::MeVPerHbar}},
      {"alpha", {Unit::MeV, Unit::PerMeVSeconds2}},
      {"eta", {Unit::MeV}},
      {"T", {Unit::MeV}},
  };
  return q;
}

const std::vector<std::string> kPlainKeys = {
    "name",          "description",       "labels",          "kind",          "off_diagonal_D",
    "sweep",         "grid",              "t_start_s",       "t_end_s",       "initial_mean",
    "initial_var_q", "initial_var_p",     "initial_covariance", "penetration_mode", "density_times_s",
    "density_modes", "density_q_range",   "density_points"};

std::string key_of(const char* base, Unit u) { return std::string(base) + "_" + std::string(unit_tag(u)); }

const Quantity* quantity_for_key(std::string_view key) {
  for (const auto& q : quantities()) {
    for (Unit u : q.units) {
      if (key == key_of(q.base, u)) return &q;
    }
  }
  return nullptr;
}

class Binder {
 public:
  explicit Binder(const ConfigDocument& doc) : doc_(doc) {}

  // The (key, unit) of a quantity, if given; at most one unit variant.
  std::optional<std::pair<std::string, Unit>> locate(const char* base) const {
    std::optional<std::pair<std::string, Unit>> found;
    for (const auto& q : quantities()) {
      if (std::string_view(q.base) != base) continue;
      for (Unit u : q.units) {
        const std::string key = key_of(q.base, u);
        if (!doc_.contains(key)) continue;
        if (found) throw doc_.error_at(key, "conflicts with " + found->first);
        found.emplace(key, u);
      }
    }
    return found;
  }

  std::pair<std::string, Unit> require(const char* base) const {
    auto found = locate(base);
    if (!found) {
      std::string options;
      for (const auto& q : quantities()) {
        if (std::string_view(q.base) != base) continue;
        for (Unit u : q.units) options += (options.empty() ? "" : " or ") + key_of(q.base, u);
      }
      throw ConfigError(doc_.source(), 0, "missing required key " + options);
    }
    return *found;
  }

  double number(const std::string& key, const json& v) const {
    if (!v.is_number()) throw doc_.error_at(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw doc_.error_at(key, "value must be finite");
    return x;
  }

  double scalar(const std::string& key) const { return number(key, doc_.find(key)->value); }

  Vector vector(const std::string& key, std::size_t n, double scale = 1.0) const {
    const json& v = doc_.find(key)->value;
    if (!v.is_array() || v.size() != n) {
      throw doc_.error_at(key, "expected an array of " + std::to_string(n) + " numbers");
    }
    Vector out(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) out[static_cast<Eigen::Index>(i)] = number(key, v[i]) * scale;
    return out;
  }

  Matrix matrix(const std::string& key, std::size_t rows, std::size_t cols, double scale = 1.0) const {
    const json& v = doc_.find(key)->value;
    const std::string shape = std::to_string(rows) + "x" + std::to_string(cols);
    if (!v.is_array() || v.size() != rows) throw doc_.error_at(key, "expected a " + shape + " nested array");
    Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
      if (!v[i].is_array() || v[i].size() != cols) throw doc_.error_at(key, "expected a " + shape + " nested array");
      for (std::size_t j = 0; j < cols; ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = number(key, v[i][j]) * scale;
      }
    }
    return out;
  }

  Vector quantity_vector(const char* base, std::size_t n) const {
    const auto [key, unit] = require(base);
    return vector(key, n, unit_convert(1.0, unit));
  }

  Matrix quantity_matrix(const char* base, std::size_t n) const {
    const auto found = locate(base);
    if (!found) return Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    return matrix(found->first, n, n, unit_convert(1.0, found->second));
  }

  std::string string(const std::string& key, std::string fallback) const {
    const ConfigEntry* e = doc_.find(key);
    if (!e) return fallback;
    if (!e->value.is_string()) throw doc_.error_at(key, "expected a string");
    return e->value.get<std::string>();
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    const ConfigEntry* e = doc_.find(key);
    if (!e) return fallback;
    if (!e->value.is_number_integer() || e->value.get<long long>() < 0) {
      throw doc_.error_at(key, "expected a non-negative integer");
    }
    return e->value.get<std::size_t>();
  }

  std::size_t mode_index(const std::string& key, const json& v, std::size_t n) const {
    if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<std::size_t>() > n) {
      throw doc_.error_at(key, "mode indices are integers from 1 to " + std::to_string(n));
    }
    return v.get<std::size_t>() - 1;
  }

  const ConfigDocument& doc() const { return doc_; }

 private:
  const ConfigDocument& doc_;
};

double parse_double(std::string_view s, std::string_view context) {
  s.remove_prefix(std::min(s.find_first_not_of(" \t"), s.size()));
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) {
    throw ConfigError("sweep: cannot parse number '" + std::string(s) + "' in '" + std::string(context) + "'");
  }
  return x;
}

SweepSpec::Target parse_target(std::string_view text, std::string_view context) {
  SweepSpec::Target t;
  const std::size_t open = text.find('[');
  t.key = std::string(text.substr(0, open));
  if (open != std::string_view::npos) {
    if (text.back() != ']') throw ConfigError("sweep: malformed target '" + std::string(text) + "'");
    std::string_view inside = text.substr(open + 1, text.size() - open - 2);
    while (!inside.empty()) {
      const std::size_t comma = inside.find(',');
      const std::string_view part = inside.substr(0, comma);
      const double v = parse_double(part, context);
      if (v < 1.0 || v != std::floor(v)) throw ConfigError("sweep: indices are 1-based integers in '" + std::string(text) + "'");
      t.index.push_back(static_cast<std::size_t>(v) - 1);
      if (comma == std::string_view::npos) break;
      inside.remove_prefix(comma + 1);
    }
    if (t.index.empty() || t.index.size() > 2) throw ConfigError("sweep: target '" + std::string(text) + "' needs one or two indices");
  }
  if (std::find(schema_keys().begin(), schema_keys().end(), t.key) == schema_keys().end() ||
      quantity_for_key(t.key) == nullptr) {
    throw ConfigError("sweep: '" + t.key + "' is not a physical parameter of the schema");
  }
  return t;
}

void check_known_keys(const ConfigDocument& doc) {
  const auto& keys = schema_keys();
  for (const auto& e : doc.entries()) {
    if (std::find(keys.begin(), keys.end(), e.key) == keys.end()) {
      throw ConfigError(doc.source(), e.line, "unknown key '" + e.key + "'");
    }
  }
}

}  // namespace

const std::vector<std::string>& schema_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k = kPlainKeys;
    for (const auto& q : quantities()) {
      for (Unit u : q.units) k.push_back(key_of(q.base, u));
    }
    return k;
  }();
  return keys;
}

SweepSpec parse_sweep(std::string_view text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError("sweep: expected 'target=v1,v2,...', got '" + std::string(text) + "'");
  SweepSpec spec;
  spec.text = std::string(text);
  std::string_view lhs = text.substr(0, eq);
  while (true) {
    const std::size_t plus = lhs.find('+');
    std::string_view part = lhs.substr(0, plus);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    spec.targets.push_back(parse_target(part, text));
    if (plus == std::string_view::npos) break;
    lhs.remove_prefix(plus + 1);
  }
  std::string_view rhs = text.substr(eq + 1);
  while (true) {
    const std::size_t comma = rhs.find(',');
    spec.values.push_back(parse_double(rhs.substr(0, comma), text));
    if (comma == std::string_view::npos) break;
    rhs.remove_prefix(comma + 1);
  }
  return spec;
}

void apply_sweep_value(ConfigDocument& doc, const SweepSpec::Target& target, double value) {
  const ConfigEntry* existing = doc.find(target.key);
  json v;
  if (existing) {
    v = existing->value;
  } else if (target.index.size() == 2) {
    const ConfigEntry* mass = doc.find("mass_hbar2_per_MeV");
    if (!mass || !mass->value.is_array()) throw ConfigError("sweep: cannot size '" + target.key + "' without mass_hbar2_per_MeV");
    const std::size_t n = mass->value.size();
    v = json::array();
    for (std::size_t i = 0; i < n; ++i) v.push_back(json(std::vector<double>(n, 0.0)));
  } else {
    throw ConfigError("sweep: '" + target.key + "' is not set in the scenario");
  }

  const auto out_of_range = [&] { return ConfigError("sweep: index out of range for '" + target.key + "'"); };
  if (target.index.empty()) {
    if (!v.is_number()) throw ConfigError("sweep: '" + target.key + "' is not a scalar");
    v = value;
  } else if (target.index.size() == 1) {
    const std::size_t i = target.index[0];
    if (!v.is_array() || i >= v.size() || !v[i].is_number()) throw out_of_range();
    v[i] = value;
  } else {
    const std::size_t i = target.index[0];
    const std::size_t j = target.index[1];
    if (!v.is_array() || i >= v.size() || j >= v.size() || !v[i].is_array() || j >= v[i].size() || i >= v[j].size()) {
      throw out_of_range();
    }
    v[i][j] = value;
    const std::string base = quantity_for_key(target.key)->base;
    if (i != j && (base == "nu" || base == "kappa")) v[j][i] = value;
    if (i != j && (base == "alpha" || base == "eta")) v[j][i] = -value;
  }
  doc.set(target.key, std::move(v));
}

std::vector<double> ScenarioConfig::time_grid() const {
  std::vector<double> t(grid);
  const double a = seconds_to_internal(t_start_s);
  const double b = seconds_to_internal(t_end_s);
  for (std::size_t i = 0; i < grid; ++i) {
    t[i] = i + 1 == grid ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(grid - 1);
  }
  return t;
}

MomentState ScenarioConfig::initial_state() const { return MomentState(initial_mean, initial_covariance); }

ScenarioConfig bind_scenario(const ConfigDocument& doc) {
  check_known_keys(doc);
  const Binder b(doc);
  ScenarioConfig cfg;
  cfg.name = b.string("name", "scenario");
  cfg.description = b.string("description", "");

  const auto [mass_key, mass_unit] = b.require("mass");
  const json& mass_json = doc.find(mass_key)->value;
  if (!mass_json.is_array() || mass_json.empty()) throw doc.error_at(mass_key, "expected a non-empty array");
  const std::size_t n = mass_json.size();

  SystemParams& p = cfg.system;
  p.mass = b.quantity_vector("mass", n);
  p.frequency = b.quantity_vector("omega", n);
  p.eq_mass = b.locate("mass_eq") ? b.quantity_vector("mass_eq", n) : p.mass;
  p.eq_frequency = b.locate("omega_eq") ? b.quantity_vector("omega_eq", n) : p.frequency;
  p.mu = b.quantity_matrix("mu", n);
  p.nu = b.quantity_matrix("nu", n);
  p.kappa = b.quantity_matrix("kappa", n);
  p.mode_kind.assign(n, ModeKind::oscillator);
  if (const ConfigEntry* e = doc.find("kind")) {
    if (!e->value.is_array() || e->value.size() != n) throw doc.error_at("kind", "expected one mode kind per mode");
    for (std::size_t k = 0; k < n; ++k) {
      if (!e->value[k].is_string()) throw doc.error_at("kind", "mode kinds are strings");
      try {
        p.mode_kind[k] = parse_mode_kind(e->value[k].get<std::string>());
      } catch (const ModelError& err) {
        throw doc.error_at("kind", err.what());
      }
    }
  }

  if (const ConfigEntry* e = doc.find("labels")) {
    if (!e->value.is_array() || e->value.size() != n) throw doc.error_at("labels", "expected one label per mode");
    for (const auto& l : e->value) {
      if (!l.is_string() || l.get<std::string>().empty()) throw doc.error_at("labels", "labels are non-empty strings");
      const std::string s = l.get<std::string>();
      if (s.find_first_of(",\"\n ") != std::string::npos) throw doc.error_at("labels", "labels may not contain commas, quotes or spaces");
      cfg.labels.push_back(s);
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) cfg.labels.push_back(std::to_string(k + 1));
  }

  DissipationParams& d = cfg.dissipation;
  d.lambda = b.quantity_matrix("lambda", n);
  d.alpha = b.quantity_matrix("alpha", n);
  d.eta = b.quantity_matrix("eta", n);
  {
    const auto [key, unit] = b.require("T");
    d.temperature = unit_convert(b.scalar(key), unit);
  }
  p.check_structure();
  d.check_structure(n);

  const auto dim = static_cast<Eigen::Index>(2 * n);
  cfg.initial_mean = doc.contains("initial_mean") ? b.vector("initial_mean", 2 * n) : Vector::Zero(dim);
  if (doc.contains("initial_covariance")) {
    if (doc.contains("initial_var_q") || doc.contains("initial_var_p")) {
      throw doc.error_at("initial_covariance", "give either initial_covariance or initial_var_q/initial_var_p");
    }
    cfg.initial_covariance = b.matrix("initial_covariance", 2 * n, 2 * n);
  } else {
    if (!doc.contains("initial_var_q")) throw ConfigError(doc.source(), 0, "missing required key initial_var_q");
    const Vector vq = b.vector("initial_var_q", n);
    Vector vp(static_cast<Eigen::Index>(n));
    if (doc.contains("initial_var_p")) {
      vp = b.vector("initial_var_p", n);
    } else {
      for (Eigen::Index k = 0; k < vq.size(); ++k) {
        if (!(vq[k] > 0.0)) throw doc.error_at("initial_var_q", "variances must be positive");
        vp[k] = 0.25 / vq[k];
      }
    }
    cfg.initial_covariance = Matrix::Zero(dim, dim);
    for (std::size_t k = 0; k < n; ++k) {
      cfg.initial_covariance(q_index(k), q_index(k)) = vq[static_cast<Eigen::Index>(k)];
      cfg.initial_covariance(p_index(k), p_index(k)) = vp[static_cast<Eigen::Index>(k)];
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Matrix& s = cfg.initial_covariance;
    const double product = s(q_index(k), q_index(k)) * s(p_index(k), p_index(k)) -
                           s(q_index(k), p_index(k)) * s(q_index(k), p_index(k));
    if (product < 0.25 * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "initial state of mode " << cfg.labels[k] << " violates the uncertainty bound (product " << product
         << " < 0.25)";
      cfg.warnings.push_back(os.str());
    }
  }

  cfg.t_start_s = doc.contains("t_start_s") ? b.scalar("t_start_s") : 0.0;
  if (!doc.contains("t_end_s")) throw ConfigError(doc.source(), 0, "missing required key t_end_s");
  cfg.t_end_s = b.scalar("t_end_s");
  if (cfg.t_start_s < 0.0) throw doc.error_at("t_start_s", "must be non-negative");
  if (!(cfg.t_end_s > cfg.t_start_s)) throw doc.error_at("t_end_s", "must exceed t_start_s");
  cfg.grid = b.count("grid", 2000);
  if (cfg.grid < 2) throw doc.error_at("grid", "needs at least 2 points");

  const std::string offdiag = b.string("off_diagonal_D", "full");
  if (offdiag != "full" && offdiag != "zeroed") throw doc.error_at("off_diagonal_D", "expected \"full\" or \"zeroed\"");
  cfg.zero_cross_mode_diffusion = offdiag == "zeroed";

  if (doc.contains("sweep")) {
    try {
      cfg.sweep = parse_sweep(b.string("sweep", ""));
    } catch (const ConfigError& e) {
      throw doc.error_at("sweep", e.what());
    }
  }

  if (const ConfigEntry* e = doc.find("penetration_mode")) {
    cfg.penetration_mode = b.mode_index("penetration_mode", e->value, n);
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      if (p.is_barrier(k)) {
        cfg.penetration_mode = k;
        break;
      }
    }
  }

  if (const ConfigEntry* e = doc.find("density_times_s")) {
    if (!e->value.is_array()) throw doc.error_at("density_times_s", "expected an array of times");
    for (const auto& t : e->value) {
      const double x = b.number("density_times_s", t);
      if (x < 0.0) throw doc.error_at("density_times_s", "times must be non-negative");
      cfg.density.times_s.push_back(x);
    }
    if (std::adjacent_find(cfg.density.times_s.begin(), cfg.density.times_s.end(), std::greater_equal<>()) !=
        cfg.density.times_s.end()) {
      throw doc.error_at("density_times_s", "times must be strictly increasing");
    }
  }
  if (const ConfigEntry* e = doc.find("density_modes")) {
    if (!e->value.is_array() || e->value.empty()) throw doc.error_at("density_modes", "expected a non-empty array");
    for (const auto& m : e->value) cfg.density.modes.push_back(b.mode_index("density_modes", m, n));
  } else {
    for (std::size_t k = 0; k < std::min<std::size_t>(n, 2); ++k) cfg.density.modes.push_back(k);
  }
  if (doc.contains("density_q_range")) {
    const Matrix r = b.matrix("density_q_range", cfg.density.modes.size(), 2);
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      if (!(r(i, 1) > r(i, 0))) throw doc.error_at("density_q_range", "each range needs lo < hi");
      cfg.density.ranges.emplace_back(r(i, 0), r(i, 1));
    }
  } else if (!cfg.density.times_s.empty()) {
    throw ConfigError(doc.source(), 0, "density_times_s requires density_q_range");
  }
  cfg.density.points = b.count("density_points", cfg.density.points);
  if (cfg.density.points < 2) throw doc.error_at("density_points", "needs at least 2 points");
  return cfg;
}

std::vector<SweepMember> expand_sweep(const ConfigDocument& doc, const std::optional<SweepSpec>& override_spec) {
  ScenarioConfig base = bind_scenario(doc);
  const std::optional<SweepSpec> spec = override_spec ? override_spec : base.sweep;
  std::vector<SweepMember> out;
  if (!spec) {
    out.push_back({std::nullopt, std::move(base)});
    return out;
  }
  for (double value : spec->values) {
    ConfigDocument member = doc;
    for (const auto& target : spec->targets) apply_sweep_value(member, target, value);
    member.set("sweep", spec->text);
    out.push_back({value, bind_scenario(member)});
  }
  return out;
}

}  // namespace qdiss::cli
