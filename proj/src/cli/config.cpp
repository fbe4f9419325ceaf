#include "qdiss/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace qdiss::cli {
namespace {

std::string located(const std::string& source, int line, const std::string& message) {
  std::ostringstream os;
  os << source;
  if (line > 0) os << ":" << line;
  os << ": " << message;
  return os.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Drops a trailing comment and updates the bracket depth; quotes are
// tracked so '#' and brackets inside strings are literal.
std::string_view scan_line(std::string_view line, int& depth) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '#') return line.substr(0, i);
    else if (c == '[' || c == '{') ++depth;
    else if (c == ']' || c == '}') --depth;
  }
  return line;
}

bool valid_key(std::string_view key) {
  if (key.empty() || !(std::isalpha(static_cast<unsigned char>(key[0])) || key[0] == '_')) return false;
  return std::all_of(key.begin(), key.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(located(source, line, message)) {}

ConfigDocument ConfigDocument::parse(std::string_view text, std::string source) {
  ConfigDocument doc;
  doc.source_ = std::move(source);

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i + 1);
    int depth = 0;
    const std::string_view content = trim(scan_line(lines[i], depth));
    if (content.empty()) continue;

    const std::size_t eq = content.find('=');
    if (eq == std::string_view::npos) throw ConfigError(doc.source_, line_no, "expected 'key = value'");
    const std::string key(trim(content.substr(0, eq)));
    if (!valid_key(key)) throw ConfigError(doc.source_, line_no, "invalid key '" + key + "'");
    if (doc.contains(key)) throw ConfigError(doc.source_, line_no, "duplicate key '" + key + "'");

    // depth counted the key part too, which holds no brackets
    std::string value(trim(content.substr(eq + 1)));
    while (depth > 0 && i + 1 < lines.size()) {
      ++i;
      value += ' ';
      value += trim(scan_line(lines[i], depth));
    }
    if (depth != 0) throw ConfigError(doc.source_, line_no, "unbalanced brackets in value of '" + key + "'");
    if (value.empty()) throw ConfigError(doc.source_, line_no, "missing value for '" + key + "'");

    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(value);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(doc.source_, line_no, "cannot parse value of '" + key + "': " + value);
    }
    if (parsed.is_object() || parsed.is_null()) {
      throw ConfigError(doc.source_, line_no, "value of '" + key + "' must be a number, string, boolean or array");
    }
    doc.entries_.push_back({key, std::move(parsed), line_no});
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config file '" + path.string() + "'");
  return parse(buf.str(), path.string());
}

const ConfigEntry* ConfigDocument::find(std::string_view key) const {
  const auto it = std::find_if(entries_.begin(), entries_.end(), [key](const ConfigEntry& e) { return e.key == key; });
  return it == entries_.end() ? nullptr : &*it;
}

void ConfigDocument::set(std::string_view key, nlohmann::json value) {
  for (auto& e : entries_) {
    if (e.key == key) {
      e.value = std::move(value);
      return;
    }
  }
  entries_.push_back({std::string(key), std::move(value), 0});
}

void ConfigDocument::erase(std::string_view key) {
  std::erase_if(entries_, [key](const ConfigEntry& e) { return e.key == key; });
}

ConfigError ConfigDocument::error_at(std::string_view key, const std::string& message) const {
  const ConfigEntry* e = find(key);
  return ConfigError(source_, e ? e->line : 0, std::string(key) + ": " + message);
}

}  // namespace qdiss::cli
