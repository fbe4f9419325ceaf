#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qdiss::cli {

/// Syntax or schema problem in a scenario file. The message carries the
/// source name and line when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string key;
  nlohmann::json value;
  int line = 0;  // 0 for entries added programmatically
};

/// Ordered `key = value` document. Values are JSON literals (numbers,
/// "strings", arrays); arrays may span several lines. `#` starts a comment
/// outside strings.
class ConfigDocument {
 public:
  static ConfigDocument parse(std::string_view text, std::string source = "<config>");
  static ConfigDocument load(const std::filesystem::path& path);

  const std::string& source() const { return source_; }
  const std::vector<ConfigEntry>& entries() const { return entries_; }

  const ConfigEntry* find(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key) != nullptr; }
  /// Replaces the value of an existing key or appends a new entry.
  void set(std::string_view key, nlohmann::json value);
  void erase(std::string_view key);

  /// Error that points at the line of `key` when it is present.
  ConfigError error_at(std::string_view key, const std::string& message) const;

 private:
  std::string source_;
  std::vector<ConfigEntry> entries_;
};

}  // namespace qdiss::cli
