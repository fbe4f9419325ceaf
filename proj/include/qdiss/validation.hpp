#pragma once

#include <string>
#include <vector>

namespace qdiss {

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string relation;  // how measured compares to bound when passing, e.g. "<", ">="
  std::string note;
};

/// Ordered list of named checks. The verdict is the conjunction of all of
/// them; notes are informational and never affect it.
class ValidationReport {
 public:
  void add(Check check);
  void add_note(std::string note);
  void merge(const ValidationReport& other);

  bool ok() const;
  const std::vector<Check>& checks() const { return checks_; }
  const std::vector<std::string>& notes() const { return notes_; }
  /// First check with this name, or nullptr.
  const Check* find(const std::string& name) const;
  std::size_t failures() const;

  std::string to_text() const;

 private:
  std::vector<Check> checks_;
  std::vector<std::string> notes_;
};

}  // namespace qdiss
