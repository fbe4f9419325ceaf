#include "qdiss/validation.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace qdiss {

void ValidationReport::add(Check check) { checks_.push_back(std::move(check)); }

void ValidationReport::add_note(std::string note) { notes_.push_back(std::move(note)); }

void ValidationReport::merge(const ValidationReport& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
  notes_.insert(notes_.end(), other.notes_.begin(), other.notes_.end());
}

bool ValidationReport::ok() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; });
}

const Check* ValidationReport::find(const std::string& name) const {
  auto it = std::find_if(checks_.begin(), checks_.end(), [&](const Check& c) { return c.name == name; });
  return it == checks_.end() ? nullptr : &*it;
}

std::size_t ValidationReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks_.begin(), checks_.end(), [](const Check& c) { return !c.passed; }));
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(6);
  for (const auto& c : checks_) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": measured " << c.measured << ' '
       << (c.relation.empty() ? "vs" : c.relation) << " bound " << c.bound;
    if (!c.note.empty()) os << "  (" << c.note << ')';
    os << '\n';
  }
  for (const auto& n : notes_) os << "note: " << n << '\n';
  os << (ok() ? "verdict: PASS" : "verdict: FAIL") << " (" << checks_.size() << " checks, " << failures()
     << " failed)\n";
  return os.str();
}

}  // namespace qdiss
