#pragma once

#include <string_view>

namespace qdiss {

// Internal unit system: hbar = 1, k_B = 1, energies and frequencies in MeV,
// masses in hbar^2/MeV, time in 1/MeV. Coordinates are dimensionless and
// momenta are measured in units of hbar.

/// hbar in MeV s.
inline constexpr double kHbarMeVSeconds = 6.582119569e-22;
inline constexpr double kHbarSquaredMeV2Seconds2 = kHbarMeVSeconds * kHbarMeVSeconds;

enum class Unit {
  MeV,            // energies, and hbar*frequency quoted in MeV
  MeVPerHbar,     // angular frequencies and rates
  Hbar2PerMeV,    // inertia parameters
  Seconds,        // time
  PerMeVSeconds2  // inverse-mass couplings quoted as MeV^-1 s^-2
};

/// Parses the tag used as a key suffix in scenario files: "MeV",
/// "MeV_per_hbar", "hbar2_per_MeV", "s", "per_MeV_s2". Throws ModelError on
/// anything else.
Unit parse_unit(std::string_view tag);
std::string_view unit_tag(Unit unit);

/// Converts a value quoted in `from` into internal units.
double unit_convert(double value, Unit from);
/// Inverse of unit_convert.
double unit_convert_back(double internal, Unit to);

inline double seconds_to_internal(double seconds) { return unit_convert(seconds, Unit::Seconds); }
inline double internal_to_seconds(double t) { return unit_convert_back(t, Unit::Seconds); }

}  // namespace qdiss
