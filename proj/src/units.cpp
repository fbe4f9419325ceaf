#include "qdiss/units.hpp"

#include <string>

#include "qdiss/error.hpp"

namespace qdiss {

Unit parse_unit(std::string_view tag) {
  if (tag == "MeV") return Unit::MeV;
  if (tag == "MeV_per_hbar") return Unit::MeVPerHbar;
  if (tag == "hbar2_per_MeV") return Unit::Hbar2PerMeV;
  if (tag == "s") return Unit::Seconds;
  if (tag == "per_MeV_s2") return Unit::PerMeVSeconds2;
  throw ModelError("unknown unit tag '" + std::string(tag) + "'");
}

std::string_view unit_tag(Unit unit) {
  switch (unit) {
    case Unit::MeV: return "MeV";
    case Unit::MeVPerHbar: return "MeV_per_hbar";
    case Unit::Hbar2PerMeV: return "hbar2_per_MeV";
    case Unit::Seconds: return "s";
    case Unit::PerMeVSeconds2: return "per_MeV_s2";
  }
  throw ModelError("invalid unit");
}

double unit_convert(double value, Unit from) {
  switch (from) {
    case Unit::MeV:
    case Unit::MeVPerHbar:
    case Unit::Hbar2PerMeV:
      return value;
    case Unit::Seconds:
      return value / kHbarMeVSeconds;
    case Unit::PerMeVSeconds2:
      return value * kHbarSquaredMeV2Seconds2;
  }
  throw ModelError("invalid unit");
}

double unit_convert_back(double internal, Unit to) {
  switch (to) {
    case Unit::MeV:
    case Unit::MeVPerHbar:
    case Unit::Hbar2PerMeV:
      return internal;
    case Unit::Seconds:
      return internal * kHbarMeVSeconds;
    case Unit::PerMeVSeconds2:
      return internal / kHbarSquaredMeV2Seconds2;
  }
  throw ModelError("invalid unit");
}

}  // namespace qdiss
