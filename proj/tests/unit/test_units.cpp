#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qdiss/error.hpp"
#include "qdiss/units.hpp"

using namespace qdiss;

TEST(Units, SecondsDivideByHbar) {
  EXPECT_NEAR(seconds_to_internal(1e-22), 1e-22 / 6.582119569e-22, 1e-16);
  EXPECT_NEAR(seconds_to_internal(1e-22), 0.15193, 1e-5);
}

TEST(Units, EnergyQuotedInMeVIsUnchanged) {
  EXPECT_EQ(unit_convert(2.9468, Unit::MeV), 2.9468);
  EXPECT_EQ(unit_convert(2.9468, Unit::MeVPerHbar), 2.9468);
  EXPECT_EQ(unit_convert(461.6344, Unit::Hbar2PerMeV), 461.6344);
}

TEST(Units, InverseMassCouplingMultipliesByHbarSquared) {
  const double hbar = 6.582119569e-22;
  EXPECT_NEAR(unit_convert(33e38, Unit::PerMeVSeconds2), 33e38 * hbar * hbar, 1e-18);
  EXPECT_NEAR(unit_convert(33e38, Unit::PerMeVSeconds2), 1.4297e-3, 1e-7);
}

TEST(Units, ZeroMapsToZero) {
  for (Unit u : {Unit::MeV, Unit::MeVPerHbar, Unit::Hbar2PerMeV, Unit::Seconds, Unit::PerMeVSeconds2}) {
    EXPECT_EQ(unit_convert(0.0, u), 0.0);
    EXPECT_EQ(unit_convert_back(0.0, u), 0.0);
  }
}

TEST(Units, RoundTripWithinOneUlp) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> exponent(-40.0, 40.0);
  for (Unit u : {Unit::MeV, Unit::MeVPerHbar, Unit::Hbar2PerMeV, Unit::Seconds, Unit::PerMeVSeconds2}) {
    for (int i = 0; i < 2000; ++i) {
      const double x = std::pow(10.0, exponent(rng)) * (i % 2 ? -1.0 : 1.0);
      const double back = unit_convert_back(unit_convert(x, u), u);
      const double ulp = std::nextafter(std::abs(x), INFINITY) - std::abs(x);
      EXPECT_LE(std::abs(back - x), ulp) << unit_tag(u) << " " << x;
    }
  }
}

TEST(Units, TagsParseBack) {
  for (Unit u : {Unit::MeV, Unit::MeVPerHbar, Unit::Hbar2PerMeV, Unit::Seconds, Unit::PerMeVSeconds2}) {
    EXPECT_EQ(parse_unit(unit_tag(u)), u);
  }
  EXPECT_THROW(parse_unit("fm"), ModelError);
  EXPECT_THROW(parse_unit(""), ModelError);
}
