#include <gtest/gtest.h>

#include <cmath>

#include "subfbm/errors.hpp"
#include "subfbm/hurst.hpp"

using subfbm::DomainError;
using subfbm::HurstParameter;

TEST(HurstParameter, ParsesDecimalsAndFractions) {
  EXPECT_DOUBLE_EQ(HurstParameter::parse("0.6").value(), 0.6);
  EXPECT_DOUBLE_EQ(HurstParameter::parse("6e-1").value(), 0.6);
  EXPECT_DOUBLE_EQ(HurstParameter::parse(".25").value(), 0.25);
  EXPECT_DOUBLE_EQ(HurstParameter::parse("5/8").value(), 0.625);
  EXPECT_DOUBLE_EQ(HurstParameter::parse("1/3").value(), 1.0 / 3.0);
  EXPECT_EQ(HurstParameter::parse(" 3/4 ").literal(), "3/4");
}

TEST(HurstParameter, RegimeBoundariesFromLiterals) {
  for (const char* text : {"5/8", "0.625", "10/16", "6.25e-1"}) {
    const auto h = HurstParameter::parse(text);
    EXPECT_TRUE(h.is_five_eighths()) << text;
    EXPECT_FALSE(h.below_five_eighths()) << text;
    EXPECT_FALSE(h.between_five_eighths_and_three_quarters()) << text;
  }
  for (const char* text : {"3/4", "0.75", "0.750"}) {
    const auto h = HurstParameter::parse(text);
    EXPECT_TRUE(h.is_three_quarters()) << text;
    EXPECT_FALSE(h.below_three_quarters()) << text;
    EXPECT_FALSE(h.above_three_quarters()) << text;
  }
  EXPECT_TRUE(HurstParameter::parse("1/2").is_half());
  EXPECT_TRUE(HurstParameter::parse("0.5").is_half());
  EXPECT_TRUE(HurstParameter::parse("0.7").between_five_eighths_and_three_quarters());
  EXPECT_TRUE(HurstParameter::parse("0.3").below_half());
  EXPECT_TRUE(HurstParameter::parse("0.8").above_three_quarters());
}

TEST(HurstParameter, EqualityIsDecidedOnTheLiteralNotTheRoundedDouble) {
  // Rounds to exactly 0.625 as a double, but is not 5/8.
  const auto h = HurstParameter::parse("0.6250000000000000001");
  EXPECT_EQ(h.value(), 0.625);
  EXPECT_FALSE(h.is_five_eighths());
  EXPECT_TRUE(h.between_five_eighths_and_three_quarters());

  const auto below = HurstParameter::parse("0.7499999999999999999");
  EXPECT_EQ(below.value(), 0.75);
  EXPECT_FALSE(below.is_three_quarters());
  EXPECT_TRUE(below.below_three_quarters());
}

TEST(HurstParameter, DoubleConstructorUsesExactBinaryValue) {
  EXPECT_TRUE(HurstParameter(0.625).is_five_eighths());
  EXPECT_TRUE(HurstParameter(0.75).is_three_quarters());
  EXPECT_TRUE(HurstParameter(0.5).is_half());
  EXPECT_FALSE(HurstParameter(std::nextafter(0.75, 1.0)).is_three_quarters());
}

TEST(HurstParameter, RejectsValuesOutsideOpenUnitInterval) {
  for (const char* text : {"0", "1", "1.2", "-0.3", "3/2", "0/5", "1.0"}) {
    try {
      (void)HurstParameter::parse(text);
      ADD_FAILURE() << text << " accepted";
    } catch (const DomainError& e) {
      EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos) << e.what();
    }
  }
  EXPECT_THROW(HurstParameter(0.0), DomainError);
  EXPECT_THROW(HurstParameter(1.0), DomainError);
  EXPECT_THROW(HurstParameter(std::nan("")), DomainError);
}

TEST(HurstParameter, RejectsMalformedLiterals) {
  for (const char* text : {"", "abc", "0.5.1", "1/0", "/2", "0.5x", "1e", "0x0.8"}) {
    EXPECT_THROW((void)HurstParameter::parse(text), DomainError) << text;
  }
}
