#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace subfbm {

/// Hurst index H in the open interval (0, 1).
///
/// The regime boundaries 1/2, 5/8 and 3/4 are dyadic, so they are exact
/// doubles. Comparisons against them are fixed once at construction: from
/// the exact rational value of a parsed literal ("0.625", "5/8", "3/4"), or
/// from the exact binary value of a double. They are never recomputed from
/// derived floating-point quantities.
class HurstParameter {
 public:
  /// Throws DomainError unless 0 < h < 1.
  explicit HurstParameter(double h);

  /// Accepts a decimal literal ("0.6", "6e-1") or a fraction ("5/8").
  /// Throws DomainError on malformed text or a value outside (0, 1).
  static HurstParameter parse(std::string_view literal);

  double value() const noexcept { return value_; }
  /// The text this parameter was parsed from, or a round-trip rendering.
  const std::string& literal() const noexcept { return literal_; }

  bool below_half() const noexcept { return vs_half_ < 0; }
  bool is_half() const noexcept { return vs_half_ == 0; }
  bool below_five_eighths() const noexcept { return vs_five_eighths_ < 0; }
  bool is_five_eighths() const noexcept { return vs_five_eighths_ == 0; }
  bool between_five_eighths_and_three_quarters() const noexcept {
    return vs_five_eighths_ > 0 && vs_three_quarters_ < 0;
  }
  bool below_three_quarters() const noexcept { return vs_three_quarters_ < 0; }
  bool is_three_quarters() const noexcept { return vs_three_quarters_ == 0; }
  bool above_three_quarters() const noexcept { return vs_three_quarters_ > 0; }

  friend bool operator==(const HurstParameter& a, const HurstParameter& b) noexcept {
    return a.value_ == b.value_ && a.vs_half_ == b.vs_half_ &&
           a.vs_five_eighths_ == b.vs_five_eighths_ &&
           a.vs_three_quarters_ == b.vs_three_quarters_;
  }

 private:
  HurstParameter(double value, std::string literal, std::strong_ordering vs_half,
                 std::strong_ordering vs_five_eighths,
                 std::strong_ordering vs_three_quarters);

  double value_;
  std::string literal_;
  std::strong_ordering vs_half_;
  std::strong_ordering vs_five_eighths_;
  std::strong_ordering vs_three_quarters_;
};

}  // namespace subfbm
