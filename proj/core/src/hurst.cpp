#include "subfbm/hurst.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>

#include "subfbm/errors.hpp"

namespace subfbm {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

std::strong_ordering compare(const cpp_rational& a, const cpp_rational& b) {
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::strong_ordering order(double a, double b) {
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string render(double h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", h);
  return buf;
}

[[noreturn]] void throw_out_of_range(std::string_view literal) {
  throw DomainError("Hurst parameter must lie in the open interval (0,1), got " +
                    std::string(literal));
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// cpp_int reads a leading zero as an octal prefix.
std::string decimal_digits(std::string_view s) {
  s.remove_prefix(std::min(s.find_first_not_of('0'), s.size() - 1));
  return std::string(s);
}

// Exact value of an unsigned decimal literal: digits[.digits][(e|E)[+-]digits].
std::optional<cpp_rational> parse_decimal(std::string_view s) {
  std::string_view mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    std::string_view exp_text = s.substr(e + 1);
    bool negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 4) return std::nullopt;
    std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (negative) exponent = -exponent;
  }
  std::string digits;
  std::string_view integral = mantissa;
  std::string_view fraction;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    integral = mantissa.substr(0, dot);
    fraction = mantissa.substr(dot + 1);
  }
  if (integral.empty() && fraction.empty()) return std::nullopt;
  if (!integral.empty() && !all_digits(integral)) return std::nullopt;
  if (!fraction.empty() && !all_digits(fraction)) return std::nullopt;
  digits.append(integral).append(fraction);
  digits = decimal_digits(digits);
  exponent -= static_cast<long>(fraction.size());

  cpp_rational value{cpp_int(digits)};
  cpp_int scale = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(std::labs(exponent)));
  if (exponent >= 0) return cpp_rational(value * scale);
  return cpp_rational(value / scale);
}

}  // namespace

HurstParameter::HurstParameter(double value, std::string literal,
                               std::strong_ordering vs_half,
                               std::strong_ordering vs_five_eighths,
                               std::strong_ordering vs_three_quarters)
    : value_(value),
      literal_(std::move(literal)),
      vs_half_(vs_half),
      vs_five_eighths_(vs_five_eighths),
      vs_three_quarters_(vs_three_quarters) {}

HurstParameter::HurstParameter(double h)
    : value_(h),
      literal_(render(h)),
      vs_half_(std::strong_ordering::equal),
      vs_five_eighths_(std::strong_ordering::equal),
      vs_three_quarters_(std::strong_ordering::equal) {
  if (!(h > 0.0 && h < 1.0)) throw_out_of_range(literal_);
  // 0.5, 0.625 and 0.75 are exact in binary.
  vs_half_ = order(h, 0.5);
  vs_five_eighths_ = order(h, 0.625);
  vs_three_quarters_ = order(h, 0.75);
}

HurstParameter HurstParameter::parse(std::string_view literal) {
  std::string_view text = literal;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) throw DomainError("empty Hurst parameter literal");
  if (text.front() == '-') throw_out_of_range(literal);

  cpp_rational exact;
  double value = 0.0;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw DomainError("malformed Hurst parameter literal: " + std::string(literal));
    }
    const cpp_int numerator{decimal_digits(num)};
    const cpp_int denominator{decimal_digits(den)};
    if (denominator == 0) {
      throw DomainError("malformed Hurst parameter literal: " + std::string(literal));
    }
    exact = cpp_rational(numerator, denominator);
    const cpp_int limit = cpp_int(1) << 53;
    if (numerator < limit && denominator < limit) {
      // Both operands exact, so the quotient is correctly rounded.
      value = numerator.convert_to<double>() / denominator.convert_to<double>();
    } else {
      value = exact.convert_to<double>();
    }
  } else {
    auto parsed = parse_decimal(text);
    if (!parsed) {
      throw DomainError("malformed Hurst parameter literal: " + std::string(literal));
    }
    exact = *parsed;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw DomainError("malformed Hurst parameter literal: " + std::string(literal));
    }
  }

  if (exact <= 0 || exact >= 1) throw_out_of_range(literal);
  if (!(value > 0.0 && value < 1.0)) throw_out_of_range(literal);

  return HurstParameter(value, std::string(text), compare(exact, cpp_rational(1, 2)),
                        compare(exact, cpp_rational(5, 8)),
                        compare(exact, cpp_rational(3, 4)));
}

}  // namespace subfbm
