#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "subfbm/covariance.hpp"
#include "subfbm/hurst.hpp"

namespace subfbm {

/// Var(Z_n) = 1/2 sum_{k,l<n} (rho(l-k) - rho(l+k+1))^2.
/// O(n^2) over O(n) memoized lags; no matrix is formed.
double var_zn_exact(const HurstParameter& h, std::size_t n);

/// 2 tr(C^2) = 2 ||C||_F^2. The same quantity by the matrix route.
double var_zn_trace(const ScaledIncrementCovariance& c);

/// Z_n = sum_k y_k^2 - tr(C). Exactly centered under the sampler.
double z_statistic(const IncrementPath& path);
/// Same, with tr(C) already known.
double z_statistic(std::span<const double> increments, double trace);

/// V_n = Z_n / sqrt(Var Z_n). Throws DomainError if var_zn <= 0.
double normalize(double z, double var_zn);

/// tr(C^4), computed as ||C^2||_F^2 in fixed column blocks. The block
/// partition does not depend on `parallelism`, so neither does the result.
double trace_of_fourth_power(const ScaledIncrementCovariance& c, std::size_t parallelism = 0);

/// Stein-Malliavin bound sqrt(E[(1 - ||DV_n||^2/2)^2]) = sqrt(8 tr C^4) / Var(Z_n).
/// Upper-bounds d_Kol(V_n, N(0,1)).
double stein_bound(const ScaledIncrementCovariance& c, std::size_t parallelism = 0);
double stein_bound(const HurstParameter& h, std::size_t n,
                   std::size_t max_n = kDefaultMaxIncrements, std::size_t parallelism = 0);

enum class Theorem { tudor_2011, improved };

enum class RateBranch {
  // tudor_2011
  sub_half,   // H < 1/2:        n^{-1/2}
  mid,        // 1/2 <= H < 3/4: n^{2H-3/2}
  log_sqrt,   // H = 3/4:        (log n)^{-1/2}
  // improved
  sub_five_eighths,   // H < 5/8:       n^{-1/2}
  at_five_eighths,    // H = 5/8:       (log n)^{3/2} n^{-1/2}
  upper,              // 5/8 < H < 3/4: n^{4H-3}
  at_three_quarters,  // H = 3/4:       (log n)^{-1}
};

struct RegimeRate {
  Theorem theorem;
  RateBranch branch;

  friend bool operator==(const RegimeRate&, const RegimeRate&) = default;
};

/// Throws DomainError for H > 3/4, where neither theorem applies.
RegimeRate classify_regime(Theorem theorem, const HurstParameter& h);

/// The branch's Berry-Esseen rate at n with the constant c_H set to 1.
/// Throws DomainError for n < 3 or a branch that does not match H.
double theoretical_rate(const RegimeRate& regime, const HurstParameter& h, double n);

std::string_view to_string(Theorem theorem) noexcept;
std::string_view to_string(RateBranch branch) noexcept;

enum class VarianceNormalization { per_n, per_nlogn };

std::string_view to_string(VarianceNormalization normalization) noexcept;

struct VarianceResult {
  HurstParameter hurst;
  std::size_t n;
  double var_zn;
  VarianceNormalization normalization;
  /// Asymptotic value of the normalized variance; absent for H > 3/4.
  std::optional<double> limit;
  std::optional<std::string> warning;

  /// var_zn / n, or var_zn / (n ln n) at H = 3/4.
  double normalized() const noexcept;
};

/// Printed constant for Var(Z_n)/(n log n) at H = 3/4.
///
/// NOTE: with C built from rho as above, Var(Z_n)/(n ln n) actually tends to
/// 9/16 (rho(r)^2 ~ 9/(16|r|)); 9/64 is the value for the autocovariance rho/2.
inline constexpr double kThreeQuartersVarianceConstant = 9.0 / 64.0;

/// Throws DomainError for n < 2.
VarianceResult variance_with_limit(const HurstParameter& h, std::size_t n);

}  // namespace subfbm
