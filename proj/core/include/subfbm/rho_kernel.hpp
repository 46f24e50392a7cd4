#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subfbm/hurst.hpp"

namespace subfbm {

/// Increment-correlation kernel rho(r) = |r+1|^{2H} + |r-1|^{2H} - 2|r|^{2H}.
///
/// For |r| above the large-lag threshold the kernel evaluates the factored
/// form r^{2H} [(1+1/r)^{2H} + (1-1/r)^{2H} - 2] through its binomial series
/// in 1/r^2. Every term of that series carries the sign of 2H-1, so it is
/// free of cancellation and accurate to a few ulp for all |r| >= 2. The
/// direct three-power formula loses about r^2 * eps / |2H(2H-1)| relative
/// accuracy, which is why the default threshold is 1.
class RhoKernel {
 public:
  static constexpr std::int64_t kDefaultLargeLagThreshold = 1;

  explicit RhoKernel(HurstParameter h,
                     std::int64_t large_lag_threshold = kDefaultLargeLagThreshold);

  double operator()(std::int64_t r) const noexcept;

  /// The literal three-power formula, whatever the lag.
  double direct(std::int64_t r) const noexcept;
  /// The factored binomial series. Requires |r| >= 2.
  double series(std::int64_t r) const;

  /// rho(0), rho(1), ..., rho(count - 1).
  std::vector<double> table(std::size_t count) const;

  const HurstParameter& hurst() const noexcept { return h_; }
  std::int64_t large_lag_threshold() const noexcept { return threshold_; }

 private:
  HurstParameter h_;
  std::int64_t threshold_;
  double two_h_;
};

inline double rho(const RhoKernel& kernel, std::int64_t r) noexcept { return kernel(r); }

/// Large-lag asymptotic 2H(2H-1)|r|^{2H-2}. Throws DomainError for r = 0.
double rho_asymptotic(const HurstParameter& h, std::int64_t r);

struct SeriesLimit {
  double value = 0.0;
  /// Lags summed explicitly before the tail estimate takes over.
  std::int64_t lags_summed = 0;
  double tail = 0.0;
  std::optional<std::string> warning;
};

/// sigma^2(H) = 1/2 sum_{r in Z} rho(r)^2, the limit of Var(Z_n)/n for H < 3/4.
///
/// Sums rho^2 directly up to a lag R and adds an integral estimate of the
/// remaining tail. R grows until the estimated error of that tail estimate
/// is below rel_tol times the total.
///
/// Throws DivergentSeriesError for H >= 3/4 and DomainError unless
/// 0 < rel_tol <= 1e-2. H > 0.74 converges slowly and carries a warning.
SeriesLimit sigma_sq_limit(const HurstParameter& h, double rel_tol = 1e-10);

}  // namespace subfbm
