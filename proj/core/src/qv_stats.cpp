#include "subfbm/qv_stats.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "subfbm/errors.hpp"
#include "subfbm/parallel.hpp"
#include "subfbm/rho_kernel.hpp"

namespace subfbm {
namespace {

constexpr Eigen::Index kProductBlock = 256;

}  // namespace

double var_zn_exact(const HurstParameter& h, std::size_t n) {
  if (n < 1) throw DomainError("var_zn_exact needs n >= 1");
  const std::vector<double> lag = RhoKernel(h).table(2 * n + 1);
  using Vec = Eigen::Map<const Eigen::VectorXd>;

  // Row k, l >= k: (rho(l-k) - rho(l+k+1)) = lag[j] - lag[2k+1+j], j = l-k.
  double total = 0.0;
  double compensation = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto len = static_cast<Eigen::Index>(n - k);
    const double row = (Vec(lag.data(), len) - Vec(lag.data() + 2 * k + 1, len)).squaredNorm();
    const double diag = lag[0] - lag[2 * k + 1];
    const double v = 2.0 * row - diag * diag;
    const double t = total + v;
    compensation += std::fabs(total) >= std::fabs(v) ? (total - t) + v : (v - t) + total;
    total = t;
  }
  return 0.5 * (total + compensation);
}

double var_zn_trace(const ScaledIncrementCovariance& c) {
  return 2.0 * c.matrix().squaredNorm();
}

double z_statistic(std::span<const double> increments, double trace) {
  double sum_sq = 0.0;
  for (double y : increments) sum_sq += y * y;
  return sum_sq - trace;
}

double z_statistic(const IncrementPath& path) {
  const RhoKernel kernel(path.hurst);
  double trace = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    trace += 1.0 - 0.5 * kernel(static_cast<std::int64_t>(2 * k + 1));
  }
  return z_statistic(path.values, trace);
}

double normalize(double z, double var_zn) {
  if (!(var_zn > 0.0)) throw DomainError("normalize needs a positive variance");
  return z / std::sqrt(var_zn);
}

double trace_of_fourth_power(const ScaledIncrementCovariance& c, std::size_t parallelism) {
  const Eigen::MatrixXd& m = c.matrix();
  const Eigen::Index n = m.rows();
  const auto blocks = static_cast<std::size_t>((n + kProductBlock - 1) / kProductBlock);
  std::vector<double> partial(blocks, 0.0);

  parallel_for(blocks, resolve_parallelism(parallelism), [&](std::size_t b) {
    const Eigen::Index first = static_cast<Eigen::Index>(b) * kProductBlock;
    const Eigen::Index width = std::min(kProductBlock, n - first);
    Eigen::MatrixXd square_cols(n, width);
    square_cols.noalias() = m * m.middleCols(first, width);
    partial[b] = square_cols.squaredNorm();
  });

  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double stein_bound(const ScaledIncrementCovariance& c, std::size_t parallelism) {
  const std::size_t n = c.size();
  // 1x1: sqrt(8 c^4) / (2 c^2) for any c > 0. H = 1/2: C = I.
  if (n == 1) return std::numbers::sqrt2;
  if (c.hurst().is_half()) return std::sqrt(2.0 / static_cast<double>(n));
  return std::sqrt(8.0 * trace_of_fourth_power(c, parallelism)) / var_zn_exact(c.hurst(), n);
}

double stein_bound(const HurstParameter& h, std::size_t n, std::size_t max_n,
                   std::size_t parallelism) {
  if (n < 1 || n > max_n) {
    throw DomainError("stein_bound needs 1 <= n <= " + std::to_string(max_n));
  }
  if (n == 1) return std::numbers::sqrt2;
  if (h.is_half()) return std::sqrt(2.0 / static_cast<double>(n));
  return stein_bound(build_scaled_cov(h, n, max_n), parallelism);
}

RegimeRate classify_regime(Theorem theorem, const HurstParameter& h) {
  if (h.above_three_quarters()) {
    throw DomainError("Berry-Esseen rates cover H <= 3/4 only, got H=" + h.literal());
  }
  if (theorem == Theorem::tudor_2011) {
    if (h.below_half()) return {theorem, RateBranch::sub_half};
    if (h.below_three_quarters()) return {theorem, RateBranch::mid};
    return {theorem, RateBranch::log_sqrt};
  }
  if (h.below_five_eighths()) return {theorem, RateBranch::sub_five_eighths};
  if (h.is_five_eighths()) return {theorem, RateBranch::at_five_eighths};
  if (h.below_three_quarters()) return {theorem, RateBranch::upper};
  return {theorem, RateBranch::at_three_quarters};
}

double theoretical_rate(const RegimeRate& regime, const HurstParameter& h, double n) {
  if (!(n >= 3.0)) throw DomainError("theoretical_rate needs n >= 3");
  if (classify_regime(regime.theorem, h) != regime) {
    throw DomainError("rate branch " + std::string(to_string(regime.branch)) +
                      " does not apply at H=" + h.literal());
  }
  const double hv = h.value();
  const double log_n = std::log(n);
  switch (regime.branch) {
    case RateBranch::sub_half:
    case RateBranch::sub_five_eighths:
      return 1.0 / std::sqrt(n);
    case RateBranch::mid:
      return std::pow(n, 2.0 * hv - 1.5);
    case RateBranch::log_sqrt:
      return 1.0 / std::sqrt(log_n);
    case RateBranch::at_five_eighths:
      return std::pow(log_n, 1.5) / std::sqrt(n);
    case RateBranch::upper:
      return std::pow(n, 4.0 * hv - 3.0);
    case RateBranch::at_three_quarters:
      return 1.0 / log_n;
  }
  return 0.0;
}

std::string_view to_string(Theorem theorem) noexcept {
  return theorem == Theorem::tudor_2011 ? "tudor_2011" : "improved";
}

std::string_view to_string(RateBranch branch) noexcept {
  switch (branch) {
    case RateBranch::sub_half: return "sub_half";
    case RateBranch::mid: return "mid";
    case RateBranch::log_sqrt: return "log_sqrt";
    case RateBranch::sub_five_eighths: return "sub_fiveeighths";
    case RateBranch::at_five_eighths: return "at_fiveeighths";
    case RateBranch::upper: return "upper";
    case RateBranch::at_three_quarters: return "at_threequarters";
  }
  return "unknown";
}

std::string_view to_string(VarianceNormalization normalization) noexcept {
  return normalization == VarianceNormalization::per_n ? "per_n" : "per_nlogn";
}

double VarianceResult::normalized() const noexcept {
  const double nd = static_cast<double>(n);
  return normalization == VarianceNormalization::per_n ? var_zn / nd
                                                       : var_zn / (nd * std::log(nd));
}

VarianceResult variance_with_limit(const HurstParameter& h, std::size_t n) {
  if (n < 2) throw DomainError("variance_with_limit needs n >= 2");
  VarianceResult result{h, n, var_zn_exact(h, n), VarianceNormalization::per_n, std::nullopt,
                        std::nullopt};
  if (h.below_three_quarters()) {
    SeriesLimit limit = sigma_sq_limit(h);
    result.limit = limit.value;
    result.warning = std::move(limit.warning);
  } else if (h.is_three_quarters()) {
    result.normalization = VarianceNormalization::per_nlogn;
    result.limit = kThreeQuartersVarianceConstant;
  } else {
    result.warning = "H=" + h.literal() +
                     " > 3/4: no central limit regime, Var(Z_n)/n has no finite limit";
  }
  return result;
}

}  // namespace subfbm
