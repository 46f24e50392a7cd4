#include "subfbm/rho_kernel.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "subfbm/errors.hpp"

namespace subfbm {
namespace {

constexpr std::int64_t kMinTailLag = 1024;
constexpr std::int64_t kMaxTailLag = std::int64_t{1} << 26;

// Binomial coefficient C(a, k) for real a, by the product recursion.
double binomial(double a, int k) {
  double c = 1.0;
  for (int j = 0; j < k; ++j) c *= (a - j) / (j + 1);
  return c;
}

}  // namespace

RhoKernel::RhoKernel(HurstParameter h, std::int64_t large_lag_threshold)
    : h_(h), threshold_(large_lag_threshold), two_h_(2.0 * h.value()) {
  if (large_lag_threshold < 1) {
    throw DomainError("large-lag threshold must be a positive lag");
  }
}

double RhoKernel::operator()(std::int64_t r) const noexcept {
  const std::int64_t lag = r < 0 ? -r : r;
  if (lag == 0) return 2.0;
  if (h_.is_half()) return 0.0;
  if (lag == 1) {
    // 2^{2H} - 2 without cancellation near H = 1/2.
    return 2.0 * std::expm1((two_h_ - 1.0) * std::numbers::ln2);
  }
  if (lag > threshold_) return series(lag);
  return direct(lag);
}

double RhoKernel::direct(std::int64_t r) const noexcept {
  const double x = static_cast<double>(r < 0 ? -r : r);
  return std::pow(x + 1.0, two_h_) + std::pow(std::fabs(x - 1.0), two_h_) -
         2.0 * std::pow(x, two_h_);
}

double RhoKernel::series(std::int64_t r) const {
  const std::int64_t lag = r < 0 ? -r : r;
  if (lag < 2) throw DomainError("binomial series for rho needs |r| >= 2");
  const double x = static_cast<double>(lag);
  const double inv_sq = 1.0 / (x * x);

  // (1+u)^a + (1-u)^a - 2 = 2 sum_{j>=1} C(a, 2j) u^{2j}, all terms the sign of a-1.
  double coeff = two_h_ * (two_h_ - 1.0) / 2.0;
  double power = inv_sq;
  double sum = coeff * power;
  for (int k = 2; k < 400; k += 2) {
    coeff *= (two_h_ - k) * (two_h_ - k - 1.0) / ((k + 1.0) * (k + 2.0));
    power *= inv_sq;
    const double term = coeff * power;
    sum += term;
    if (std::fabs(term) <= 1e-18 * std::fabs(sum)) break;
  }
  return 2.0 * std::pow(x, two_h_) * sum;
}

std::vector<double> RhoKernel::table(std::size_t count) const {
  std::vector<double> values(count);
  for (std::size_t r = 0; r < count; ++r) values[r] = (*this)(static_cast<std::int64_t>(r));
  return values;
}

double rho_asymptotic(const HurstParameter& h, std::int64_t r) {
  if (r == 0) throw DomainError("rho_asymptotic is undefined at lag 0");
  const double two_h = 2.0 * h.value();
  const double lag = static_cast<double>(r < 0 ? -r : r);
  return two_h * (two_h - 1.0) * std::pow(lag, two_h - 2.0);
}

SeriesLimit sigma_sq_limit(const HurstParameter& h, double rel_tol) {
  if (!h.below_three_quarters()) {
    throw DivergentSeriesError(
        "series diverges at H=3/4 and above: sum of rho(r)^2 needs 4H-4 < -1, got H=" +
        h.literal());
  }
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) {
    throw DomainError("rel_tol must lie in (0, 1e-2]");
  }

  SeriesLimit result;
  if (h.value() > 0.74) {
    result.warning = "H=" + h.literal() +
                     " is close to 3/4: the series converges slowly and the value is "
                     "dominated by its tail estimate";
  }
  if (h.is_half()) {
    result.value = 2.0;
    return result;
  }

  const RhoKernel kernel(h);
  const double a = 2.0 * h.value();
  // rho(r) = 2 (c2 r^{a-2} + c4 r^{a-4} + ...), so
  // rho(r)^2 = 4 c2^2 r^{2a-4} + 8 c2 c4 r^{2a-6} + O(r^{2a-8}).
  const double c2 = binomial(a, 2);
  const double c4 = binomial(a, 4);
  const double lead = 4.0 * c2 * c2;
  const double next = 8.0 * c2 * c4;
  const double p1 = 2.0 * a - 4.0;
  const double p2 = 2.0 * a - 6.0;

  auto tail_from = [&](std::int64_t last) {
    // sum_{r > last} f(r) = int_{last+1/2}^inf f + f'(last+1/2)/24 + O(f''').
    const double u = static_cast<double>(last) + 0.5;
    const double integral =
        lead * std::pow(u, p1 + 1.0) / -(p1 + 1.0) + next * std::pow(u, p2 + 1.0) / -(p2 + 1.0);
    const double derivative = lead * p1 * std::pow(u, p1 - 1.0) + next * p2 * std::pow(u, p2 - 1.0);
    return integral + derivative / 24.0;
  };

  // Neumaier-compensated partial sum, extended in doubling stages.
  double sum = 0.0;
  double compensation = 0.0;
  auto add = [&](double v) {
    const double t = sum + v;
    compensation += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  };

  std::int64_t summed = 0;
  std::int64_t target = kMinTailLag;
  while (true) {
    for (std::int64_t r = summed + 1; r <= target; ++r) {
      const double v = kernel(r);
      add(v * v);
    }
    summed = target;
    const double tail = tail_from(summed);
    const double total = 2.0 + sum + compensation + tail;
    const double lag = static_cast<double>(summed);
    if (std::fabs(tail) / (lag * lag) <= 0.1 * rel_tol * total || summed >= kMaxTailLag) {
      result.value = total;
      result.tail = tail;
      result.lags_summed = summed;
      return result;
    }
    target *= 2;
  }
}

}  // namespace subfbm
