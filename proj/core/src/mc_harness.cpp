#include "subfbm/mc_harness.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "subfbm/errors.hpp"
#include "subfbm/parallel.hpp"

namespace subfbm {
namespace {

constexpr double kOracleRange = 10.0;
constexpr int kOracleGridPoints = 10'000;
constexpr int kOracleRefinePoints = 1'000;

double oracle_gap(std::size_t n, double x) {
  const double dof = static_cast<double>(n);
  const double y = dof + x * std::sqrt(2.0 * dof);
  return std::fabs(chi_square_cdf(y, n) - std_normal_cdf(x));
}

// Max of f on [lo, hi]: uniform grid, two zooms around the best point, then
// golden section on the final bracket.
double refine_max(const std::function<double(double)>& f, double lo, double hi, int points) {
  double best_x = lo;
  double best = f(lo);
  for (int zoom = 0; zoom < 3; ++zoom) {
    const int count = zoom == 0 ? points : kOracleRefinePoints;
    const double step = (hi - lo) / count;
    for (int i = 0; i <= count; ++i) {
      const double x = lo + step * i;
      const double v = f(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    lo = std::max(lo, best_x - step);
    hi = std::min(hi, best_x + step);
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 200 && b - a > 1e-13; ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    best = std::max({best, fc, fd});
  }
  return best;
}

}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

QvSampleBatch run_batch(const ScaledIncrementCovariance& factored, std::size_t m,
                        std::uint64_t master_seed, std::size_t parallelism) {
  if (m < kMinReplicates) {
    throw DomainError("run_batch needs at least " + std::to_string(kMinReplicates) +
                      " replicates, got " + std::to_string(m));
  }
  const Eigen::MatrixXd& factor = factored.factor();
  const std::size_t n = factored.size();
  const double var_zn = var_zn_exact(factored.hurst(), n);
  const double trace = factored.trace();
  const double scale = 1.0 / std::sqrt(var_zn);

  std::vector<double> samples(m);
  const std::size_t blocks = (m + kReplicateBlock - 1) / kReplicateBlock;
  parallel_for(blocks, resolve_parallelism(parallelism), [&](std::size_t b) {
    const std::size_t first = b * kReplicateBlock;
    const std::size_t count = std::min(kReplicateBlock, m - first);
    std::array<ReplicateKey, kReplicateBlock> keys;
    for (std::size_t i = 0; i < count; ++i) keys[i] = {master_seed, first + i};
    Eigen::MatrixXd y;
    sample_increment_block(factor, std::span<const ReplicateKey>(keys.data(), count), y);
    for (std::size_t i = 0; i < count; ++i) {
      const auto col = static_cast<Eigen::Index>(i);
      const double z = z_statistic(std::span<const double>(y.col(col).data(), n), trace);
      samples[first + i] = z * scale;
    }
  });

  return QvSampleBatch{factored.hurst(), n, m, master_seed, std::move(samples), var_zn};
}

QvSampleBatch run_batch(const HurstParameter& h, std::size_t n, std::size_t m,
                        std::uint64_t master_seed, std::size_t parallelism) {
  if (m < kMinReplicates) {
    throw DomainError("run_batch needs at least " + std::to_string(kMinReplicates) +
                      " replicates, got " + std::to_string(m));
  }
  return run_batch(factorize(build_scaled_cov(h, n)), m, master_seed, parallelism);
}

double dkw_epsilon(std::size_t m, double delta) {
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(m)));
}

KolmogorovEstimate kolmogorov_distance(std::span<const double> samples, double delta) {
  if (samples.empty()) throw DomainError("kolmogorov_distance needs a nonempty sample");
  if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("delta must lie in (0, 0.5]");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double phi = std_normal_cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / m - phi;
    const double below = phi - static_cast<double>(i) / m;
    d = std::max({d, std::fabs(above), std::fabs(below)});
  }
  return KolmogorovEstimate{std::min(d, 1.0), sorted.size(), dkw_epsilon(sorted.size(), delta),
                            delta};
}

KolmogorovEstimate kolmogorov_distance(const QvSampleBatch& batch, double delta) {
  return kolmogorov_distance(std::span<const double>(batch.samples), delta);
}

double chi_square_cdf(double y, std::size_t n) {
  if (n == 0) throw DomainError("chi-square needs at least one degree of freedom");
  if (!(y > 0.0)) return 0.0;
  if (std::isinf(y)) return 1.0;
  return boost::math::gamma_p(0.5 * static_cast<double>(n), 0.5 * y);
}

double chi_square_oracle_dkol(std::size_t n) {
  if (n < 1) throw DomainError("chi_square_oracle_dkol needs n >= 1");
  const auto gap = [n](double x) { return oracle_gap(n, x); };
  double best = refine_max(gap, -kOracleRange, kOracleRange, kOracleGridPoints);
  // Left end of the chi-square support, where F = 0 and the gap is Phi(x).
  const double edge = -std::sqrt(0.5 * static_cast<double>(n));
  if (edge >= -kOracleRange) best = std::max(best, std_normal_cdf(edge));
  return best;
}

LineFit fit_log_log(std::span<const double> n, std::span<const double> d) {
  if (n.size() != d.size() || n.size() < 2) throw DomainError("fit needs matching grids of >= 2");
  const std::size_t k = n.size();
  std::vector<double> x(k), y(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(n[i] > 0.0) || !(d[i] > 0.0)) throw DomainError("log-log fit needs positive values");
    x[i] = std::log(n[i]);
    y[i] = std::log(d[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("log-log fit needs at least two distinct n");
  LineFit fit{sxy / sxx, 0.0, 0.0};
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(k));
  return fit;
}

LineFit fit_inverse_log(std::span<const double> n, std::span<const double> d) {
  if (n.size() != d.size() || n.empty()) throw DomainError("fit needs matching nonempty grids");
  const std::size_t k = n.size();
  double sxx = 0.0, sxy = 0.0;
  std::vector<double> x(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(n[i] > 1.0)) throw DomainError("1/log n fit needs n > 1");
    x[i] = 1.0 / std::log(n[i]);
    sxx += x[i] * x[i];
    sxy += x[i] * d[i];
  }
  LineFit fit{sxy / sxx, 0.0, 0.0};
  double ss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = d[i] - fit.slope * x[i];
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(k));
  return fit;
}

void validate_rate_grid(std::span<const std::size_t> n_grid) {
  if (n_grid.size() < 4) {
    throw DomainError("rate fit needs at least 4 grid points, got " +
                      std::to_string(n_grid.size()));
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const std::size_t n = n_grid[i];
    if (n < 2 || (n & (n - 1)) != 0) {
      throw DomainError("rate grid points must be powers of two >= 2, got " + std::to_string(n));
    }
    if (i > 0 && n <= n_grid[i - 1]) {
      throw DomainError("rate grid must be strictly increasing");
    }
  }
}

RateGridPoint estimate_grid_point(const HurstParameter& h, std::size_t n, std::size_t m,
                                  std::uint64_t master_seed, double delta,
                                  std::size_t parallelism) {
  ScaledIncrementCovariance c = build_scaled_cov(h, n);
  const double bound = stein_bound(c, parallelism);
  const QvSampleBatch batch = run_batch(factorize(std::move(c)), m, master_seed, parallelism);
  const KolmogorovEstimate estimate = kolmogorov_distance(batch, delta);

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  RateGridPoint point{n, estimate.d_hat, estimate.dkw_epsilon, bound, nan, nan};
  if (!h.above_three_quarters() && n >= 3) {
    const auto nd = static_cast<double>(n);
    point.tudor_rate = theoretical_rate(classify_regime(Theorem::tudor_2011, h), h, nd);
    point.improved_rate = theoretical_rate(classify_regime(Theorem::improved, h), h, nd);
  }
  return point;
}

RateReport summarize_rate(const HurstParameter& h, std::vector<RateGridPoint> grid) {
  if (grid.size() < 4) throw DomainError("rate fit needs at least 4 grid points");
  const RegimeRate regime = classify_regime(Theorem::improved, h);
  std::sort(grid.begin(), grid.end(),
            [](const RateGridPoint& a, const RateGridPoint& b) { return a.n < b.n; });
  std::vector<double> n(grid.size()), d(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    n[i] = static_cast<double>(grid[i].n);
    d[i] = grid[i].d_hat;
  }
  if (h.is_three_quarters()) {
    const LineFit fit = fit_inverse_log(n, d);
    return RateReport{h, std::move(grid), FitKind::inverse_log_constant, fit.slope, fit.residual,
                      regime};
  }
  const LineFit fit = fit_log_log(n, d);
  return RateReport{h, std::move(grid), FitKind::log_log_slope, fit.slope, fit.residual, regime};
}

RateReport fit_rate(const HurstParameter& h, std::span<const std::size_t> n_grid, std::size_t m,
                    std::uint64_t master_seed, double delta, std::size_t parallelism,
                    const std::function<void(const RateGridPoint&)>& on_point) {
  if (h.above_three_quarters()) {
    throw DomainError("rate fit covers H <= 3/4 only, got H=" + h.literal());
  }
  validate_rate_grid(n_grid);
  std::vector<RateGridPoint> grid;
  grid.reserve(n_grid.size());
  for (std::size_t n : n_grid) {
    grid.push_back(estimate_grid_point(h, n, m, master_seed, delta, parallelism));
    if (on_point) on_point(grid.back());
  }
  return summarize_rate(h, std::move(grid));
}

}  // namespace subfbm
