#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "subfbm/covariance.hpp"
#include "subfbm/hurst.hpp"
#include "subfbm/qv_stats.hpp"

namespace subfbm {

/// Phi(x) via erfc; absolute error well below 1e-12.
double std_normal_cdf(double x);

/// m realizations of V_n = Z_n / sqrt(Var Z_n), ordered by replicate index.
struct QvSampleBatch {
  HurstParameter hurst;
  std::size_t n;
  std::size_t m;
  std::uint64_t master_seed;
  std::vector<double> samples;
  double var_zn;
};

inline constexpr std::size_t kMinReplicates = 100;
/// Replicates per triangular product. Fixed, so output never depends on threads.
inline constexpr std::size_t kReplicateBlock = 64;

/// Replicate i uses stream (master_seed, i). `parallelism` 0 reads
/// SUBFBM_PARALLELISM. Throws DomainError for m < 100.
QvSampleBatch run_batch(const HurstParameter& h, std::size_t n, std::size_t m,
                        std::uint64_t master_seed, std::size_t parallelism = 0);
/// Reuses an existing factorization of C.
QvSampleBatch run_batch(const ScaledIncrementCovariance& factored, std::size_t m,
                        std::uint64_t master_seed, std::size_t parallelism = 0);

struct KolmogorovEstimate {
  double d_hat;
  std::size_t m;
  double dkw_epsilon;
  double delta;
};

/// sqrt(ln(2/delta) / (2m)).
double dkw_epsilon(std::size_t m, double delta);

/// sup_x |F_m(x) - Phi(x)| by the two-sided order-statistics formula.
/// Throws DomainError for an empty sample or delta outside (0, 0.5].
KolmogorovEstimate kolmogorov_distance(std::span<const double> samples, double delta = 0.01);
KolmogorovEstimate kolmogorov_distance(const QvSampleBatch& batch, double delta = 0.01);

/// CDF of chi-square with n degrees of freedom (regularized lower incomplete gamma).
double chi_square_cdf(double y, std::size_t n);

/// Exact d_Kol(V_n, N) at H = 1/2, where V_n = (chi2_n - n) / sqrt(2n):
/// sup over x in [-10, 10] of |F_{chi2_n}(n + x sqrt(2n)) - Phi(x)|.
double chi_square_oracle_dkol(std::size_t n);

struct RateGridPoint {
  std::size_t n;
  double d_hat;
  double dkw_epsilon;
  double stein_bound;
  double tudor_rate;
  double improved_rate;
};

enum class FitKind {
  log_log_slope,        // slope of log d_hat on log n
  inverse_log_constant  // through-origin slope of d_hat on 1/log n (H = 3/4)
};

struct LineFit {
  double slope;
  double intercept;
  /// Root-mean-square residual in the regression coordinates.
  double residual;
};

/// Least squares of log d on log n.
LineFit fit_log_log(std::span<const double> n, std::span<const double> d);
/// Least squares of d on 1/log n through the origin.
LineFit fit_inverse_log(std::span<const double> n, std::span<const double> d);

struct RateReport {
  HurstParameter hurst;
  std::vector<RateGridPoint> grid;
  FitKind fit_kind;
  /// Log-log slope, or the fitted constant c in d = c / log n at H = 3/4.
  double fitted_exponent;
  double fit_residual;
  RegimeRate regime;
};

/// Fits already-estimated grid points. Throws DomainError for fewer than 4
/// points, H > 3/4 or non-positive distances.
RateReport summarize_rate(const HurstParameter& h, std::vector<RateGridPoint> grid);

/// Checks that n_grid holds at least 4 strictly increasing powers of two.
void validate_rate_grid(std::span<const std::size_t> n_grid);

/// Monte Carlo d_hat at each n, alongside the Stein bound and both theorems' rates.
RateReport fit_rate(const HurstParameter& h, std::span<const std::size_t> n_grid, std::size_t m,
                    std::uint64_t master_seed, double delta = 0.01, std::size_t parallelism = 0,
                    const std::function<void(const RateGridPoint&)>& on_point = {});

/// Grid row for a single n. Rates are NaN where undefined (n < 3 or H > 3/4).
RateGridPoint estimate_grid_point(const HurstParameter& h, std::size_t n, std::size_t m,
                                  std::uint64_t master_seed, double delta,
                                  std::size_t parallelism = 0);

}  // namespace subfbm
