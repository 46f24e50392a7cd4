#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "subfbm/hurst.hpp"
#include "subfbm/philox.hpp"

namespace subfbm {

inline constexpr std::size_t kDefaultMaxIncrements = std::size_t{1} << 14;

/// Process covariance R_H(s,t) = s^{2H} + t^{2H} - [(s+t)^{2H} + |t-s|^{2H}] / 2.
/// Throws DomainError for negative times.
double subfbm_cov(const HurstParameter& h, double s, double t);

/// Covariance of the n rescaled increments y_k = n^H (S_{(k+1)/n} - S_{k/n}):
///
///   C[k,l] = (rho(l-k) - rho(l+k+1)) / 2,   0 <= k, l < n.
///
/// Entries do not depend on n beyond the matrix size. The rho(l+k+1) term
/// breaks the Toeplitz structure, so the matrix is factorized densely.
class ScaledIncrementCovariance {
 public:
  const HurstParameter& hurst() const noexcept { return h_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  double operator()(std::size_t k, std::size_t l) const {
    return matrix_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
  }
  /// tr C = sum_k (1 - rho(2k+1)/2), the centering term of Z_n.
  double trace() const noexcept { return trace_; }

  bool factorized() const noexcept { return factor_.has_value(); }
  /// Lower-triangular L with L L^T = C (upper triangle zero).
  /// Throws std::logic_error if factorize() has not been applied.
  const Eigen::MatrixXd& factor() const;

 private:
  friend ScaledIncrementCovariance build_scaled_cov(const HurstParameter&, std::size_t,
                                                    std::size_t);
  friend ScaledIncrementCovariance factorize(ScaledIncrementCovariance);

  ScaledIncrementCovariance(HurstParameter h, Eigen::MatrixXd matrix, double trace)
      : h_(h), matrix_(std::move(matrix)), trace_(trace) {}

  HurstParameter h_;
  Eigen::MatrixXd matrix_;
  double trace_;
  std::optional<Eigen::MatrixXd> factor_;
};

/// O(n^2) entries from O(n) memoized rho lags 0..2n.
/// Throws DomainError unless 1 <= n <= max_n.
ScaledIncrementCovariance build_scaled_cov(const HurstParameter& h, std::size_t n,
                                           std::size_t max_n = kDefaultMaxIncrements);

/// Blocked Cholesky. Idempotent. Throws NotPositiveDefiniteError carrying
/// the failing pivot index.
ScaledIncrementCovariance factorize(ScaledIncrementCovariance c);

/// In-place lower Cholesky of a symmetric matrix (lower triangle read).
void cholesky_lower_in_place(Eigen::MatrixXd& a);

/// One realization of the n scaled increments.
struct IncrementPath {
  HurstParameter hurst;
  ReplicateKey key;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// Writes L z for the standard normal streams of keys[0..cols) into the
/// columns of out (n x keys.size()).
void sample_increment_block(const Eigen::MatrixXd& factor, std::span<const ReplicateKey> keys,
                            Eigen::MatrixXd& out);

/// y = L z with z drawn from the replicate stream `key`. If c is not yet
/// factorized a local factor is computed for this call.
IncrementPath sample_increments(const ScaledIncrementCovariance& c, ReplicateKey key);
inline IncrementPath sample_increments(const ScaledIncrementCovariance& c, std::uint64_t seed) {
  return sample_increments(c, ReplicateKey{seed, 0});
}

}  // namespace subfbm
