#include "subfbm/covariance.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "subfbm/errors.hpp"
#include "subfbm/rho_kernel.hpp"

namespace subfbm {
namespace {

constexpr Eigen::Index kCholeskyBlock = 128;

}  // namespace

double subfbm_cov(const HurstParameter& h, double s, double t) {
  if (!(s >= 0.0) || !(t >= 0.0)) {
    throw DomainError("subfbm_cov needs s, t >= 0");
  }
  const double a = 2.0 * h.value();
  return std::pow(s, a) + std::pow(t, a) -
         0.5 * (std::pow(s + t, a) + std::pow(std::fabs(t - s), a));
}

const Eigen::MatrixXd& ScaledIncrementCovariance::factor() const {
  if (!factor_) throw std::logic_error("covariance has not been factorized");
  return *factor_;
}

ScaledIncrementCovariance build_scaled_cov(const HurstParameter& h, std::size_t n,
                                           std::size_t max_n) {
  if (n < 1 || n > max_n) {
    throw DomainError("number of increments must lie in [1, " + std::to_string(max_n) +
                      "], got " + std::to_string(n));
  }
  const RhoKernel kernel(h);
  const std::vector<double> lag = kernel.table(2 * n + 1);

  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(size, size);
  for (Eigen::Index l = 0; l < size; ++l) {
    for (Eigen::Index k = 0; k < size; ++k) {
      const auto diff = static_cast<std::size_t>(k > l ? k - l : l - k);
      m(k, l) = 0.5 * (lag[diff] - lag[static_cast<std::size_t>(k + l + 1)]);
    }
  }
  double trace = 0.0;
  for (Eigen::Index k = 0; k < size; ++k) trace += m(k, k);
  return ScaledIncrementCovariance(h, std::move(m), trace);
}

void cholesky_lower_in_place(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw DomainError("cholesky needs a square matrix");

  for (Eigen::Index k = 0; k < n; k += kCholeskyBlock) {
    const Eigen::Index b = std::min(kCholeskyBlock, n - k);
    auto diag = a.block(k, k, b, b);
    for (Eigen::Index j = 0; j < b; ++j) {
      double pivot = diag(j, j) - diag.row(j).head(j).squaredNorm();
      if (!(pivot > 0.0)) {
        throw NotPositiveDefiniteError(static_cast<std::size_t>(k + j), pivot);
      }
      pivot = std::sqrt(pivot);
      diag(j, j) = pivot;
      for (Eigen::Index i = j + 1; i < b; ++i) {
        diag(i, j) = (diag(i, j) - diag.row(i).head(j).dot(diag.row(j).head(j))) / pivot;
      }
    }
    const Eigen::Index rest = n - k - b;
    if (rest == 0) break;
    auto panel = a.block(k + b, k, rest, b);
    diag.triangularView<Eigen::Lower>().transpose().solveInPlace<Eigen::OnTheRight>(panel);
    a.block(k + b, k + b, rest, rest).selfadjointView<Eigen::Lower>().rankUpdate(panel, -1.0);
  }
  a.triangularView<Eigen::StrictlyUpper>().setZero();
}

ScaledIncrementCovariance factorize(ScaledIncrementCovariance c) {
  if (c.factor_) return c;
  Eigen::MatrixXd l = c.matrix_;
  cholesky_lower_in_place(l);
  c.factor_ = std::move(l);
  return c;
}

void sample_increment_block(const Eigen::MatrixXd& factor, std::span<const ReplicateKey> keys,
                            Eigen::MatrixXd& out) {
  const Eigen::Index n = factor.rows();
  const auto cols = static_cast<Eigen::Index>(keys.size());
  Eigen::MatrixXd normals(n, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    fill_standard_normals(keys[static_cast<std::size_t>(c)],
                          std::span<double>(normals.col(c).data(), static_cast<std::size_t>(n)));
  }
  out.resize(n, cols);
  out.noalias() = factor.triangularView<Eigen::Lower>() * normals;
}

IncrementPath sample_increments(const ScaledIncrementCovariance& c, ReplicateKey key) {
  Eigen::MatrixXd y;
  const ReplicateKey keys[] = {key};
  if (c.factorized()) {
    sample_increment_block(c.factor(), keys, y);
  } else {
    Eigen::MatrixXd l = c.matrix();
    cholesky_lower_in_place(l);
    sample_increment_block(l, keys, y);
  }
  return IncrementPath{c.hurst(), key, std::vector<double>(y.data(), y.data() + y.size())};
}

}  // namespace subfbm
