#include "subfbm/philox.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>

namespace subfbm {
namespace {

constexpr std::uint64_t kMultiplier0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMultiplier1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;
constexpr int kRounds = 10;

__extension__ using uint128 = unsigned __int128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const uint128 product = static_cast<uint128>(a) * b;
  hi = static_cast<std::uint64_t>(product >> 64);
  lo = static_cast<std::uint64_t>(product);
}

}  // namespace

Philox4x64::Counter Philox4x64::block(Counter ctr, Key key) noexcept {
  for (int round = 0; round < kRounds; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMultiplier0, ctr[0], hi0, lo0);
    mulhilo(kMultiplier1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double standard_normal_quantile(double u) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

void fill_standard_normals(ReplicateKey key, std::span<double> out) {
  const Philox4x64::Key philox_key{key.master_seed, key.index};
  std::size_t j = 0;
  for (std::uint64_t block = 0; j < out.size(); ++block) {
    const auto words = Philox4x64::block({block, 0, 0, 0}, philox_key);
    for (std::size_t w = 0; w < 4 && j < out.size(); ++w, ++j) {
      out[j] = standard_normal_quantile(to_open_unit(words[w]));
    }
  }
}

}  // namespace subfbm
