#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace subfbm {

/// Philox4x64-10 counter-based generator (Salmon et al., Random123).
///
/// Stateless: a 256-bit counter and a 128-bit key map to four 64-bit words.
/// Streams never share state, so any replicate can be generated on its own.
class Philox4x64 {
 public:
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

/// Identifies one replicate's random stream: key (master_seed, index).
struct ReplicateKey {
  std::uint64_t master_seed = 0;
  std::uint64_t index = 0;

  friend bool operator==(const ReplicateKey&, const ReplicateKey&) = default;
};

/// Uniform in the open interval (0, 1) from the top 52 bits of a word.
/// With 53 bits the half-step offset rounds the top value up to 1.
inline double to_open_unit(std::uint64_t word) noexcept {
  return (static_cast<double>(word >> 12) + 0.5) * 0x1.0p-52;
}

/// Standard normal quantile by inverse CDF.
double standard_normal_quantile(double u);

/// Writes standard normals for positions 0..out.size()-1 of the stream.
/// Position j depends only on (key, j): word j % 4 of the block at counter j / 4.
void fill_standard_normals(ReplicateKey key, std::span<double> out);

}  // namespace subfbm
