#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "envelope.hpp"

namespace subfbm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct RhoOptions {
  std::string hurst;
  std::int64_t max_lag = 0;
  OutputFormat format = OutputFormat::csv;
};

struct VarianceOptions {
  std::string hurst;
  std::size_t n = 0;
  bool limit = false;
  OutputFormat format = OutputFormat::csv;
};

struct KolmogorovOptions {
  std::string hurst;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double delta = 0.01;
  OutputFormat format = OutputFormat::csv;
};

struct RateFitOptions {
  std::string hurst;
  std::string n_list;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::csv;
};

struct SteinBoundOptions {
  std::string hurst;
  std::size_t n = 0;
  OutputFormat format = OutputFormat::csv;
};

/// Diagnostics sink (warnings, progress). The CLI passes stderr.
using Diagnostics = std::function<void(const std::string&)>;

// Each command validates its inputs (DomainError on bad input) and returns
// the envelope to print. Parallelism comes from SUBFBM_PARALLELISM.
OutputEnvelope cmd_rho(const RhoOptions& options);
OutputEnvelope cmd_variance(const VarianceOptions& options, const Diagnostics& diag = {});
OutputEnvelope cmd_kolmogorov(const KolmogorovOptions& options, const Diagnostics& diag = {});
OutputEnvelope cmd_rate_fit(const RateFitOptions& options, const Diagnostics& diag = {});
OutputEnvelope cmd_stein_bound(const SteinBoundOptions& options);

/// Parses "64,128,256". Throws DomainError on malformed entries.
std::vector<std::size_t> parse_n_list(const std::string& text);

/// Full command-line entry point: parses argv, runs, prints, maps errors to
/// exit codes (0 ok, 2 usage/validation, 1 runtime failure).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subfbm::cli
