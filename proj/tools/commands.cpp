#include "commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string_view>

#include "subfbm/covariance.hpp"
#include "subfbm/errors.hpp"
#include "subfbm/hurst.hpp"
#include "subfbm/mc_harness.hpp"
#include "subfbm/qv_stats.hpp"
#include "subfbm/rho_kernel.hpp"

namespace subfbm::cli {
namespace {

std::vector<Field> base_meta(std::string_view command, const HurstParameter& h) {
  return {{"tool", std::string("subfbm")},
          {"version", std::string(SUBFBM_VERSION)},
          {"command", std::string(command)},
          {"hurst", h.literal()}};
}

void finish_meta(std::vector<Field>& meta) { meta.push_back({"timestamp", utc_timestamp()}); }

Cell as_cell(std::size_t v) { return static_cast<std::uint64_t>(v); }

void emit(const Diagnostics& diag, const std::string& message) {
  if (diag) diag(message);
}

}  // namespace

std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> values;
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw DomainError("malformed --n-list entry '" + std::string(item) + "'");
    }
    values.push_back(value);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return values;
}

OutputEnvelope cmd_rho(const RhoOptions& options) {
  const HurstParameter h = HurstParameter::parse(options.hurst);
  if (options.max_lag < 0) throw DomainError("--max-lag must be >= 0");
  const RhoKernel kernel(h);

  OutputEnvelope env;
  env.format = options.format;
  env.meta = base_meta("rho", h);
  env.meta.push_back({"max_lag", static_cast<std::int64_t>(options.max_lag)});
  finish_meta(env.meta);
  env.columns = {"r", "rho", "rho_asymptotic"};
  for (std::int64_t r = 0; r <= options.max_lag; ++r) {
    Cell asymptotic;
    if (r != 0) asymptotic = rho_asymptotic(h, r);
    env.rows.push_back({r, kernel(r), asymptotic});
  }
  return env;
}

OutputEnvelope cmd_variance(const VarianceOptions& options, const Diagnostics& diag) {
  const HurstParameter h = HurstParameter::parse(options.hurst);
  if (options.limit && h.above_three_quarters()) {
    throw DomainError("--limit needs H <= 3/4: Var(Z_n)/n has no finite limit at H=" +
                      h.literal());
  }
  const VarianceResult result = variance_with_limit(h, options.n);
  if (result.warning) emit(diag, "warning: " + *result.warning);

  OutputEnvelope env;
  env.format = options.format;
  env.meta = base_meta("variance", h);
  env.meta.push_back({"n", as_cell(options.n)});
  finish_meta(env.meta);
  const bool per_nlogn = result.normalization == VarianceNormalization::per_nlogn;
  env.columns = {"n", "var_zn", per_nlogn ? "var_zn_over_nlogn" : "var_zn_over_n"};
  std::vector<Cell> row{as_cell(options.n), result.var_zn, result.normalized()};
  if (options.limit) {
    env.columns.push_back("limit");
    row.push_back(result.limit ? Cell{*result.limit} : Cell{});
  }
  env.rows.push_back(std::move(row));
  return env;
}

OutputEnvelope cmd_kolmogorov(const KolmogorovOptions& options, const Diagnostics& diag) {
  const HurstParameter h = HurstParameter::parse(options.hurst);
  if (h.above_three_quarters()) {
    emit(diag, "warning: H=" + h.literal() + " > 3/4, Berry-Esseen rates are not defined");
  }
  const RateGridPoint point =
      estimate_grid_point(h, options.n, options.reps, options.seed, options.delta);

  OutputEnvelope env;
  env.format = options.format;
  env.meta = base_meta("kolmogorov", h);
  env.meta.push_back({"n", as_cell(options.n)});
  env.meta.push_back({"m", as_cell(options.reps)});
  env.meta.push_back({"seed", options.seed});
  env.meta.push_back({"delta", options.delta});
  finish_meta(env.meta);
  env.columns = {"n",           "m",          "d_hat",        "dkw_epsilon",
                 "stein_bound", "tudor_rate", "improved_rate"};
  env.rows.push_back({as_cell(point.n), as_cell(options.reps), point.d_hat, point.dkw_epsilon,
                      point.stein_bound, point.tudor_rate, point.improved_rate});
  return env;
}

OutputEnvelope cmd_rate_fit(const RateFitOptions& options, const Diagnostics& diag) {
  const HurstParameter h = HurstParameter::parse(options.hurst);
  const std::vector<std::size_t> grid = parse_n_list(options.n_list);
  validate_rate_grid(grid);
  if (h.above_three_quarters()) {
    throw DomainError("rate fit covers H <= 3/4 only, got H=" + h.literal());
  }

  const RateReport report =
      fit_rate(h, grid, options.reps, options.seed, 0.01, 0, [&](const RateGridPoint& p) {
        std::ostringstream line;
        line << "n=" << p.n << " d_hat=" << format_number(p.d_hat)
             << " stein_bound=" << format_number(p.stein_bound);
        emit(diag, line.str());
      });

  OutputEnvelope env;
  env.format = options.format;
  env.meta = base_meta("rate-fit", h);
  env.meta.push_back({"n_list", options.n_list});
  env.meta.push_back({"m", as_cell(options.reps)});
  env.meta.push_back({"seed", options.seed});
  env.meta.push_back({"delta", 0.01});
  finish_meta(env.meta);
  env.columns = {"n", "d_hat", "dkw_epsilon", "stein_bound", "tudor_rate", "improved_rate"};
  for (const RateGridPoint& p : report.grid) {
    env.rows.push_back({as_cell(p.n), p.d_hat, p.dkw_epsilon, p.stein_bound, p.tudor_rate,
                        p.improved_rate});
  }
  const bool constant = report.fit_kind == FitKind::inverse_log_constant;
  env.summary = {
      {"fit_kind", std::string(constant ? "inverse_log_constant" : "log_log_slope")},
      {constant ? "fitted_constant" : "fitted_exponent", report.fitted_exponent},
      {"fit_residual", report.fit_residual},
      {"regime", std::string(to_string(report.regime.branch))},
  };
  return env;
}

OutputEnvelope cmd_stein_bound(const SteinBoundOptions& options) {
  const HurstParameter h = HurstParameter::parse(options.hurst);
  const double bound = stein_bound(h, options.n);

  OutputEnvelope env;
  env.format = options.format;
  env.meta = base_meta("stein-bound", h);
  env.meta.push_back({"n", as_cell(options.n)});
  finish_meta(env.meta);
  env.columns = {"n", "stein_bound"};
  env.rows.push_back({as_cell(options.n), bound});
  return env;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subfractional Brownian motion quadratic variation toolkit", "subfbm"};
  app.set_version_flag("--version", std::string(SUBFBM_VERSION));
  app.require_subcommand(1);

  std::string format = "csv";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  };

  RhoOptions rho_opts;
  auto* rho = app.add_subcommand("rho", "rho(r), r = 0..max-lag, with its asymptotic");
  rho->add_option("--hurst", rho_opts.hurst, "Hurst index, decimal or fraction")->required();
  rho->add_option("--max-lag", rho_opts.max_lag, "Largest lag")->required()->check(
      CLI::NonNegativeNumber);
  add_format(rho);

  VarianceOptions var_opts;
  auto* variance = app.add_subcommand("variance", "Exact Var(Z_n) and its limit");
  variance->add_option("--hurst", var_opts.hurst, "Hurst index")->required();
  variance->add_option("--n", var_opts.n, "Number of increments")->required();
  variance->add_flag("--limit", var_opts.limit, "Also print the asymptotic constant");
  add_format(variance);

  KolmogorovOptions kol_opts;
  auto* kolmogorov = app.add_subcommand("kolmogorov", "Monte Carlo d_Kol(V_n, N) at one n");
  kolmogorov->add_option("--hurst", kol_opts.hurst, "Hurst index")->required();
  kolmogorov->add_option("--n", kol_opts.n, "Number of increments")->required();
  kolmogorov->add_option("--reps", kol_opts.reps, "Monte Carlo replicates")->required();
  kolmogorov->add_option("--seed", kol_opts.seed, "Master seed")->required();
  kolmogorov->add_option("--delta", kol_opts.delta, "DKW confidence parameter")
      ->capture_default_str();
  add_format(kolmogorov);

  RateFitOptions fit_opts;
  auto* rate_fit = app.add_subcommand("rate-fit", "Convergence-rate fit over a dyadic n grid");
  rate_fit->add_option("--hurst", fit_opts.hurst, "Hurst index")->required();
  rate_fit->add_option("--n-list", fit_opts.n_list, "Comma-separated powers of two")->required();
  rate_fit->add_option("--reps", fit_opts.reps, "Monte Carlo replicates")->required();
  rate_fit->add_option("--seed", fit_opts.seed, "Master seed")->required();
  add_format(rate_fit);

  SteinBoundOptions stein_opts;
  auto* stein = app.add_subcommand("stein-bound", "Exact Stein-Malliavin bound");
  stein->add_option("--hurst", stein_opts.hurst, "Hurst index")->required();
  stein->add_option("--n", stein_opts.n, "Number of increments")->required();
  add_format(stein);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "subfbm: " << e.what() << '\n';
    return kExitUsage;
  }

  const Diagnostics diag = [&err](const std::string& line) { err << line << '\n'; };
  try {
    const OutputFormat fmt = parse_format(format);
    OutputEnvelope env;
    if (rho->parsed()) {
      rho_opts.format = fmt;
      env = cmd_rho(rho_opts);
    } else if (variance->parsed()) {
      var_opts.format = fmt;
      env = cmd_variance(var_opts, diag);
    } else if (kolmogorov->parsed()) {
      kol_opts.format = fmt;
      env = cmd_kolmogorov(kol_opts, diag);
    } else if (rate_fit->parsed()) {
      fit_opts.format = fmt;
      env = cmd_rate_fit(fit_opts, diag);
    } else {
      stein_opts.format = fmt;
      env = cmd_stein_bound(stein_opts);
    }
    write_envelope(out, env);
    out.flush();
    return kExitOk;
  } catch (const DomainError& e) {
    err << "subfbm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "subfbm: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace subfbm::cli
