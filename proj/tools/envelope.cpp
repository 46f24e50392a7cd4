#include "envelope.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>

#include "subfbm/errors.hpp"

namespace subfbm::cli {
namespace {

std::string csv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string quoted = "\"";
          for (char c : v) {
            if (c == '"') quoted += '"';
            quoted += c;
          }
          return quoted + '"';
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

std::string json_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "null";
        } else if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(v) ? format_number(v) : "null";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return nlohmann::json(v).dump();
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

std::string json_key(const std::string& key) { return nlohmann::json(key).dump(); }

void write_json_object(std::ostream& out, const std::vector<Field>& fields) {
  out << '{';
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << json_key(fields[i].key) << ':' << json_cell(fields[i].value);
  }
  out << '}';
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw DomainError("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void write_envelope(std::ostream& out, const OutputEnvelope& envelope) {
  if (envelope.format == OutputFormat::csv) {
    for (const auto& f : envelope.meta) out << "# " << f.key << '=' << csv_cell(f.value) << '\n';
    for (const auto& f : envelope.summary) out << "# " << f.key << '=' << csv_cell(f.value) << '\n';
    for (std::size_t i = 0; i < envelope.columns.size(); ++i) {
      out << (i > 0 ? "," : "") << envelope.columns[i];
    }
    out << '\n';
    for (const auto& row : envelope.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i > 0 ? "," : "") << csv_cell(row[i]);
      out << '\n';
    }
    return;
  }

  out << "{\"meta\":";
  write_json_object(out, envelope.meta);
  out << ",\"data\":{\"rows\":[";
  for (std::size_t r = 0; r < envelope.rows.size(); ++r) {
    if (r > 0) out << ',';
    out << '{';
    const auto& row = envelope.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << json_key(envelope.columns[i]) << ':' << json_cell(row[i]);
    }
    out << '}';
  }
  out << ']';
  if (!envelope.summary.empty()) {
    out << ",\"summary\":";
    write_json_object(out, envelope.summary);
  }
  out << "}}\n";
}

}  // namespace subfbm::cli
