#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace subfbm::cli {

enum class OutputFormat { csv, json };

OutputFormat parse_format(std::string_view text);

using Cell = std::variant<std::monostate, double, std::int64_t, std::uint64_t, std::string>;

struct Field {
  std::string key;
  Cell value;
};

/// Command output: metadata, a table of rows, and optional summary fields.
///
/// CSV: "# key=value" comment lines (meta, then summary), a header, the rows.
/// JSON: {"meta": {...}, "data": {"rows": [{...}], "summary": {...}}}.
/// Doubles use 17 significant digits in both, NaN prints as "nan" / null.
struct OutputEnvelope {
  OutputFormat format = OutputFormat::csv;
  std::vector<Field> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<Field> summary;
};

std::string format_number(double value);
std::string utc_timestamp();

void write_envelope(std::ostream& out, const OutputEnvelope& envelope);

}  // namespace subfbm::cli
