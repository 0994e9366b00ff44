#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace devroles::csv {

/// Quotes a field per RFC 4180 when it contains a comma, quote or line break.
std::string escape(std::string_view field);

/// Writes one CRLF-free record; fields are escaped as needed.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Reads all records. Handles quoted fields with embedded commas, quotes and
/// newlines; tolerates CRLF line endings. Blank lines are skipped.
std::vector<std::vector<std::string>> read_all(std::istream& in);

/// Locale-independent, round-trip safe formatting for real-valued columns.
std::string format_real(double v);

}  // namespace devroles::csv
