#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sarfocus {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Splits one CSV line. Double-quoted fields may contain commas and `""`.
/// Returns false on an unterminated quote.
bool split_csv_line(std::string_view line, std::vector<std::string>& fields);

/// Quotes a field if it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

std::string_view trim(std::string_view s) noexcept;

}  // namespace sarfocus
