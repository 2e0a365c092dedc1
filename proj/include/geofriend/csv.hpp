#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace geofriend::csv {

// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
// Returns nullopt for an unterminated quote.
std::optional<std::vector<std::string>> split_line(std::string_view line);

// Quotes a field only when it contains a comma, quote or line break.
std::string quote(std::string_view field);

// Shortest decimal text that parses back to the same double.
std::string shortest(double value);

// Shortest round-trip text without an exponent.
std::string shortest_fixed(double value);

// printf-style "%.*g" rendering, used for report columns.
std::string general(double value, int precision = 10);

std::optional<double> parse_double(std::string_view text);

}  // namespace geofriend::csv
