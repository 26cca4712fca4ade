#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace svgnum {

// Formats a coordinate value for canonical output: rounded half-away-from-zero
// to `precision` decimals, trailing zeros and a trailing decimal point
// stripped, negative zero normalized to "0". Never uses scientific notation.
std::string format_number(double value, int precision);

// Rounds half-away-from-zero to `precision` decimals and returns the value.
double round_to_precision(double value, int precision);

// Shortest decimal text that parses back to exactly the same double.
// May use scientific notation.
std::string format_number_roundtrip(double value);

struct ScannedNumber {
    double value;
    std::size_t end; // offset one past the last consumed character
};

// Scans one number starting exactly at `pos` following the SVG path-data
// number grammar: sign? (digits ('.' digits?)? | '.' digits) exponent?.
// Jammed sequences such as "1.5.5" or "1-2" terminate at the first character
// that cannot extend the current number. Returns nullopt when no number
// starts at `pos`.
std::optional<ScannedNumber> scan_number(std::string_view text, std::size_t pos);

} // namespace svgnum
