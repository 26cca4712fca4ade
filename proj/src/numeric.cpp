#include "svgnum/numeric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace svgnum {

namespace {

double pow10_int(int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= 10.0;
    return r;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

} // namespace

double round_to_precision(double value, int precision) {
    const double scale = pow10_int(precision);
    const double scaled = value * scale;
    // llround rounds halfway cases away from zero regardless of the current
    // FP rounding mode. Coordinates stay far below the 2^53 integer limit.
    return static_cast<double>(std::llround(scaled)) / scale;
}

std::string format_number(double value, int precision) {
    const double scale = pow10_int(precision);
    long long units = std::llround(value * scale);
    if (units == 0) return "0";

    std::string digits = std::to_string(units < 0 ? -units : units);
    if (static_cast<int>(digits.size()) <= precision)
        digits.insert(0, precision + 1 - digits.size(), '0');

    std::string out;
    if (units < 0) out.push_back('-');
    out.append(digits, 0, digits.size() - precision);
    if (precision > 0) {
        std::string frac = digits.substr(digits.size() - precision);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) {
            out.push_back('.');
            out.append(frac);
        }
    }
    return out;
}

std::string format_number_roundtrip(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::optional<ScannedNumber> scan_number(std::string_view text, std::size_t pos) {
    const std::size_t n = text.size();
    std::size_t i = pos;
    if (i < n && (text[i] == '+' || text[i] == '-')) ++i;

    std::size_t int_digits = 0;
    while (i < n && is_digit(text[i])) { ++i; ++int_digits; }

    std::size_t frac_digits = 0;
    if (i < n && text[i] == '.') {
        std::size_t dot = i;
        ++i;
        while (i < n && is_digit(text[i])) { ++i; ++frac_digits; }
        if (int_digits == 0 && frac_digits == 0) return std::nullopt; // lone "."
        if (frac_digits == 0) i = dot + 1; // "1." is a valid number
    }
    if (int_digits == 0 && frac_digits == 0) return std::nullopt;

    // Optional exponent; roll back if it has no digits ("1e" -> number "1").
    if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t e = i;
        ++i;
        if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
        std::size_t exp_digits = 0;
        while (i < n && is_digit(text[i])) { ++i; ++exp_digits; }
        if (exp_digits == 0) i = e;
    }

    double value = 0.0;
    const char* begin = text.data() + pos;
    const char* end = text.data() + i;
    if (*begin == '+') ++begin;          // from_chars rejects a leading plus
    if (end[-1] == '.') --end;           // "1." converts as "1"
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
    return ScannedNumber{value, i};
}

} // namespace svgnum
