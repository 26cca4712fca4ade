#include "svgnum/float_bits.hpp"

#include <cmath>

namespace svgnum {

int slot_width(FloatKind kind) { return kind == FloatKind::F32 ? 4 : 2; }

FloatLayout float_layout(FloatKind kind) {
    switch (kind) {
    case FloatKind::F32: return {8, 23, 127};
    case FloatKind::F16: return {5, 10, 15};
    case FloatKind::BF16: return {8, 7, 127};
    }
    return {8, 23, 127};
}

namespace {

// Nearest integer, ties to even. `x` is nonnegative and exactly representable
// scaled input, so the arithmetic below is exact.
double round_ties_even(double x) {
    double f = std::floor(x);
    double frac = x - f;
    if (frac > 0.5) return f + 1;
    if (frac < 0.5) return f;
    return (std::fmod(f, 2.0) == 0.0) ? f : f + 1;
}

} // namespace

std::uint32_t double_to_bits(double value, FloatKind kind) {
    const auto [exp_bits, man_bits, bias] = float_layout(kind);
    const std::uint32_t sign = std::signbit(value) ? 1u : 0u;
    const std::uint32_t sign_bit = sign << (exp_bits + man_bits);
    const std::uint32_t exp_mask = (1u << exp_bits) - 1;

    if (std::isnan(value))
        return sign_bit | (exp_mask << man_bits) | (1u << (man_bits - 1));
    if (std::isinf(value))
        return sign_bit | (exp_mask << man_bits);

    double mag = std::fabs(value);
    if (mag == 0.0) return sign_bit;

    int e = 0;
    std::frexp(mag, &e);      // mag = m * 2^e, m in [0.5, 1)
    int exp = e - 1;          // mag = 1.f * 2^exp
    long biased = static_cast<long>(exp) + bias;

    if (biased >= 1) {
        // normal candidate: round the fraction to man_bits
        double scaled = std::ldexp(mag, man_bits - exp); // in [2^man, 2^(man+1))
        double r = round_ties_even(scaled);
        if (r >= std::ldexp(1.0, man_bits + 1)) { // rounded up to next binade
            r = std::ldexp(1.0, man_bits);
            ++biased;
        }
        if (biased >= exp_mask) // overflow -> infinity
            return sign_bit | (exp_mask << man_bits);
        std::uint32_t man = static_cast<std::uint32_t>(r) & ((1u << man_bits) - 1);
        return sign_bit | (static_cast<std::uint32_t>(biased) << man_bits) | man;
    }

    // subnormal candidate: value = f * 2^(1 - bias - man_bits)
    double scaled = std::ldexp(mag, man_bits + bias - 1);
    double r = round_ties_even(scaled);
    if (r >= std::ldexp(1.0, man_bits)) // rounded up into the normal range
        return sign_bit | (1u << man_bits);
    return sign_bit | static_cast<std::uint32_t>(r);
}

double bits_to_double(std::uint32_t bits, FloatKind kind) {
    const auto [exp_bits, man_bits, bias] = float_layout(kind);
    const std::uint32_t exp_mask = (1u << exp_bits) - 1;
    const std::uint32_t man_mask = (1u << man_bits) - 1;
    const std::uint32_t exp = (bits >> man_bits) & exp_mask;
    const std::uint32_t man = bits & man_mask;
    const double sgn = (bits >> (exp_bits + man_bits)) & 1u ? -1.0 : 1.0;

    if (exp == exp_mask)
        return man == 0 ? sgn * HUGE_VAL : std::nan("");
    if (exp == 0)
        return sgn * std::ldexp(static_cast<double>(man), 1 - bias - man_bits);
    return sgn * std::ldexp(static_cast<double>((1u << man_bits) | man),
                            static_cast<int>(exp) - bias - man_bits);
}

bool bits_is_nan(std::uint32_t bits, FloatKind kind) {
    const auto [exp_bits, man_bits, bias] = float_layout(kind);
    (void)bias;
    const std::uint32_t exp_mask = (1u << exp_bits) - 1;
    return ((bits >> man_bits) & exp_mask) == exp_mask && (bits & ((1u << man_bits) - 1)) != 0;
}

bool bits_is_inf(std::uint32_t bits, FloatKind kind) {
    const auto [exp_bits, man_bits, bias] = float_layout(kind);
    (void)bias;
    const std::uint32_t exp_mask = (1u << exp_bits) - 1;
    return ((bits >> man_bits) & exp_mask) == exp_mask && (bits & ((1u << man_bits) - 1)) == 0;
}

bool bits_sign(std::uint32_t bits, FloatKind kind) {
    const auto [exp_bits, man_bits, bias] = float_layout(kind);
    (void)bias;
    return (bits >> (exp_bits + man_bits)) & 1u;
}

std::uint32_t bits_mantissa(std::uint32_t bits, FloatKind kind) {
    const auto [exp_bits, man_bits, bias] = float_layout(kind);
    (void)exp_bits;
    (void)bias;
    return bits & ((1u << man_bits) - 1);
}

} // namespace svgnum
