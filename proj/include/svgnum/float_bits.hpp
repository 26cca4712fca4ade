#pragma once

#include <cstdint>

namespace svgnum {

// Storage format of an SVGFloat value slot.
enum class FloatKind : std::uint8_t { F32 = 0, F16 = 1, BF16 = 2 };

int slot_width(FloatKind kind); // bytes: 4, 2, 2

struct FloatLayout {
    int exp_bits;
    int man_bits;
    int bias;
};

FloatLayout float_layout(FloatKind kind);

// Round-to-nearest-even conversion of a double into the kind's bit pattern
// (low slot_width*8 bits). Values beyond the finite range become infinities;
// callers that forbid them must test with bits_is_inf.
std::uint32_t double_to_bits(double value, FloatKind kind);

// Exact widening of a bit pattern back to double (subnormals included).
double bits_to_double(std::uint32_t bits, FloatKind kind);

bool bits_is_nan(std::uint32_t bits, FloatKind kind);
bool bits_is_inf(std::uint32_t bits, FloatKind kind);
bool bits_sign(std::uint32_t bits, FloatKind kind);
std::uint32_t bits_mantissa(std::uint32_t bits, FloatKind kind);

} // namespace svgnum
