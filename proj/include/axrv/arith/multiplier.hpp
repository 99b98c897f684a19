#pragma once

#include <algorithm>
#include <array>
#include <cstdint>

#include "axrv/arith/full_adder.hpp"

namespace axrv {

/// Error control of the 8x8 multiplier's final 12-bit addition. Mask bit k
/// drives the full adder at product bit 4+k (1 = exact); product bits 11-15
/// are fixed exact, so the seven wired bits give 128 error configurations.
/// `truncation` forces that many low product bits to zero (0-31; the 8x8
/// product saturates at 16 cleared bits).
struct MulConfig {
  uint32_t error_mask = 0x7Fu;
  uint32_t truncation = 0;
};

inline constexpr uint32_t kMulControllableBits = 7;
inline constexpr uint32_t kMulFirstControlledBit = 4;
inline constexpr uint32_t kMulConfigCount = 128;

/// Worst-case absolute deviation of one 8x8 product under a mask: each
/// approximate position contributes at most its own bit weight.
constexpr uint32_t mul8_error_bound(uint32_t error_mask) {
  uint32_t bound = 0;
  for (uint32_t k = 0; k < kMulControllableBits; ++k)
    if (!((error_mask >> k) & 1u)) bound += 1u << (kMulFirstControlledBit + k);
  return bound;
}

namespace detail {

struct Mul8Operands {
  uint32_t even;
  uint32_t odd;
};

// Partial products of a*b gathered into one exact operand per row parity.
// Both sums fit in 16 bits (255*85 and 255*170).
constexpr Mul8Operands mul8_operands(uint8_t a, uint8_t b) {
  Mul8Operands ops{0, 0};
  for (uint32_t i = 0; i < 8; ++i)
    if ((uint32_t(b) >> i) & 1u) ((i & 1u) ? ops.odd : ops.even) += uint32_t(a) << i;
  return ops;
}

constexpr uint32_t truncate_low_bits(uint32_t value, uint32_t count) {
  const uint32_t t = std::min<uint32_t>(count, 31);
  return t ? (value & ~((1u << t) - 1u)) : value;
}

constexpr bool final_stage_exact(uint32_t bit, uint32_t error_mask) {
  return bit >= kMulFirstControlledBit + kMulControllableBits ||
         ((error_mask >> (bit - kMulFirstControlledBit)) & 1u) != 0;
}

}  // namespace detail

/// 8x8 unsigned multiply. Product bits 0-3 are added exactly (their carry
/// feeds bit 4); bits 4-15 go through the 12-cell error-controllable ripple
/// stage. Carries stay exact everywhere, so no carry leaves bit 15.
constexpr uint16_t approx_mul8(uint8_t a, uint8_t b, MulConfig cfg = {}) {
  const detail::Mul8Operands ops = detail::mul8_operands(a, b);
  const uint32_t low = (ops.even & 0xFu) + (ops.odd & 0xFu);
  uint32_t product = low & 0xFu;
  uint32_t carry = (low >> 4) & 1u;
  for (uint32_t k = kMulFirstControlledBit; k < 16; ++k) {
    const FaMode mode = detail::final_stage_exact(k, cfg.error_mask) ? FaMode::Accurate
                                                                     : FaMode::Approximate;
    const FaResult fa = full_adder((ops.even >> k) & 1u, (ops.odd >> k) & 1u, carry, mode);
    product |= fa.sum << k;
    carry = fa.carry;
  }
  return uint16_t(detail::truncate_low_bits(product, cfg.truncation));
}

/// Per-position view of one 8x8 multiply: bit_error[k] is the signed
/// difference (approximate - exact) of the sum bit at product position 4+k.
/// Because carries are exact, the total deviation is exactly
/// sum(bit_error[k] * 2^(4+k)).
struct Mul8Probe {
  uint16_t value;
  std::array<int8_t, kMulControllableBits> bit_error;
};

constexpr Mul8Probe approx_mul8_probe(uint8_t a, uint8_t b, MulConfig cfg = {}) {
  const detail::Mul8Operands ops = detail::mul8_operands(a, b);
  const uint32_t low = (ops.even & 0xFu) + (ops.odd & 0xFu);
  Mul8Probe probe{uint16_t(low & 0xFu), {}};
  uint32_t product = low & 0xFu;
  uint32_t carry = (low >> 4) & 1u;
  for (uint32_t k = kMulFirstControlledBit; k < 16; ++k) {
    const uint32_t x = (ops.even >> k) & 1u;
    const uint32_t y = (ops.odd >> k) & 1u;
    const bool exact = detail::final_stage_exact(k, cfg.error_mask);
    const FaResult fa = full_adder(x, y, carry, exact ? FaMode::Accurate : FaMode::Approximate);
    if (k < kMulFirstControlledBit + kMulControllableBits) {
      const uint32_t exact_sum = x ^ y ^ carry;
      probe.bit_error[k - kMulFirstControlledBit] = int8_t(int32_t(fa.sum) - int32_t(exact_sum));
    }
    product |= fa.sum << k;
    carry = fa.carry;
  }
  probe.value = uint16_t(detail::truncate_low_bits(product, cfg.truncation));
  return probe;
}

/// 16x16 multiply as a schoolbook recombination of four 8x8 blocks; the
/// recombination additions are exact.
constexpr uint32_t approx_mul16(uint16_t a, uint16_t b, MulConfig cfg = {}) {
  const uint32_t ll = approx_mul8(uint8_t(a), uint8_t(b), cfg);
  const uint32_t lh = approx_mul8(uint8_t(a), uint8_t(b >> 8), cfg);
  const uint32_t hl = approx_mul8(uint8_t(a >> 8), uint8_t(b), cfg);
  const uint32_t hh = approx_mul8(uint8_t(a >> 8), uint8_t(b >> 8), cfg);
  return (hh << 16) + ((hl + lh) << 8) + ll;
}

/// 32x32 multiply built from four 16x16 units, exact recombination.
constexpr uint64_t approx_mul32(uint32_t a, uint32_t b, MulConfig cfg = {}) {
  const uint64_t ll = approx_mul16(uint16_t(a), uint16_t(b), cfg);
  const uint64_t lh = approx_mul16(uint16_t(a), uint16_t(b >> 16), cfg);
  const uint64_t hl = approx_mul16(uint16_t(a >> 16), uint16_t(b), cfg);
  const uint64_t hh = approx_mul16(uint16_t(a >> 16), uint16_t(b >> 16), cfg);
  return (hh << 32) + ((hl + lh) << 16) + ll;
}

/// Worst-case deviation bounds propagated through the recombination tree:
/// one 8x8 block sits at every byte-shift combination.
constexpr uint64_t mul16_error_bound(uint32_t error_mask) {
  const uint64_t b = mul8_error_bound(error_mask);
  return b * ((1ull << 0) + 2 * (1ull << 8) + (1ull << 16));
}

constexpr uint64_t mul32_error_bound(uint32_t error_mask) {
  const uint64_t b = mul16_error_bound(error_mask);
  return b * ((1ull << 0) + 2 * (1ull << 16) + (1ull << 32));
}

/// Signed multiply as a sign-magnitude wrapper around the unsigned array:
/// multiply magnitudes, negate the 64-bit product when the signs differ,
/// return the requested half.
constexpr uint32_t approx_mul32_signed(int32_t a, int32_t b, bool high_half, MulConfig cfg = {}) {
  const bool negative = (a < 0) != (b < 0);
  const uint32_t ua = a < 0 ? 0u - uint32_t(a) : uint32_t(a);
  const uint32_t ub = b < 0 ? 0u - uint32_t(b) : uint32_t(b);
  uint64_t product = approx_mul32(ua, ub, cfg);
  if (negative) product = 0ull - product;
  return high_half ? uint32_t(product >> 32) : uint32_t(product);
}

}  // namespace axrv
