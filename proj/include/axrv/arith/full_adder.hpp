#pragma once

#include <cstdint>

namespace axrv {

/// Error line of a single full adder: high (1) selects the exact function.
enum class FaMode : uint8_t { Approximate = 0, Accurate = 1 };

struct FaResult {
  uint32_t sum;
  uint32_t carry;
};

// Truth table of the approximate sum output, indexed by (a<<2)|(b<<1)|cin.
// The carry output is always the exact majority function, so an approximate
// cell never disturbs the carry chain and its error stays confined to the
// cell's own bit weight.
//
// The shipped table realizes  sum = b ? (a & ~cin) : (a | cin)  and deviates
// from the exact sum on exactly four of the eight input rows, two low by one
// and two high by one:
//   (0,1,0) -> -1   (1,1,1) -> -1   (1,0,1) -> +1   (1,1,0) -> +1
//
// This constant is the single calibration point of the whole error model:
// with it, the exhaustive 8x8 multiplier sweep lands at ER 35.94% / MRED
// 0.227% for the near-accurate mask 0x7E. Swapping the table
// re-characterizes every approximate circuit built on top of it.
inline constexpr uint32_t kApproxSumTable = 0b0111'0010u;

constexpr FaResult full_adder(uint32_t a, uint32_t b, uint32_t cin, FaMode mode) {
  const uint32_t carry = (a & b) | (a & cin) | (b & cin);
  const uint32_t sum = mode == FaMode::Accurate
                           ? (a ^ b ^ cin)
                           : ((kApproxSumTable >> ((a << 2) | (b << 1) | cin)) & 1u);
  return {sum, carry};
}

}  // namespace axrv
