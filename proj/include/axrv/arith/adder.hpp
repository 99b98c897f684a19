#pragma once

#include <cstdint>

#include "axrv/arith/full_adder.hpp"

namespace axrv {

/// Per-bit error lines of the 32-bit adder. Bit i drives the full adder at
/// bit position i (1 = exact). Only bits 0-15 are wired to the control
/// register; positions 16-31 always operate exactly.
struct AdderConfig {
  uint32_t error_mask = 0xFFFF'FFFFu;
};

inline constexpr uint32_t kAdderControllableBits = 16;

struct AddResult {
  uint32_t sum;
  uint32_t carry_out;
};

/// 4-bit error-controllable ripple-carry block (one bit of `error_lines`
/// per adder cell, 1 = exact).
constexpr AddResult eca4_add(uint32_t x, uint32_t y, uint32_t cin, uint32_t error_lines) {
  uint32_t sum = 0;
  uint32_t carry = cin & 1u;
  for (uint32_t k = 0; k < 4; ++k) {
    const FaMode mode = ((error_lines >> k) & 1u) ? FaMode::Accurate : FaMode::Approximate;
    const FaResult fa = full_adder((x >> k) & 1u, (y >> k) & 1u, carry, mode);
    sum |= fa.sum << k;
    carry = fa.carry;
  }
  return {sum & 0xFu, carry};
}

/// 32-bit carry-select adder built from eight 4-bit ECA blocks. Block 0
/// ripples directly from the external carry-in; blocks 1-7 are evaluated for
/// both carry-in values and the incoming block carry selects the result.
/// Because the approximate cell keeps its carry exact, the output is
/// bit-identical to a flat 32-bit ripple of the same full adders.
constexpr AddResult csa32_add(uint32_t x, uint32_t y, uint32_t cin, AdderConfig cfg = {}) {
  const uint32_t lines = cfg.error_mask | ~((1u << kAdderControllableBits) - 1u);
  uint32_t sum = 0;
  uint32_t carry = cin & 1u;
  for (uint32_t block = 0; block < 8; ++block) {
    const uint32_t bx = (x >> (4 * block)) & 0xFu;
    const uint32_t by = (y >> (4 * block)) & 0xFu;
    const uint32_t bl = (lines >> (4 * block)) & 0xFu;
    AddResult r{};
    if (block == 0) {
      r = eca4_add(bx, by, carry, bl);
    } else {
      const AddResult r0 = eca4_add(bx, by, 0, bl);
      const AddResult r1 = eca4_add(bx, by, 1, bl);
      r = carry ? r1 : r0;
    }
    sum |= r.sum << (4 * block);
    carry = r.carry_out;
  }
  return {sum, carry};
}

/// Subtraction on the same circuit: x + ~y + 1.
constexpr AddResult csa32_sub(uint32_t x, uint32_t y, AdderConfig cfg = {}) {
  return csa32_add(x, ~y, 1, cfg);
}

}  // namespace axrv
