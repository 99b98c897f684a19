#pragma once

#include <cstdint>

namespace axrv {

enum class DivOp : uint8_t { Div, Divu, Rem, Remu };

/// RISC-V M-extension division semantics. Divide-by-zero returns all-ones
/// quotient / dividend remainder; signed overflow (INT_MIN / -1) returns
/// INT_MIN with remainder 0. Total function, no traps.
constexpr uint32_t exact_div(uint32_t a, uint32_t b, DivOp op) {
  constexpr uint32_t kIntMin = 0x8000'0000u;
  switch (op) {
    case DivOp::Div: {
      if (b == 0) return 0xFFFF'FFFFu;
      if (a == kIntMin && b == 0xFFFF'FFFFu) return kIntMin;
      return uint32_t(int32_t(a) / int32_t(b));
    }
    case DivOp::Divu:
      return b == 0 ? 0xFFFF'FFFFu : a / b;
    case DivOp::Rem: {
      if (b == 0) return a;
      if (a == kIntMin && b == 0xFFFF'FFFFu) return 0;
      return uint32_t(int32_t(a) % int32_t(b));
    }
    case DivOp::Remu:
      return b == 0 ? a : a % b;
  }
  return 0;
}

}  // namespace axrv
