#pragma once

#include <cstdint>
#include <span>

#include "axrv/isa/decode.hpp"

namespace axrv {

// Published reference points for compiled workloads (GCC-dependent);
// generated kernels are not expected to match them.
inline constexpr double kReferenceMulShareOfArithPercent = 6.47;
inline constexpr uint64_t kReferenceAvgInstructionCount = 221'992;
inline constexpr uint64_t kReferenceAvgMulCount = 242;

/// Retirement counts folded into the reporting classes. `mulh` covers all
/// three high-half variants; `branch` covers conditional branches and
/// jumps (control transfers).
struct InstructionMix {
  uint64_t add_class = 0;
  uint64_t mul = 0;
  uint64_t mulh = 0;
  uint64_t div_class = 0;
  uint64_t load = 0;
  uint64_t store = 0;
  uint64_t branch = 0;
  uint64_t other = 0;

  uint64_t total() const {
    return add_class + mul + mulh + div_class + load + store + branch + other;
  }
  uint64_t arithmetic() const { return add_class + mul + mulh + div_class; }
  double mul_share_of_arith_percent() const {
    const uint64_t a = arithmetic();
    return a ? 100.0 * double(mul + mulh) / double(a) : 0.0;
  }
};

/// Fold per-mnemonic retirement counts (indexed by Mnemonic) into classes.
inline InstructionMix instruction_mix(std::span<const uint64_t> retired_counts) {
  InstructionMix mix;
  for (unsigned i = 0; i < retired_counts.size() && i < kMnemonicCount; ++i) {
    const uint64_t n = retired_counts[i];
    if (n == 0) continue;
    switch (Mnemonic(i)) {
      case Mnemonic::Add: case Mnemonic::Addi: case Mnemonic::Sub:
        mix.add_class += n; break;
      case Mnemonic::Mul:
        mix.mul += n; break;
      case Mnemonic::Mulh: case Mnemonic::Mulhsu: case Mnemonic::Mulhu:
        mix.mulh += n; break;
      case Mnemonic::Div: case Mnemonic::Divu: case Mnemonic::Rem: case Mnemonic::Remu:
        mix.div_class += n; break;
      case Mnemonic::Lb: case Mnemonic::Lh: case Mnemonic::Lw:
      case Mnemonic::Lbu: case Mnemonic::Lhu:
        mix.load += n; break;
      case Mnemonic::Sb: case Mnemonic::Sh: case Mnemonic::Sw:
        mix.store += n; break;
      case Mnemonic::Beq: case Mnemonic::Bne: case Mnemonic::Blt: case Mnemonic::Bge:
      case Mnemonic::Bltu: case Mnemonic::Bgeu: case Mnemonic::Jal: case Mnemonic::Jalr:
        mix.branch += n; break;
      default:
        mix.other += n; break;
    }
  }
  return mix;
}

}  // namespace axrv
