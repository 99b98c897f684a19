#pragma once

#include <cstdint>

#include "axrv/arith/adder.hpp"
#include "axrv/arith/divider.hpp"
#include "axrv/arith/multiplier.hpp"
#include "axrv/isa/csr.hpp"
#include "axrv/isa/decode.hpp"
#include "axrv/isa/slots.hpp"

namespace axrv {

/// Result of one arithmetic instruction, with the unit/slot that produced
/// it. A non-null `fault` is a configuration fault (an empty circuit
/// socket was selected) and the value is meaningless.
struct ExecResult {
  uint32_t value = 0;
  ExecUnit unit = ExecUnit::Alu;
  uint8_t slot = 0;
  SlotKind slot_kind = SlotKind::Accurate;
  const char* fault = nullptr;
};

namespace detail {

constexpr ExecResult config_fault(ExecUnit unit, uint8_t slot) {
  ExecResult r;
  r.unit = unit;
  r.slot = slot;
  switch (unit) {
    case ExecUnit::Alu: r.fault = "alucsr selects an empty ALU circuit slot"; break;
    case ExecUnit::Mul: r.fault = "mulcsr selects an empty MUL circuit slot"; break;
    case ExecUnit::Div: r.fault = "divcsr selects an empty DIV circuit slot"; break;
  }
  return r;
}

}  // namespace detail

/// Execute one register/immediate arithmetic instruction. `operand2` is
/// the rs2 value for R-type ops and the decoded immediate (or shamt) for
/// I-type ops. Routing:
///   - add/addi/sub go through the ALU's carry-select adder with the error
///     lines from alucsr (all-exact when approximation is disabled);
///   - mul/mulh go to the MUL slot chosen by mulcsr (slot 0 when disabled),
///     mulhsu/mulhu always to the accurate slot 0;
///   - div/divu/rem/remu use the always-exact divider;
///   - logic/shift/compare ops are plain exact ALU operations.
inline ExecResult execute_arith(const DecodedInstr& in, uint32_t rs1_value, uint32_t operand2,
                                const CsrFile& csrs, const CircuitSlotTable& slots) {
  ExecResult r;
  const uint32_t a = rs1_value;
  const uint32_t b = operand2;

  switch (in.op) {
    case Mnemonic::Add:
    case Mnemonic::Addi:
    case Mnemonic::Sub: {
      // The ALU hosts one carry-select adder that covers both accurate and
      // approximate addition, so alucsr's circuit-select field plays no
      // role; only the enable bit and the error lines do.
      const ApproxControlWord aw = csrs.alu_control();
      if (!slots.alu[0].occupied) return detail::config_fault(ExecUnit::Alu, 0);
      const AdderConfig cfg = aw.enable ? aw.adder_config() : AdderConfig{};
      r.unit = ExecUnit::Alu;
      r.slot = 0;
      r.slot_kind = slots.alu[0].kind;
      r.value = in.op == Mnemonic::Sub ? csa32_sub(a, b, cfg).sum : csa32_add(a, b, 0, cfg).sum;
      return r;
    }

    case Mnemonic::Mul:
    case Mnemonic::Mulh: {
      const ApproxControlWord mw = csrs.mul_control();
      const uint8_t slot = mw.selected_slot();
      if (!slots.mul[slot].occupied) return detail::config_fault(ExecUnit::Mul, slot);
      r.unit = ExecUnit::Mul;
      r.slot = slot;
      r.slot_kind = slots.mul[slot].kind;
      const bool high = in.op == Mnemonic::Mulh;
      if (r.slot_kind == SlotKind::Approximate) {
        r.value = approx_mul32_signed(int32_t(a), int32_t(b), high, mw.mul_config());
      } else {
        const int64_t p = int64_t(int32_t(a)) * int64_t(int32_t(b));
        r.value = high ? uint32_t(uint64_t(p) >> 32) : uint32_t(uint64_t(p));
      }
      return r;
    }

    case Mnemonic::Mulhsu:
    case Mnemonic::Mulhu: {
      // Unsigned-high variants are pinned to the accurate slot.
      if (!slots.mul[0].occupied) return detail::config_fault(ExecUnit::Mul, 0);
      r.unit = ExecUnit::Mul;
      r.slot = 0;
      r.slot_kind = slots.mul[0].kind;
      if (in.op == Mnemonic::Mulhu) {
        r.value = uint32_t((uint64_t(a) * uint64_t(b)) >> 32);
      } else {
        const int64_t p = int64_t(int32_t(a)) * int64_t(uint64_t(b));
        r.value = uint32_t(uint64_t(p) >> 32);
      }
      return r;
    }

    case Mnemonic::Div:
    case Mnemonic::Divu:
    case Mnemonic::Rem:
    case Mnemonic::Remu: {
      const ApproxControlWord dw = csrs.div_control();
      const uint8_t slot = dw.selected_slot();
      if (!slots.div[slot].occupied) return detail::config_fault(ExecUnit::Div, slot);
      r.unit = ExecUnit::Div;
      r.slot = slot;
      r.slot_kind = slots.div[slot].kind;
      const DivOp op = in.op == Mnemonic::Div    ? DivOp::Div
                       : in.op == Mnemonic::Divu ? DivOp::Divu
                       : in.op == Mnemonic::Rem  ? DivOp::Rem
                                                 : DivOp::Remu;
      r.value = exact_div(a, b, op);
      return r;
    }

    case Mnemonic::Sll:
    case Mnemonic::Slli: r.value = a << (b & 0x1Fu); return r;
    case Mnemonic::Srl:
    case Mnemonic::Srli: r.value = a >> (b & 0x1Fu); return r;
    case Mnemonic::Sra:
    case Mnemonic::Srai: r.value = uint32_t(int32_t(a) >> (b & 0x1Fu)); return r;
    case Mnemonic::Slt:
    case Mnemonic::Slti: r.value = int32_t(a) < int32_t(b) ? 1u : 0u; return r;
    case Mnemonic::Sltu:
    case Mnemonic::Sltiu: r.value = a < b ? 1u : 0u; return r;
    case Mnemonic::Xor:
    case Mnemonic::Xori: r.value = a ^ b; return r;
    case Mnemonic::Or:
    case Mnemonic::Ori: r.value = a | b; return r;
    case Mnemonic::And:
    case Mnemonic::Andi: r.value = a & b; return r;

    default:
      r.fault = "execute_arith called with a non-arithmetic instruction";
      return r;
  }
}

}  // namespace axrv
