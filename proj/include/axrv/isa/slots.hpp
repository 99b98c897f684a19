#pragma once

#include <array>
#include <cstdint>

namespace axrv {

enum class SlotKind : uint8_t { Accurate = 0, Approximate = 1 };

enum class ExecUnit : uint8_t { Alu = 0, Mul = 1, Div = 2 };

constexpr const char* exec_unit_name(ExecUnit u) {
  switch (u) {
    case ExecUnit::Alu: return "ALU";
    case ExecUnit::Mul: return "MUL";
    case ExecUnit::Div: return "DIV";
  }
  return "?";
}

struct CircuitSlot {
  bool occupied = false;
  SlotKind kind = SlotKind::Accurate;
};

/// Four circuit sockets per execution unit. The default build hosts the
/// error-controllable carry-select adder in ALU slot 0, the exact 32-bit
/// multiplier in MUL slot 0 with the error-configurable hierarchical
/// multiplier in MUL slot 1, and the exact divider in DIV slot 0; all
/// remaining sockets are empty.
struct CircuitSlotTable {
  std::array<CircuitSlot, 4> alu{};
  std::array<CircuitSlot, 4> mul{};
  std::array<CircuitSlot, 4> div{};

  constexpr const std::array<CircuitSlot, 4>& unit(ExecUnit u) const {
    switch (u) {
      case ExecUnit::Mul: return mul;
      case ExecUnit::Div: return div;
      default: return alu;
    }
  }

  static constexpr CircuitSlotTable defaults() {
    CircuitSlotTable t;
    t.alu[0] = {true, SlotKind::Accurate};
    t.mul[0] = {true, SlotKind::Accurate};
    t.mul[1] = {true, SlotKind::Approximate};
    t.div[0] = {true, SlotKind::Accurate};
    return t;
  }
};

}  // namespace axrv
