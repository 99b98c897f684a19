#pragma once

#include <cstdint>

#include "axrv/isa/slots.hpp"

namespace axrv {

/// Cost-model unit names. The three execution-stage units are joined by
/// the front end (IF/ID), the memory/write-back stage, and a catch-all for
/// everything else in the inner core.
enum class EnergyUnit : uint8_t { Mul = 0, Alu = 1, Div = 2, IfId = 3, MemWb = 4, Other = 5 };

inline constexpr unsigned kEnergyUnitCount = 6;

constexpr const char* energy_unit_name(EnergyUnit u) {
  switch (u) {
    case EnergyUnit::Mul: return "MUL";
    case EnergyUnit::Alu: return "ALU";
    case EnergyUnit::Div: return "DIV";
    case EnergyUnit::IfId: return "IFID";
    case EnergyUnit::MemWb: return "MEMWB";
    case EnergyUnit::Other: return "other";
  }
  return "?";
}

enum class OpClass : uint8_t {
  Add, Logic, Shift, Compare, Mul, Mulh, Div, Load, Store, Branch, Jump, Csr, Other
};

constexpr const char* op_class_name(OpClass c) {
  switch (c) {
    case OpClass::Add: return "add";
    case OpClass::Logic: return "logic";
    case OpClass::Shift: return "shift";
    case OpClass::Compare: return "compare";
    case OpClass::Mul: return "mul";
    case OpClass::Mulh: return "mulh";
    case OpClass::Div: return "div";
    case OpClass::Load: return "load";
    case OpClass::Store: return "store";
    case OpClass::Branch: return "branch";
    case OpClass::Jump: return "jump";
    case OpClass::Csr: return "csr";
    case OpClass::Other: return "other";
  }
  return "?";
}

/// One retired instruction as seen by the energy model: which unit did
/// the work, the slot each execution unit has selected at this instant
/// (for leakage/gating), and the multiplier error mask in force (for
/// mask-scaled per-op energy).
struct EnergyEvent {
  OpClass op_class = OpClass::Other;
  EnergyUnit exe_unit = EnergyUnit::Other;
  uint8_t exe_slot = 0;
  SlotKind exe_kind = SlotKind::Accurate;
  uint8_t alu_slot = 0;
  SlotKind alu_kind = SlotKind::Accurate;
  uint8_t mul_slot = 0;
  SlotKind mul_kind = SlotKind::Accurate;
  uint8_t div_slot = 0;
  SlotKind div_kind = SlotKind::Accurate;
  uint32_t cycles = 1;
  uint8_t mul_error_mask = 0x7F;
};

class EnergySink {
 public:
  virtual ~EnergySink() = default;
  virtual void accrue(const EnergyEvent& event) = 0;
};

}  // namespace axrv
