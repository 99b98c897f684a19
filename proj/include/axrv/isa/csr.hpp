#pragma once

#include <cstdint>

#include "axrv/arith/adder.hpp"
#include "axrv/arith/multiplier.hpp"
#include "axrv/isa/decode.hpp"

namespace axrv {

/// Decoded view of one 32-bit approximation-control CSR.
///   bit 0      enable (1 = approximate arithmetic allowed)
///   bits 2:1   circuit select (execution-unit slot 0-3)
///   bits 7:3   dynamic truncation count
///   bits 11:8  custom field A (stored, drives no logic)
///   bits 15:12 custom field B (stored, drives no logic)
///   bits 31:16 error-control lines for error-configurable circuits
struct ApproxControlWord {
  bool enable = false;
  uint8_t circuit_select = 0;
  uint8_t truncation = 0;
  uint8_t custom_a = 0;
  uint8_t custom_b = 0;
  uint16_t error_field = 0;

  static constexpr ApproxControlWord decode(uint32_t raw) {
    ApproxControlWord w;
    w.enable = (raw & 1u) != 0;
    w.circuit_select = uint8_t((raw >> 1) & 0x3u);
    w.truncation = uint8_t((raw >> 3) & 0x1Fu);
    w.custom_a = uint8_t((raw >> 8) & 0xFu);
    w.custom_b = uint8_t((raw >> 12) & 0xFu);
    w.error_field = uint16_t(raw >> 16);
    return w;
  }

  constexpr uint32_t encode() const {
    return uint32_t(enable ? 1u : 0u) | (uint32_t(circuit_select & 0x3u) << 1) |
           (uint32_t(truncation & 0x1Fu) << 3) | (uint32_t(custom_a & 0xFu) << 8) |
           (uint32_t(custom_b & 0xFu) << 12) | (uint32_t(error_field) << 16);
  }

  /// Multiplier view: the low 7 error-field bits drive the final-stage
  /// lines of the 8x8 blocks.
  constexpr MulConfig mul_config() const {
    return MulConfig{uint32_t(error_field) & 0x7Fu, truncation};
  }

  /// Adder view: all 16 error-field bits drive adder positions 0-15.
  constexpr AdderConfig adder_config() const { return AdderConfig{uint32_t(error_field)}; }

  /// Slot chosen by this word: slot 0 unless approximation is enabled.
  constexpr uint8_t selected_slot() const { return enable ? circuit_select : 0; }
};

/// The machine's CSR space: three approximation-control registers plus the
/// standard read-only cycle/instret counters (whose live values belong to
/// the machine and are passed in at read time).
class CsrFile {
 public:
  static constexpr uint16_t kAluCsr = 0x800;
  static constexpr uint16_t kMulCsr = 0x801;
  static constexpr uint16_t kDivCsr = 0x802;
  static constexpr uint16_t kCycle = 0xC00;
  static constexpr uint16_t kInstret = 0xC02;
  static constexpr uint16_t kCycleH = 0xC80;
  static constexpr uint16_t kInstretH = 0xC82;

  uint32_t alucsr = 0;
  uint32_t mulcsr = 0;
  uint32_t divcsr = 0;

  static constexpr bool is_implemented(uint16_t addr) {
    switch (addr) {
      case kAluCsr: case kMulCsr: case kDivCsr:
      case kCycle: case kInstret: case kCycleH: case kInstretH:
        return true;
      default:
        return false;
    }
  }

  static constexpr bool is_read_only(uint16_t addr) {
    return addr == kCycle || addr == kInstret || addr == kCycleH || addr == kInstretH;
  }

  constexpr uint32_t read(uint16_t addr, uint64_t cycle, uint64_t instret) const {
    switch (addr) {
      case kAluCsr: return alucsr;
      case kMulCsr: return mulcsr;
      case kDivCsr: return divcsr;
      case kCycle: return uint32_t(cycle);
      case kCycleH: return uint32_t(cycle >> 32);
      case kInstret: return uint32_t(instret);
      case kInstretH: return uint32_t(instret >> 32);
      default: return 0;
    }
  }

  constexpr bool write(uint16_t addr, uint32_t value) {
    switch (addr) {
      case kAluCsr: alucsr = value; return true;
      case kMulCsr: mulcsr = value; return true;
      case kDivCsr: divcsr = value; return true;
      default: return false;
    }
  }

  constexpr ApproxControlWord alu_control() const { return ApproxControlWord::decode(alucsr); }
  constexpr ApproxControlWord mul_control() const { return ApproxControlWord::decode(mulcsr); }
  constexpr ApproxControlWord div_control() const { return ApproxControlWord::decode(divcsr); }
};

struct CsrAccess {
  uint32_t old_value = 0;
  bool trap = false;
};

/// Read-modify-write CSR access. `writes` is false for csrrs/csrrc (and
/// immediate variants) whose operand source is x0/zimm 0, which read
/// without writing; csrrw/csrrwi always write. Writing a read-only or
/// touching an unimplemented CSR traps.
constexpr CsrAccess csr_access(CsrFile& file, Mnemonic op, uint16_t addr, uint32_t operand,
                               bool writes, uint64_t cycle, uint64_t instret) {
  if (!CsrFile::is_implemented(addr)) return {0, true};
  const uint32_t old = file.read(addr, cycle, instret);
  if (!writes) return {old, false};
  if (CsrFile::is_read_only(addr)) return {old, true};
  uint32_t next = old;
  switch (op) {
    case Mnemonic::Csrrw:
    case Mnemonic::Csrrwi: next = operand; break;
    case Mnemonic::Csrrs:
    case Mnemonic::Csrrsi: next = old | operand; break;
    case Mnemonic::Csrrc:
    case Mnemonic::Csrrci: next = old & ~operand; break;
    default: return {old, true};
  }
  file.write(addr, next);
  return {old, false};
}

}  // namespace axrv
