#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "axrv/isa/decode.hpp"

namespace axrv::enc {

inline constexpr unsigned kRegCount = 16;  // RV32E operand range

namespace detail {

inline uint32_t reg(unsigned r) {
  if (r >= kRegCount) throw std::out_of_range("encode: register outside the RV32E file");
  return r;
}

inline int32_t imm12(int32_t v) {
  if (v < -2048 || v > 2047) throw std::out_of_range("encode: immediate outside 12-bit signed range");
  return v;
}

inline uint32_t shamt(int32_t v) {
  if (v < 0 || v > 31) throw std::out_of_range("encode: shift amount outside 0-31");
  return uint32_t(v);
}

inline uint32_t imm20(uint32_t v) {
  if (v > 0xFFFFFu) throw std::out_of_range("encode: upper immediate outside 20 bits");
  return v;
}

inline uint32_t csr_addr(int32_t v) {
  if (v < 0 || v > 0xFFF) throw std::out_of_range("encode: CSR address outside 12 bits");
  return uint32_t(v);
}

inline uint32_t zimm(unsigned v) {
  if (v > 31) throw std::out_of_range("encode: CSR immediate outside 5 bits");
  return v;
}

}  // namespace detail

// Raw format composers. Field widths only; no operand-range policy, so
// tests can build words outside the RV32E range.
constexpr uint32_t raw_r(uint32_t funct7, uint32_t rs2, uint32_t rs1, uint32_t funct3, uint32_t rd,
                         uint32_t opcode) {
  return funct7 << 25 | (rs2 & 0x1F) << 20 | (rs1 & 0x1F) << 15 | funct3 << 12 | (rd & 0x1F) << 7 |
         opcode;
}

constexpr uint32_t raw_i(int32_t imm, uint32_t rs1, uint32_t funct3, uint32_t rd, uint32_t opcode) {
  return uint32_t(imm & 0xFFF) << 20 | (rs1 & 0x1F) << 15 | funct3 << 12 | (rd & 0x1F) << 7 |
         opcode;
}

constexpr uint32_t raw_s(int32_t imm, uint32_t rs2, uint32_t rs1, uint32_t funct3, uint32_t opcode) {
  return uint32_t((imm >> 5) & 0x7F) << 25 | (rs2 & 0x1F) << 20 | (rs1 & 0x1F) << 15 |
         funct3 << 12 | uint32_t(imm & 0x1F) << 7 | opcode;
}

constexpr uint32_t raw_b(int32_t off, uint32_t rs2, uint32_t rs1, uint32_t funct3, uint32_t opcode) {
  return uint32_t((off >> 12) & 1) << 31 | uint32_t((off >> 5) & 0x3F) << 25 |
         (rs2 & 0x1F) << 20 | (rs1 & 0x1F) << 15 | funct3 << 12 | uint32_t((off >> 1) & 0xF) << 8 |
         uint32_t((off >> 11) & 1) << 7 | opcode;
}

constexpr uint32_t raw_u(uint32_t imm20, uint32_t rd, uint32_t opcode) {
  return imm20 << 12 | (rd & 0x1F) << 7 | opcode;
}

constexpr uint32_t raw_j(int32_t off, uint32_t rd, uint32_t opcode) {
  return uint32_t((off >> 20) & 1) << 31 | uint32_t((off >> 1) & 0x3FF) << 21 |
         uint32_t((off >> 11) & 1) << 20 | uint32_t((off >> 12) & 0xFF) << 12 | (rd & 0x1F) << 7 |
         opcode;
}

namespace detail {

inline int32_t branch_offset(int32_t off) {
  if (off % 2 != 0 || off < -4096 || off > 4094)
    throw std::out_of_range("encode: branch offset out of range");
  return off;
}

inline int32_t jump_offset(int32_t off) {
  if (off % 2 != 0 || off < -(1 << 20) || off > (1 << 20) - 2)
    throw std::out_of_range("encode: jump offset out of range");
  return off;
}

}  // namespace detail

// R-type
inline uint32_t add(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x00, detail::reg(rs2), detail::reg(rs1), 0, detail::reg(rd), 0x33); }
inline uint32_t sub(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x20, detail::reg(rs2), detail::reg(rs1), 0, detail::reg(rd), 0x33); }
inline uint32_t sll(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x00, detail::reg(rs2), detail::reg(rs1), 1, detail::reg(rd), 0x33); }
inline uint32_t slt(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x00, detail::reg(rs2), detail::reg(rs1), 2, detail::reg(rd), 0x33); }
inline uint32_t sltu(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x00, detail::reg(rs2), detail::reg(rs1), 3, detail::reg(rd), 0x33); }
inline uint32_t xor_(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x00, detail::reg(rs2), detail::reg(rs1), 4, detail::reg(rd), 0x33); }
inline uint32_t srl(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x00, detail::reg(rs2), detail::reg(rs1), 5, detail::reg(rd), 0x33); }
inline uint32_t sra(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x20, detail::reg(rs2), detail::reg(rs1), 5, detail::reg(rd), 0x33); }
inline uint32_t or_(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x00, detail::reg(rs2), detail::reg(rs1), 6, detail::reg(rd), 0x33); }
inline uint32_t and_(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x00, detail::reg(rs2), detail::reg(rs1), 7, detail::reg(rd), 0x33); }

// M extension
inline uint32_t mul(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x01, detail::reg(rs2), detail::reg(rs1), 0, detail::reg(rd), 0x33); }
inline uint32_t mulh(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x01, detail::reg(rs2), detail::reg(rs1), 1, detail::reg(rd), 0x33); }
inline uint32_t mulhsu(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x01, detail::reg(rs2), detail::reg(rs1), 2, detail::reg(rd), 0x33); }
inline uint32_t mulhu(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x01, detail::reg(rs2), detail::reg(rs1), 3, detail::reg(rd), 0x33); }
inline uint32_t div_(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x01, detail::reg(rs2), detail::reg(rs1), 4, detail::reg(rd), 0x33); }
inline uint32_t divu(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x01, detail::reg(rs2), detail::reg(rs1), 5, detail::reg(rd), 0x33); }
inline uint32_t rem(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x01, detail::reg(rs2), detail::reg(rs1), 6, detail::reg(rd), 0x33); }
inline uint32_t remu(unsigned rd, unsigned rs1, unsigned rs2) { return raw_r(0x01, detail::reg(rs2), detail::reg(rs1), 7, detail::reg(rd), 0x33); }

// I-type
inline uint32_t addi(unsigned rd, unsigned rs1, int32_t imm) { return raw_i(detail::imm12(imm), detail::reg(rs1), 0, detail::reg(rd), 0x13); }
inline uint32_t slti(unsigned rd, unsigned rs1, int32_t imm) { return raw_i(detail::imm12(imm), detail::reg(rs1), 2, detail::reg(rd), 0x13); }
inline uint32_t sltiu(unsigned rd, unsigned rs1, int32_t imm) { return raw_i(detail::imm12(imm), detail::reg(rs1), 3, detail::reg(rd), 0x13); }
inline uint32_t xori(unsigned rd, unsigned rs1, int32_t imm) { return raw_i(detail::imm12(imm), detail::reg(rs1), 4, detail::reg(rd), 0x13); }
inline uint32_t ori(unsigned rd, unsigned rs1, int32_t imm) { return raw_i(detail::imm12(imm), detail::reg(rs1), 6, detail::reg(rd), 0x13); }
inline uint32_t andi(unsigned rd, unsigned rs1, int32_t imm) { return raw_i(detail::imm12(imm), detail::reg(rs1), 7, detail::reg(rd), 0x13); }
inline uint32_t slli(unsigned rd, unsigned rs1, int32_t sh) { return raw_i(int32_t(detail::shamt(sh)), detail::reg(rs1), 1, detail::reg(rd), 0x13); }
inline uint32_t srli(unsigned rd, unsigned rs1, int32_t sh) { return raw_i(int32_t(detail::shamt(sh)), detail::reg(rs1), 5, detail::reg(rd), 0x13); }
inline uint32_t srai(unsigned rd, unsigned rs1, int32_t sh) { return raw_i(int32_t(detail::shamt(sh)) | 0x400, detail::reg(rs1), 5, detail::reg(rd), 0x13); }
inline uint32_t jalr(unsigned rd, unsigned rs1, int32_t imm) { return raw_i(detail::imm12(imm), detail::reg(rs1), 0, detail::reg(rd), 0x67); }

// loads/stores
inline uint32_t lb(unsigned rd, unsigned rs1, int32_t imm) { return raw_i(detail::imm12(imm), detail::reg(rs1), 0, detail::reg(rd), 0x03); }
inline uint32_t lh(unsigned rd, unsigned rs1, int32_t imm) { return raw_i(detail::imm12(imm), detail::reg(rs1), 1, detail::reg(rd), 0x03); }
inline uint32_t lw(unsigned rd, unsigned rs1, int32_t imm) { return raw_i(detail::imm12(imm), detail::reg(rs1), 2, detail::reg(rd), 0x03); }
inline uint32_t lbu(unsigned rd, unsigned rs1, int32_t imm) { return raw_i(detail::imm12(imm), detail::reg(rs1), 4, detail::reg(rd), 0x03); }
inline uint32_t lhu(unsigned rd, unsigned rs1, int32_t imm) { return raw_i(detail::imm12(imm), detail::reg(rs1), 5, detail::reg(rd), 0x03); }
inline uint32_t sb(unsigned rs2, unsigned rs1, int32_t imm) { return raw_s(detail::imm12(imm), detail::reg(rs2), detail::reg(rs1), 0, 0x23); }
inline uint32_t sh(unsigned rs2, unsigned rs1, int32_t imm) { return raw_s(detail::imm12(imm), detail::reg(rs2), detail::reg(rs1), 1, 0x23); }
inline uint32_t sw(unsigned rs2, unsigned rs1, int32_t imm) { return raw_s(detail::imm12(imm), detail::reg(rs2), detail::reg(rs1), 2, 0x23); }

// branches (byte offset from the branch instruction)
inline uint32_t beq(unsigned rs1, unsigned rs2, int32_t off) { return raw_b(detail::branch_offset(off), detail::reg(rs2), detail::reg(rs1), 0, 0x63); }
inline uint32_t bne(unsigned rs1, unsigned rs2, int32_t off) { return raw_b(detail::branch_offset(off), detail::reg(rs2), detail::reg(rs1), 1, 0x63); }
inline uint32_t blt(unsigned rs1, unsigned rs2, int32_t off) { return raw_b(detail::branch_offset(off), detail::reg(rs2), detail::reg(rs1), 4, 0x63); }
inline uint32_t bge(unsigned rs1, unsigned rs2, int32_t off) { return raw_b(detail::branch_offset(off), detail::reg(rs2), detail::reg(rs1), 5, 0x63); }
inline uint32_t bltu(unsigned rs1, unsigned rs2, int32_t off) { return raw_b(detail::branch_offset(off), detail::reg(rs2), detail::reg(rs1), 6, 0x63); }
inline uint32_t bgeu(unsigned rs1, unsigned rs2, int32_t off) { return raw_b(detail::branch_offset(off), detail::reg(rs2), detail::reg(rs1), 7, 0x63); }

// upper-immediate / jumps
inline uint32_t lui(unsigned rd, uint32_t imm20) { return raw_u(detail::imm20(imm20), detail::reg(rd), 0x37); }
inline uint32_t auipc(unsigned rd, uint32_t imm20) { return raw_u(detail::imm20(imm20), detail::reg(rd), 0x17); }
inline uint32_t jal(unsigned rd, int32_t off) { return raw_j(detail::jump_offset(off), detail::reg(rd), 0x6F); }

// system
inline uint32_t fence() { return raw_i(0, 0, 0, 0, 0x0F); }
inline uint32_t ecall() { return 0x0000'0073u; }
inline uint32_t ebreak() { return 0x0010'0073u; }
inline uint32_t csrrw(unsigned rd, int32_t csr, unsigned rs1) { return raw_i(int32_t(detail::csr_addr(csr)), detail::reg(rs1), 1, detail::reg(rd), 0x73); }
inline uint32_t csrrs(unsigned rd, int32_t csr, unsigned rs1) { return raw_i(int32_t(detail::csr_addr(csr)), detail::reg(rs1), 2, detail::reg(rd), 0x73); }
inline uint32_t csrrc(unsigned rd, int32_t csr, unsigned rs1) { return raw_i(int32_t(detail::csr_addr(csr)), detail::reg(rs1), 3, detail::reg(rd), 0x73); }
inline uint32_t csrrwi(unsigned rd, int32_t csr, unsigned z) { return raw_i(int32_t(detail::csr_addr(csr)), detail::zimm(z), 5, detail::reg(rd), 0x73); }
inline uint32_t csrrsi(unsigned rd, int32_t csr, unsigned z) { return raw_i(int32_t(detail::csr_addr(csr)), detail::zimm(z), 6, detail::reg(rd), 0x73); }
inline uint32_t csrrci(unsigned rd, int32_t csr, unsigned z) { return raw_i(int32_t(detail::csr_addr(csr)), detail::zimm(z), 7, detail::reg(rd), 0x73); }

struct Operands {
  unsigned rd = 0;
  unsigned rs1 = 0;
  unsigned rs2 = 0;
  int32_t imm = 0;  // immediate / byte offset / CSR address (with rs1 as zimm)
};

/// Generic encoder by mnemonic; operand roles follow the instruction format.
inline uint32_t encode(Mnemonic m, const Operands& o) {
  switch (m) {
    case Mnemonic::Lui: return lui(o.rd, uint32_t(o.imm));
    case Mnemonic::Auipc: return auipc(o.rd, uint32_t(o.imm));
    case Mnemonic::Jal: return jal(o.rd, o.imm);
    case Mnemonic::Jalr: return jalr(o.rd, o.rs1, o.imm);
    case Mnemonic::Beq: return beq(o.rs1, o.rs2, o.imm);
    case Mnemonic::Bne: return bne(o.rs1, o.rs2, o.imm);
    case Mnemonic::Blt: return blt(o.rs1, o.rs2, o.imm);
    case Mnemonic::Bge: return bge(o.rs1, o.rs2, o.imm);
    case Mnemonic::Bltu: return bltu(o.rs1, o.rs2, o.imm);
    case Mnemonic::Bgeu: return bgeu(o.rs1, o.rs2, o.imm);
    case Mnemonic::Lb: return lb(o.rd, o.rs1, o.imm);
    case Mnemonic::Lh: return lh(o.rd, o.rs1, o.imm);
    case Mnemonic::Lw: return lw(o.rd, o.rs1, o.imm);
    case Mnemonic::Lbu: return lbu(o.rd, o.rs1, o.imm);
    case Mnemonic::Lhu: return lhu(o.rd, o.rs1, o.imm);
    case Mnemonic::Sb: return sb(o.rs2, o.rs1, o.imm);
    case Mnemonic::Sh: return sh(o.rs2, o.rs1, o.imm);
    case Mnemonic::Sw: return sw(o.rs2, o.rs1, o.imm);
    case Mnemonic::Addi: return addi(o.rd, o.rs1, o.imm);
    case Mnemonic::Slti: return slti(o.rd, o.rs1, o.imm);
    case Mnemonic::Sltiu: return sltiu(o.rd, o.rs1, o.imm);
    case Mnemonic::Xori: return xori(o.rd, o.rs1, o.imm);
    case Mnemonic::Ori: return ori(o.rd, o.rs1, o.imm);
    case Mnemonic::Andi: return andi(o.rd, o.rs1, o.imm);
    case Mnemonic::Slli: return slli(o.rd, o.rs1, o.imm);
    case Mnemonic::Srli: return srli(o.rd, o.rs1, o.imm);
    case Mnemonic::Srai: return srai(o.rd, o.rs1, o.imm);
    case Mnemonic::Add: return add(o.rd, o.rs1, o.rs2);
    case Mnemonic::Sub: return sub(o.rd, o.rs1, o.rs2);
    case Mnemonic::Sll: return sll(o.rd, o.rs1, o.rs2);
    case Mnemonic::Slt: return slt(o.rd, o.rs1, o.rs2);
    case Mnemonic::Sltu: return sltu(o.rd, o.rs1, o.rs2);
    case Mnemonic::Xor: return xor_(o.rd, o.rs1, o.rs2);
    case Mnemonic::Srl: return srl(o.rd, o.rs1, o.rs2);
    case Mnemonic::Sra: return sra(o.rd, o.rs1, o.rs2);
    case Mnemonic::Or: return or_(o.rd, o.rs1, o.rs2);
    case Mnemonic::And: return and_(o.rd, o.rs1, o.rs2);
    case Mnemonic::Fence: return fence();
    case Mnemonic::Ecall: return ecall();
    case Mnemonic::Ebreak: return ebreak();
    case Mnemonic::Csrrw: return csrrw(o.rd, o.imm, o.rs1);
    case Mnemonic::Csrrs: return csrrs(o.rd, o.imm, o.rs1);
    case Mnemonic::Csrrc: return csrrc(o.rd, o.imm, o.rs1);
    case Mnemonic::Csrrwi: return csrrwi(o.rd, o.imm, o.rs1);
    case Mnemonic::Csrrsi: return csrrsi(o.rd, o.imm, o.rs1);
    case Mnemonic::Csrrci: return csrrci(o.rd, o.imm, o.rs1);
    case Mnemonic::Mul: return mul(o.rd, o.rs1, o.rs2);
    case Mnemonic::Mulh: return mulh(o.rd, o.rs1, o.rs2);
    case Mnemonic::Mulhsu: return mulhsu(o.rd, o.rs1, o.rs2);
    case Mnemonic::Mulhu: return mulhu(o.rd, o.rs1, o.rs2);
    case Mnemonic::Div: return div_(o.rd, o.rs1, o.rs2);
    case Mnemonic::Divu: return divu(o.rd, o.rs1, o.rs2);
    case Mnemonic::Rem: return rem(o.rd, o.rs1, o.rs2);
    case Mnemonic::Remu: return remu(o.rd, o.rs1, o.rs2);
    case Mnemonic::Illegal: break;
  }
  throw std::invalid_argument("encode: no encoding for mnemonic");
}

}  // namespace axrv::enc

namespace axrv {

/// Minimal program builder: append encoded words, take branch/jump targets
/// as absolute word indices, and patch forward references. Not a general
/// assembler — no labels or relocations.
class Assembler {
 public:
  explicit Assembler(uint32_t base = 0) : base_(base) {}

  size_t here() const { return words_.size(); }
  uint32_t address_of(size_t index) const { return base_ + uint32_t(index * 4); }

  void emit(uint32_t word) { words_.push_back(word); }

  size_t reserve() {
    words_.push_back(0);
    return words_.size() - 1;
  }
  void patch(size_t index, uint32_t word) { words_.at(index) = word; }

  int32_t byte_offset(size_t from, size_t target) const {
    return (int32_t(target) - int32_t(from)) * 4;
  }

  void branch(Mnemonic cond, unsigned rs1, unsigned rs2, size_t target) {
    emit(branch_word(cond, rs1, rs2, byte_offset(here(), target)));
  }
  void patch_branch(size_t at, Mnemonic cond, unsigned rs1, unsigned rs2, size_t target) {
    patch(at, branch_word(cond, rs1, rs2, byte_offset(at, target)));
  }
  void jump(unsigned rd, size_t target) { emit(enc::jal(rd, byte_offset(here(), target))); }

  /// Load an arbitrary 32-bit constant (one or two instructions).
  void li32(unsigned rd, uint32_t value) {
    const int32_t sv = int32_t(value);
    if (sv >= -2048 && sv <= 2047) {
      emit(enc::addi(rd, 0, sv));
      return;
    }
    const uint32_t lo_bits = value & 0xFFFu;
    const int32_t lo = lo_bits >= 0x800u ? int32_t(lo_bits) - 0x1000 : int32_t(lo_bits);
    const uint32_t hi = ((value - uint32_t(lo)) >> 12) & 0xFFFFFu;
    emit(enc::lui(rd, hi));
    if (lo != 0) emit(enc::addi(rd, rd, lo));
  }

  const std::vector<uint32_t>& words() const { return words_; }

 private:
  static uint32_t branch_word(Mnemonic cond, unsigned rs1, unsigned rs2, int32_t off) {
    switch (cond) {
      case Mnemonic::Beq: return enc::beq(rs1, rs2, off);
      case Mnemonic::Bne: return enc::bne(rs1, rs2, off);
      case Mnemonic::Blt: return enc::blt(rs1, rs2, off);
      case Mnemonic::Bge: return enc::bge(rs1, rs2, off);
      case Mnemonic::Bltu: return enc::bltu(rs1, rs2, off);
      case Mnemonic::Bgeu: return enc::bgeu(rs1, rs2, off);
      default: throw std::invalid_argument("assembler: not a branch mnemonic");
    }
  }

  uint32_t base_;
  std::vector<uint32_t> words_;
};

}  // namespace axrv
