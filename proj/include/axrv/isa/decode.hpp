#pragma once

#include <cstdint>

namespace axrv {

enum class Mnemonic : uint8_t {
  Lui, Auipc, Jal, Jalr,
  Beq, Bne, Blt, Bge, Bltu, Bgeu,
  Lb, Lh, Lw, Lbu, Lhu,
  Sb, Sh, Sw,
  Addi, Slti, Sltiu, Xori, Ori, Andi, Slli, Srli, Srai,
  Add, Sub, Sll, Slt, Sltu, Xor, Srl, Sra, Or, And,
  Fence, Ecall, Ebreak,
  Csrrw, Csrrs, Csrrc, Csrrwi, Csrrsi, Csrrci,
  Mul, Mulh, Mulhsu, Mulhu, Div, Divu, Rem, Remu,
  Illegal,
};

inline constexpr unsigned kMnemonicCount = unsigned(Mnemonic::Illegal) + 1;

enum class InstrClass : uint8_t { R, I, S, B, U, J, System, None };

constexpr const char* mnemonic_name(Mnemonic m) {
  switch (m) {
    case Mnemonic::Lui: return "lui";
    case Mnemonic::Auipc: return "auipc";
    case Mnemonic::Jal: return "jal";
    case Mnemonic::Jalr: return "jalr";
    case Mnemonic::Beq: return "beq";
    case Mnemonic::Bne: return "bne";
    case Mnemonic::Blt: return "blt";
    case Mnemonic::Bge: return "bge";
    case Mnemonic::Bltu: return "bltu";
    case Mnemonic::Bgeu: return "bgeu";
    case Mnemonic::Lb: return "lb";
    case Mnemonic::Lh: return "lh";
    case Mnemonic::Lw: return "lw";
    case Mnemonic::Lbu: return "lbu";
    case Mnemonic::Lhu: return "lhu";
    case Mnemonic::Sb: return "sb";
    case Mnemonic::Sh: return "sh";
    case Mnemonic::Sw: return "sw";
    case Mnemonic::Addi: return "addi";
    case Mnemonic::Slti: return "slti";
    case Mnemonic::Sltiu: return "sltiu";
    case Mnemonic::Xori: return "xori";
    case Mnemonic::Ori: return "ori";
    case Mnemonic::Andi: return "andi";
    case Mnemonic::Slli: return "slli";
    case Mnemonic::Srli: return "srli";
    case Mnemonic::Srai: return "srai";
    case Mnemonic::Add: return "add";
    case Mnemonic::Sub: return "sub";
    case Mnemonic::Sll: return "sll";
    case Mnemonic::Slt: return "slt";
    case Mnemonic::Sltu: return "sltu";
    case Mnemonic::Xor: return "xor";
    case Mnemonic::Srl: return "srl";
    case Mnemonic::Sra: return "sra";
    case Mnemonic::Or: return "or";
    case Mnemonic::And: return "and";
    case Mnemonic::Fence: return "fence";
    case Mnemonic::Ecall: return "ecall";
    case Mnemonic::Ebreak: return "ebreak";
    case Mnemonic::Csrrw: return "csrrw";
    case Mnemonic::Csrrs: return "csrrs";
    case Mnemonic::Csrrc: return "csrrc";
    case Mnemonic::Csrrwi: return "csrrwi";
    case Mnemonic::Csrrsi: return "csrrsi";
    case Mnemonic::Csrrci: return "csrrci";
    case Mnemonic::Mul: return "mul";
    case Mnemonic::Mulh: return "mulh";
    case Mnemonic::Mulhsu: return "mulhsu";
    case Mnemonic::Mulhu: return "mulhu";
    case Mnemonic::Div: return "div";
    case Mnemonic::Divu: return "divu";
    case Mnemonic::Rem: return "rem";
    case Mnemonic::Remu: return "remu";
    case Mnemonic::Illegal: return "illegal";
  }
  return "?";
}

/// One decoded instruction word. `imm` carries the sign-extended immediate;
/// for CSR instructions it carries the 12-bit CSR address and, in the
/// immediate variants, `rs1` carries the 5-bit zimm operand.
struct DecodedInstr {
  Mnemonic op = Mnemonic::Illegal;
  InstrClass cls = InstrClass::None;
  uint8_t rd = 0;
  uint8_t rs1 = 0;
  uint8_t rs2 = 0;
  int32_t imm = 0;
  uint32_t raw = 0;

  constexpr bool is_illegal() const { return op == Mnemonic::Illegal; }
};

namespace detail {

constexpr int32_t imm_i(uint32_t w) { return int32_t(w) >> 20; }

constexpr int32_t imm_s(uint32_t w) {
  return ((int32_t(w) >> 25) << 5) | int32_t((w >> 7) & 0x1Fu);
}

constexpr int32_t imm_b(uint32_t w) {
  return (int32_t(w & 0x8000'0000u) >> 19) | int32_t((w & 0x80u) << 4) |
         int32_t((w >> 20) & 0x7E0u) | int32_t((w >> 7) & 0x1Eu);
}

constexpr int32_t imm_u(uint32_t w) { return int32_t(w & 0xFFFF'F000u); }

constexpr int32_t imm_j(uint32_t w) {
  return (int32_t(w & 0x8000'0000u) >> 11) | int32_t(w & 0xFF000u) |
         int32_t((w >> 9) & 0x800u) | int32_t((w >> 20) & 0x7FEu);
}

}  // namespace detail

/// Full RV32I + M (+ Zicsr) decode. `reg_count` is 16 for the RV32E
/// register file (default) or 32; any register field naming a register at
/// or past the limit makes the word an illegal instruction, as does any
/// unknown encoding.
constexpr DecodedInstr decode(uint32_t word, uint32_t reg_count = 16) {
  const uint32_t opcode = word & 0x7Fu;
  const uint32_t funct3 = (word >> 12) & 0x7u;
  const uint32_t funct7 = (word >> 25) & 0x7Fu;
  const uint8_t rd = uint8_t((word >> 7) & 0x1Fu);
  const uint8_t rs1 = uint8_t((word >> 15) & 0x1Fu);
  const uint8_t rs2 = uint8_t((word >> 20) & 0x1Fu);

  DecodedInstr in;
  in.raw = word;

  const auto illegal = [&]() {
    DecodedInstr bad;
    bad.raw = word;
    return bad;
  };
  const auto reg_ok = [&](uint8_t r) { return uint32_t(r) < reg_count; };

  switch (opcode) {
    case 0x37:  // lui
    case 0x17:  // auipc
      if (!reg_ok(rd)) return illegal();
      in.op = opcode == 0x37 ? Mnemonic::Lui : Mnemonic::Auipc;
      in.cls = InstrClass::U;
      in.rd = rd;
      in.imm = detail::imm_u(word);
      return in;

    case 0x6F:  // jal
      if (!reg_ok(rd)) return illegal();
      in.op = Mnemonic::Jal;
      in.cls = InstrClass::J;
      in.rd = rd;
      in.imm = detail::imm_j(word);
      return in;

    case 0x67:  // jalr
      if (funct3 != 0 || !reg_ok(rd) || !reg_ok(rs1)) return illegal();
      in.op = Mnemonic::Jalr;
      in.cls = InstrClass::I;
      in.rd = rd;
      in.rs1 = rs1;
      in.imm = detail::imm_i(word);
      return in;

    case 0x63: {  // conditional branches
      Mnemonic op = Mnemonic::Illegal;
      switch (funct3) {
        case 0: op = Mnemonic::Beq; break;
        case 1: op = Mnemonic::Bne; break;
        case 4: op = Mnemonic::Blt; break;
        case 5: op = Mnemonic::Bge; break;
        case 6: op = Mnemonic::Bltu; break;
        case 7: op = Mnemonic::Bgeu; break;
        default: return illegal();
      }
      if (!reg_ok(rs1) || !reg_ok(rs2)) return illegal();
      in.op = op;
      in.cls = InstrClass::B;
      in.rs1 = rs1;
      in.rs2 = rs2;
      in.imm = detail::imm_b(word);
      return in;
    }

    case 0x03: {  // loads
      Mnemonic op = Mnemonic::Illegal;
      switch (funct3) {
        case 0: op = Mnemonic::Lb; break;
        case 1: op = Mnemonic::Lh; break;
        case 2: op = Mnemonic::Lw; break;
        case 4: op = Mnemonic::Lbu; break;
        case 5: op = Mnemonic::Lhu; break;
        default: return illegal();
      }
      if (!reg_ok(rd) || !reg_ok(rs1)) return illegal();
      in.op = op;
      in.cls = InstrClass::I;
      in.rd = rd;
      in.rs1 = rs1;
      in.imm = detail::imm_i(word);
      return in;
    }

    case 0x23: {  // stores
      Mnemonic op = Mnemonic::Illegal;
      switch (funct3) {
        case 0: op = Mnemonic::Sb; break;
        case 1: op = Mnemonic::Sh; break;
        case 2: op = Mnemonic::Sw; break;
        default: return illegal();
      }
      if (!reg_ok(rs1) || !reg_ok(rs2)) return illegal();
      in.op = op;
      in.cls = InstrClass::S;
      in.rs1 = rs1;
      in.rs2 = rs2;
      in.imm = detail::imm_s(word);
      return in;
    }

    case 0x13: {  // op-imm
      Mnemonic op = Mnemonic::Illegal;
      int32_t imm = detail::imm_i(word);
      switch (funct3) {
        case 0: op = Mnemonic::Addi; break;
        case 2: op = Mnemonic::Slti; break;
        case 3: op = Mnemonic::Sltiu; break;
        case 4: op = Mnemonic::Xori; break;
        case 6: op = Mnemonic::Ori; break;
        case 7: op = Mnemonic::Andi; break;
        case 1:
          if (funct7 != 0x00) return illegal();
          op = Mnemonic::Slli;
          imm = int32_t(rs2);  // shamt
          break;
        case 5:
          if (funct7 == 0x00) op = Mnemonic::Srli;
          else if (funct7 == 0x20) op = Mnemonic::Srai;
          else return illegal();
          imm = int32_t(rs2);  // shamt
          break;
        default: return illegal();
      }
      if (!reg_ok(rd) || !reg_ok(rs1)) return illegal();
      in.op = op;
      in.cls = InstrClass::I;
      in.rd = rd;
      in.rs1 = rs1;
      in.imm = imm;
      return in;
    }

    case 0x33: {  // op
      Mnemonic op = Mnemonic::Illegal;
      if (funct7 == 0x00) {
        switch (funct3) {
          case 0: op = Mnemonic::Add; break;
          case 1: op = Mnemonic::Sll; break;
          case 2: op = Mnemonic::Slt; break;
          case 3: op = Mnemonic::Sltu; break;
          case 4: op = Mnemonic::Xor; break;
          case 5: op = Mnemonic::Srl; break;
          case 6: op = Mnemonic::Or; break;
          case 7: op = Mnemonic::And; break;
        }
      } else if (funct7 == 0x20) {
        if (funct3 == 0) op = Mnemonic::Sub;
        else if (funct3 == 5) op = Mnemonic::Sra;
        else return illegal();
      } else if (funct7 == 0x01) {
        switch (funct3) {
          case 0: op = Mnemonic::Mul; break;
          case 1: op = Mnemonic::Mulh; break;
          case 2: op = Mnemonic::Mulhsu; break;
          case 3: op = Mnemonic::Mulhu; break;
          case 4: op = Mnemonic::Div; break;
          case 5: op = Mnemonic::Divu; break;
          case 6: op = Mnemonic::Rem; break;
          case 7: op = Mnemonic::Remu; break;
        }
      } else {
        return illegal();
      }
      if (op == Mnemonic::Illegal) return illegal();
      if (!reg_ok(rd) || !reg_ok(rs1) || !reg_ok(rs2)) return illegal();
      in.op = op;
      in.cls = InstrClass::R;
      in.rd = rd;
      in.rs1 = rs1;
      in.rs2 = rs2;
      return in;
    }

    case 0x0F:  // fence (memory ordering is a no-op on this machine)
      if (funct3 != 0) return illegal();
      in.op = Mnemonic::Fence;
      in.cls = InstrClass::I;
      return in;

    case 0x73: {  // system
      if (funct3 == 0) {
        if (word == 0x0000'0073u) {
          in.op = Mnemonic::Ecall;
          in.cls = InstrClass::System;
          return in;
        }
        if (word == 0x0010'0073u) {
          in.op = Mnemonic::Ebreak;
          in.cls = InstrClass::System;
          return in;
        }
        return illegal();
      }
      Mnemonic op = Mnemonic::Illegal;
      bool reg_operand = false;
      switch (funct3) {
        case 1: op = Mnemonic::Csrrw; reg_operand = true; break;
        case 2: op = Mnemonic::Csrrs; reg_operand = true; break;
        case 3: op = Mnemonic::Csrrc; reg_operand = true; break;
        case 5: op = Mnemonic::Csrrwi; break;
        case 6: op = Mnemonic::Csrrsi; break;
        case 7: op = Mnemonic::Csrrci; break;
        default: return illegal();
      }
      if (!reg_ok(rd)) return illegal();
      if (reg_operand && !reg_ok(rs1)) return illegal();
      in.op = op;
      in.cls = InstrClass::System;
      in.rd = rd;
      in.rs1 = rs1;  // register index, or zimm for the immediate variants
      in.imm = int32_t((word >> 20) & 0xFFFu);
      return in;
    }

    default:
      return illegal();
  }
}

}  // namespace axrv
