#pragma once

// Test-side RISC-V reference, written from the instruction-format tables
// and the ISA arithmetic rules, independently of the library's decoder and
// circuit models. Used as the oracle for decode/execute conformance.

#include <cstdint>
#include <optional>
#include <string>

namespace riscv_ref {

struct RefInstr {
  std::string name;
  char fmt = '?';  // R,I,H(shift-imm),S,B,U,J,F(fence),E(env),C(csr),Z(csr-imm)
  unsigned rd = 0, rs1 = 0, rs2 = 0;
  int32_t imm = 0;
  uint32_t csr = 0;
};

namespace detail {

struct Pattern {
  uint32_t mask;
  uint32_t match;
  const char* name;
  char fmt;
};

// Linear pattern table, most-specific first.
inline constexpr Pattern kPatterns[] = {
    {0xFFFFFFFF, 0x00000073, "ecall", 'E'},
    {0xFFFFFFFF, 0x00100073, "ebreak", 'E'},
    {0xFE00707F, 0x00000033, "add", 'R'},
    {0xFE00707F, 0x40000033, "sub", 'R'},
    {0xFE00707F, 0x00001033, "sll", 'R'},
    {0xFE00707F, 0x00002033, "slt", 'R'},
    {0xFE00707F, 0x00003033, "sltu", 'R'},
    {0xFE00707F, 0x00004033, "xor", 'R'},
    {0xFE00707F, 0x00005033, "srl", 'R'},
    {0xFE00707F, 0x40005033, "sra", 'R'},
    {0xFE00707F, 0x00006033, "or", 'R'},
    {0xFE00707F, 0x00007033, "and", 'R'},
    {0xFE00707F, 0x02000033, "mul", 'R'},
    {0xFE00707F, 0x02001033, "mulh", 'R'},
    {0xFE00707F, 0x02002033, "mulhsu", 'R'},
    {0xFE00707F, 0x02003033, "mulhu", 'R'},
    {0xFE00707F, 0x02004033, "div", 'R'},
    {0xFE00707F, 0x02005033, "divu", 'R'},
    {0xFE00707F, 0x02006033, "rem", 'R'},
    {0xFE00707F, 0x02007033, "remu", 'R'},
    {0xFE00707F, 0x00001013, "slli", 'H'},
    {0xFE00707F, 0x00005013, "srli", 'H'},
    {0xFE00707F, 0x40005013, "srai", 'H'},
    {0x0000707F, 0x00000013, "addi", 'I'},
    {0x0000707F, 0x00002013, "slti", 'I'},
    {0x0000707F, 0x00003013, "sltiu", 'I'},
    {0x0000707F, 0x00004013, "xori", 'I'},
    {0x0000707F, 0x00006013, "ori", 'I'},
    {0x0000707F, 0x00007013, "andi", 'I'},
    {0x0000707F, 0x00000003, "lb", 'I'},
    {0x0000707F, 0x00001003, "lh", 'I'},
    {0x0000707F, 0x00002003, "lw", 'I'},
    {0x0000707F, 0x00004003, "lbu", 'I'},
    {0x0000707F, 0x00005003, "lhu", 'I'},
    {0x0000707F, 0x00000023, "sb", 'S'},
    {0x0000707F, 0x00001023, "sh", 'S'},
    {0x0000707F, 0x00002023, "sw", 'S'},
    {0x0000707F, 0x00000063, "beq", 'B'},
    {0x0000707F, 0x00001063, "bne", 'B'},
    {0x0000707F, 0x00004063, "blt", 'B'},
    {0x0000707F, 0x00005063, "bge", 'B'},
    {0x0000707F, 0x00006063, "bltu", 'B'},
    {0x0000707F, 0x00007063, "bgeu", 'B'},
    {0x0000707F, 0x00000067, "jalr", 'I'},
    {0x0000707F, 0x0000000F, "fence", 'F'},
    {0x0000707F, 0x00001073, "csrrw", 'C'},
    {0x0000707F, 0x00002073, "csrrs", 'C'},
    {0x0000707F, 0x00003073, "csrrc", 'C'},
    {0x0000707F, 0x00005073, "csrrwi", 'Z'},
    {0x0000707F, 0x00006073, "csrrsi", 'Z'},
    {0x0000707F, 0x00007073, "csrrci", 'Z'},
    {0x0000007F, 0x00000037, "lui", 'U'},
    {0x0000007F, 0x00000017, "auipc", 'U'},
    {0x0000007F, 0x0000006F, "jal", 'J'},
};

inline int32_t sext(uint32_t v, unsigned bits) {
  const uint32_t sign = 1u << (bits - 1);
  return int32_t((v ^ sign) - sign);
}

}  // namespace detail

/// Decode one word against the pattern table; nullopt when no pattern
/// matches or a used register field is outside the file.
inline std::optional<RefInstr> decode(uint32_t w, unsigned reg_count) {
  const detail::Pattern* hit = nullptr;
  for (const auto& p : detail::kPatterns)
    if ((w & p.mask) == p.match) {
      hit = &p;
      break;
    }
  if (!hit) return std::nullopt;

  RefInstr r;
  r.name = hit->name;
  r.fmt = hit->fmt;
  r.rd = (w >> 7) & 0x1F;
  r.rs1 = (w >> 15) & 0x1F;
  r.rs2 = (w >> 20) & 0x1F;

  switch (hit->fmt) {
    case 'R':
      if (r.rd >= reg_count || r.rs1 >= reg_count || r.rs2 >= reg_count) return std::nullopt;
      break;
    case 'H':
      if (r.rd >= reg_count || r.rs1 >= reg_count) return std::nullopt;
      r.imm = int32_t(r.rs2);
      break;
    case 'I':
      if (r.rd >= reg_count || r.rs1 >= reg_count) return std::nullopt;
      r.imm = detail::sext(w >> 20, 12);
      break;
    case 'S':
      if (r.rs1 >= reg_count || r.rs2 >= reg_count) return std::nullopt;
      r.imm = detail::sext(((w >> 25) << 5) | ((w >> 7) & 0x1F), 12);
      break;
    case 'B':
      if (r.rs1 >= reg_count || r.rs2 >= reg_count) return std::nullopt;
      r.imm = detail::sext(((w >> 31) << 12) | (((w >> 7) & 1) << 11) |
                               (((w >> 25) & 0x3F) << 5) | (((w >> 8) & 0xF) << 1),
                           13);
      break;
    case 'U':
      if (r.rd >= reg_count) return std::nullopt;
      r.imm = int32_t(w & 0xFFFFF000u);
      break;
    case 'J':
      if (r.rd >= reg_count) return std::nullopt;
      r.imm = detail::sext(((w >> 31) << 20) | (((w >> 12) & 0xFF) << 12) |
                               (((w >> 20) & 1) << 11) | (((w >> 21) & 0x3FF) << 1),
                           21);
      break;
    case 'C':
      if (r.rd >= reg_count || r.rs1 >= reg_count) return std::nullopt;
      r.csr = w >> 20;
      break;
    case 'Z':
      if (r.rd >= reg_count) return std::nullopt;
      r.csr = w >> 20;
      r.imm = int32_t(r.rs1);  // zimm
      break;
    case 'F':
    case 'E':
      break;
  }
  return r;
}

/// Reference result of a register-register / register-immediate operation,
/// straight from the ISA arithmetic rules (64-bit host arithmetic).
inline std::optional<uint32_t> exec_alu(const std::string& name, uint32_t a, uint32_t b) {
  const int32_t sa = int32_t(a);
  const int32_t sb = int32_t(b);
  if (name == "add" || name == "addi") return a + b;
  if (name == "sub") return a - b;
  if (name == "sll" || name == "slli") return a << (b & 31);
  if (name == "srl" || name == "srli") return a >> (b & 31);
  if (name == "sra" || name == "srai") return uint32_t(sa >> (b & 31));
  if (name == "slt" || name == "slti") return sa < sb ? 1 : 0;
  if (name == "sltu" || name == "sltiu") return a < b ? 1 : 0;
  if (name == "xor" || name == "xori") return a ^ b;
  if (name == "or" || name == "ori") return a | b;
  if (name == "and" || name == "andi") return a & b;
  if (name == "mul") return uint32_t(uint64_t(int64_t(sa) * int64_t(sb)));
  if (name == "mulh") return uint32_t(uint64_t(int64_t(sa) * int64_t(sb)) >> 32);
  if (name == "mulhsu") return uint32_t(uint64_t(int64_t(sa) * int64_t(uint64_t(b))) >> 32);
  if (name == "mulhu") return uint32_t((uint64_t(a) * uint64_t(b)) >> 32);
  if (name == "div") {
    if (b == 0) return 0xFFFFFFFFu;
    if (a == 0x80000000u && sb == -1) return 0x80000000u;
    return uint32_t(sa / sb);
  }
  if (name == "divu") return b == 0 ? 0xFFFFFFFFu : a / b;
  if (name == "rem") {
    if (b == 0) return a;
    if (a == 0x80000000u && sb == -1) return 0u;
    return uint32_t(sa % sb);
  }
  if (name == "remu") return b == 0 ? a : a % b;
  return std::nullopt;
}

}  // namespace riscv_ref
