#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "axrv/isa/csr.hpp"
#include "axrv/isa/decode.hpp"
#include "axrv/isa/execute.hpp"
#include "axrv/kernels/encoder.hpp"
#include "riscv_reference.hpp"

using namespace axrv;

TEST_CASE("decode: hand-verified encodings") {
  const DecodedInstr mul_i = decode(0x02B50533u);
  CHECK(mul_i.op == Mnemonic::Mul);
  CHECK(mul_i.rd == 10);
  CHECK(mul_i.rs1 == 10);
  CHECK(mul_i.rs2 == 11);
  CHECK(mul_i.cls == InstrClass::R);

  const DecodedInstr add_i = decode(0x003100B3u);
  CHECK(add_i.op == Mnemonic::Add);
  CHECK(add_i.rd == 1);
  CHECK(add_i.rs1 == 2);
  CHECK(add_i.rs2 == 3);

  const DecodedInstr csr_i = decode(0x80129073u);
  CHECK(csr_i.op == Mnemonic::Csrrw);
  CHECK(csr_i.rd == 0);
  CHECK(csr_i.rs1 == 5);
  CHECK(csr_i.imm == 0x801);
  CHECK(csr_i.cls == InstrClass::System);

  CHECK(decode(0x00100073u).op == Mnemonic::Ebreak);
  CHECK(decode(0x00000073u).op == Mnemonic::Ecall);
  CHECK(decode(0xFFFFFFFFu).is_illegal());
  CHECK(decode(0).is_illegal());
}

TEST_CASE("decode: register file limit (RV32E vs 32-register build)") {
  const uint32_t word = enc::raw_r(0x00, 3, 2, 0, 17, 0x33);  // add x17, x2, x3
  CHECK(decode(word, 16).is_illegal());
  const DecodedInstr wide = decode(word, 32);
  CHECK(wide.op == Mnemonic::Add);
  CHECK(wide.rd == 17);

  // zimm in the rs1 field of csrrwi is an immediate, never a register
  const uint32_t csr_imm = enc::raw_i(0x801, 29, 5, 1, 0x73);  // csrrwi x1, 0x801, 29
  const DecodedInstr z = decode(csr_imm, 16);
  CHECK(z.op == Mnemonic::Csrrwi);
  CHECK(z.rs1 == 29);
}

TEST_CASE("decode: agrees with the pattern-table reference on random words") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1'000'000; ++i) {
    const uint32_t word = uint32_t(rng());
    for (const unsigned regs : {16u, 32u}) {
      const DecodedInstr got = decode(word, regs);
      const auto want = riscv_ref::decode(word, regs);
      if (!want.has_value()) {
        INFO("word 0x" << std::hex << word);
        REQUIRE(got.is_illegal());
        continue;
      }
      INFO("word 0x" << std::hex << word << " want " << want->name);
      REQUIRE_FALSE(got.is_illegal());
      REQUIRE(std::string(mnemonic_name(got.op)) == want->name);
      if (want->fmt == 'R') {
        REQUIRE(got.rd == want->rd);
        REQUIRE(got.rs1 == want->rs1);
        REQUIRE(got.rs2 == want->rs2);
      } else if (want->fmt == 'I' || want->fmt == 'H') {
        REQUIRE(got.rd == want->rd);
        REQUIRE(got.rs1 == want->rs1);
        REQUIRE(got.imm == want->imm);
      } else if (want->fmt == 'S' || want->fmt == 'B') {
        REQUIRE(got.rs1 == want->rs1);
        REQUIRE(got.rs2 == want->rs2);
        REQUIRE(got.imm == want->imm);
      } else if (want->fmt == 'U' || want->fmt == 'J') {
        REQUIRE(got.rd == want->rd);
        REQUIRE(got.imm == want->imm);
      } else if (want->fmt == 'C' || want->fmt == 'Z') {
        REQUIRE(got.rd == want->rd);
        REQUIRE(got.rs1 == want->rs1);
        REQUIRE(uint32_t(got.imm) == want->csr);
      }
    }
  }
}

TEST_CASE("approx control word: field partition round-trips every raw value") {
  const ApproxControlWord w = ApproxControlWord::decode(0x007E0003u);
  CHECK(w.enable);
  CHECK(w.circuit_select == 1);
  CHECK(w.truncation == 0);
  CHECK(w.custom_a == 0);
  CHECK(w.custom_b == 0);
  CHECK(w.error_field == 0x007E);
  CHECK(w.mul_config().error_mask == 0x7E);
  CHECK(w.encode() == 0x007E0003u);

  std::mt19937 rng(5);
  for (int i = 0; i < 1'000'000; ++i) {
    const uint32_t raw = uint32_t(rng());
    CHECK(ApproxControlWord::decode(raw).encode() == raw);
  }
  for (const uint32_t raw : {0u, 0xFFFFFFFFu, 0x80000001u, 0x0000FFFFu})
    CHECK(ApproxControlWord::decode(raw).encode() == raw);
}

TEST_CASE("csr file: implemented set, read-only counters") {
  CsrFile f;
  CHECK(CsrFile::is_implemented(0x800));
  CHECK(CsrFile::is_implemented(0xC82));
  CHECK_FALSE(CsrFile::is_implemented(0x803));
  CHECK_FALSE(CsrFile::is_implemented(0x100));
  CHECK(CsrFile::is_read_only(0xC00));
  CHECK_FALSE(CsrFile::is_read_only(0x801));

  CHECK(f.write(0x801, 0x1234));
  CHECK(f.read(0x801, 0, 0) == 0x1234);
  CHECK_FALSE(f.write(0xC00, 1));

  CHECK(f.read(0xC00, 0x1'2345'6789ull, 77) == 0x2345'6789u);
  CHECK(f.read(0xC80, 0x1'2345'6789ull, 77) == 1);
  CHECK(f.read(0xC02, 0, 77) == 77);
}

TEST_CASE("csr access: read-modify-write semantics and traps") {
  CsrFile f;
  uint64_t cyc = 100, ret = 50;

  auto a = csr_access(f, Mnemonic::Csrrw, 0x801, 0xAB, true, cyc, ret);
  CHECK_FALSE(a.trap);
  CHECK(a.old_value == 0);
  CHECK(f.mulcsr == 0xAB);

  a = csr_access(f, Mnemonic::Csrrs, 0x801, 0x100, true, cyc, ret);
  CHECK(a.old_value == 0xAB);
  CHECK(f.mulcsr == 0x1AB);

  a = csr_access(f, Mnemonic::Csrrc, 0x801, 0x00F, true, cyc, ret);
  CHECK(a.old_value == 0x1AB);
  CHECK(f.mulcsr == 0x1A0);

  // csrrs with x0 reads a counter without trapping
  a = csr_access(f, Mnemonic::Csrrs, 0xC02, 0, false, cyc, ret);
  CHECK_FALSE(a.trap);
  CHECK(a.old_value == 50);

  // any write to a counter traps
  a = csr_access(f, Mnemonic::Csrrw, 0xC00, 1, true, cyc, ret);
  CHECK(a.trap);
  a = csr_access(f, Mnemonic::Csrrs, 0xC02, 1, true, cyc, ret);
  CHECK(a.trap);

  // unimplemented CSR traps on any access
  a = csr_access(f, Mnemonic::Csrrs, 0x7C0, 0, false, cyc, ret);
  CHECK(a.trap);
}

namespace {
DecodedInstr instr_of(Mnemonic m) {
  DecodedInstr in;
  in.op = m;
  in.cls = InstrClass::R;
  return in;
}
}  // namespace

TEST_CASE("execute: mul routing follows mulcsr") {
  const CircuitSlotTable slots = CircuitSlotTable::defaults();
  CsrFile csrs;

  SECTION("disabled approximation uses the accurate slot") {
    csrs.mulcsr = 0;
    const ExecResult r = execute_arith(instr_of(Mnemonic::Mul), 200, 123, csrs, slots);
    CHECK(r.fault == nullptr);
    CHECK(r.value == 24600);
    CHECK(r.unit == ExecUnit::Mul);
    CHECK(r.slot == 0);
    CHECK(r.slot_kind == SlotKind::Accurate);
  }

  SECTION("enabled approximation with slot 1 uses the error-configurable circuit") {
    csrs.mulcsr = 0x007E0003u;  // enable, slot 1, error field 0x7E
    const ExecResult r = execute_arith(instr_of(Mnemonic::Mul), 200, 123, csrs, slots);
    CHECK(r.fault == nullptr);
    CHECK(r.slot == 1);
    CHECK(r.slot_kind == SlotKind::Approximate);
    CHECK(r.value == approx_mul8(200, 123, {0x7E, 0}));
  }

  SECTION("an empty slot is a configuration fault") {
    csrs.mulcsr = (2u << 1) | 1u;  // enable, slot 2
    const ExecResult r = execute_arith(instr_of(Mnemonic::Mul), 1, 1, csrs, slots);
    REQUIRE(r.fault != nullptr);
    CHECK(std::string(r.fault).find("MUL") != std::string::npos);
  }

  SECTION("unsigned-high variants stay on the accurate slot") {
    csrs.mulcsr = 0x00000003u;  // enable, slot 1, fully approximate mask
    const ExecResult hu = execute_arith(instr_of(Mnemonic::Mulhu), 0xFFFFFFFFu, 0xFFFFFFFFu, csrs, slots);
    CHECK(hu.slot == 0);
    CHECK(hu.value == 0xFFFFFFFEu);
    const ExecResult hsu = execute_arith(instr_of(Mnemonic::Mulhsu), uint32_t(-2), 3, csrs, slots);
    CHECK(hsu.slot == 0);
    CHECK(hsu.value == 0xFFFFFFFFu);  // (-2)*3 high word
  }

  SECTION("mulh routes like mul") {
    csrs.mulcsr = 0;
    const ExecResult r = execute_arith(instr_of(Mnemonic::Mulh), uint32_t(-1), uint32_t(-1), csrs, slots);
    CHECK(r.value == 0);
  }
}

TEST_CASE("execute: add-class goes through the carry-select adder") {
  const CircuitSlotTable slots = CircuitSlotTable::defaults();
  CsrFile csrs;

  SECTION("default control word means exact addition") {
    std::mt19937 rng(3);
    for (int i = 0; i < 1000; ++i) {
      const uint32_t a = rng(), b = rng();
      CHECK(execute_arith(instr_of(Mnemonic::Add), a, b, csrs, slots).value == a + b);
      CHECK(execute_arith(instr_of(Mnemonic::Sub), a, b, csrs, slots).value == a - b);
    }
  }

  SECTION("enabled error lines reach the adder") {
    csrs.alucsr = 0x00010001u;  // enable, slot 0, error field 0x0001
    std::mt19937 rng(9);
    for (int i = 0; i < 1000; ++i) {
      const uint32_t a = rng(), b = rng();
      const ExecResult r = execute_arith(instr_of(Mnemonic::Add), a, b, csrs, slots);
      CHECK(r.value == csa32_add(a, b, 0, AdderConfig{0x0001}).sum);
    }
  }

  SECTION("alucsr circuit-select is ignored: one adder covers both modes") {
    csrs.alucsr = (3u << 1) | 1u;  // enable, nominal slot 3, zero error lines
    const ExecResult r = execute_arith(instr_of(Mnemonic::Add), 100, 200, csrs, slots);
    CHECK(r.fault == nullptr);
    CHECK(r.slot == 0);
    CHECK(r.value == csa32_add(100, 200, 0, AdderConfig{0}).sum);
  }

  SECTION("logic and shifts are plain exact operations") {
    csrs.alucsr = 0x00000001u;  // enable with all-approximate lines
    CHECK(execute_arith(instr_of(Mnemonic::Xor), 0xF0F0, 0x0FF0, csrs, slots).value == 0xFF00);
    CHECK(execute_arith(instr_of(Mnemonic::Sll), 1, 31, csrs, slots).value == 0x80000000u);
    CHECK(execute_arith(instr_of(Mnemonic::Sra), 0x80000000u, 31, csrs, slots).value == 0xFFFFFFFFu);
    CHECK(execute_arith(instr_of(Mnemonic::Slt), uint32_t(-1), 0, csrs, slots).value == 1);
  }
}

TEST_CASE("execute: divider is always exact; empty DIV slots fault") {
  const CircuitSlotTable slots = CircuitSlotTable::defaults();
  CsrFile csrs;
  CHECK(execute_arith(instr_of(Mnemonic::Div), 7, 0, csrs, slots).value == 0xFFFFFFFFu);
  CHECK(execute_arith(instr_of(Mnemonic::Rem), 7, 0, csrs, slots).value == 7);
  CHECK(execute_arith(instr_of(Mnemonic::Div), 0x80000000u, 0xFFFFFFFFu, csrs, slots).value ==
        0x80000000u);
  csrs.divcsr = (3u << 1) | 1u;
  CHECK(execute_arith(instr_of(Mnemonic::Div), 1, 1, csrs, slots).fault != nullptr);
}

TEST_CASE("execute: disable bit dominance over random operations") {
  const CircuitSlotTable slots = CircuitSlotTable::defaults();
  CsrFile enabled_exact, disabled;
  disabled.mulcsr = 0x12340000u;   // junk error field, enable = 0
  disabled.alucsr = 0xFFFF0000u;
  enabled_exact.mulcsr = 0;
  enabled_exact.alucsr = 0;

  std::mt19937 rng(31);
  const Mnemonic ops[] = {Mnemonic::Add, Mnemonic::Sub, Mnemonic::Mul, Mnemonic::Mulh,
                          Mnemonic::Div, Mnemonic::Rem};
  for (int i = 0; i < 5000; ++i) {
    const uint32_t a = rng(), b = rng();
    for (const Mnemonic m : ops) {
      CHECK(execute_arith(instr_of(m), a, b, disabled, slots).value ==
            execute_arith(instr_of(m), a, b, enabled_exact, slots).value);
    }
  }
}
