#include <catch2/catch_amalgamated.hpp>

#include "axrv/kernels/encoder.hpp"
#include "axrv/kernels/kernels.hpp"
#include "axrv/kernels/mix.hpp"
#include "axrv/sim/machine.hpp"

using namespace axrv;

namespace {

Machine run_program(const EncodedProgram& p, uint32_t mulcsr = 0) {
  Machine m;
  m.load_binary(p.bytes(), p.entry);
  if (mulcsr) m.set_csr(CsrFile::kMulCsr, mulcsr);
  const RunSummary s = m.run();
  INFO("state " << halt_state_name(s.state) << " fault: " << s.fault);
  REQUIRE(s.state == HaltState::Halted);
  REQUIRE(s.exit_code == 0);
  return m;
}

}  // namespace

TEST_CASE("encoder: hand-verified words and operand range policing") {
  CHECK(enc::add(1, 2, 3) == 0x003100B3u);
  CHECK(enc::mul(10, 10, 11) == 0x02B50533u);
  CHECK(enc::csrrw(0, 0x801, 5) == 0x80129073u);
  CHECK(enc::ebreak() == 0x00100073u);

  CHECK_THROWS_AS(enc::addi(1, 0, 2048), std::out_of_range);
  CHECK_THROWS_AS(enc::addi(1, 0, -2049), std::out_of_range);
  CHECK_NOTHROW(enc::addi(1, 0, 2047));
  CHECK_NOTHROW(enc::addi(1, 0, -2048));
  CHECK_THROWS_AS(enc::add(16, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(enc::lw(3, 16, 0), std::out_of_range);
  CHECK_THROWS_AS(enc::slli(1, 1, 32), std::out_of_range);
  CHECK_THROWS_AS(enc::beq(0, 0, 3), std::out_of_range);
  CHECK_THROWS_AS(enc::beq(0, 0, 4096), std::out_of_range);
}

TEST_CASE("encoder: dispatcher round-trips through the decoder") {
  const struct {
    Mnemonic m;
    enc::Operands o;
  } cases[] = {
      {Mnemonic::Add, {.rd = 1, .rs1 = 2, .rs2 = 3}},
      {Mnemonic::Addi, {.rd = 4, .rs1 = 5, .imm = -7}},
      {Mnemonic::Lw, {.rd = 6, .rs1 = 7, .imm = 2047}},
      {Mnemonic::Sw, {.rs1 = 8, .rs2 = 9, .imm = -2048}},
      {Mnemonic::Beq, {.rs1 = 10, .rs2 = 11, .imm = -4096}},
      {Mnemonic::Jal, {.rd = 12, .imm = 1 << 19}},
      {Mnemonic::Lui, {.rd = 13, .imm = 0xFFFFF}},
      {Mnemonic::Srai, {.rd = 14, .rs1 = 15, .imm = 31}},
      {Mnemonic::Csrrci, {.rd = 1, .rs1 = 31, .imm = 0xC00}},
      {Mnemonic::Mulhsu, {.rd = 2, .rs1 = 3, .rs2 = 4}},
  };
  for (const auto& c : cases) {
    const uint32_t word = enc::encode(c.m, c.o);
    const DecodedInstr d = decode(word);
    INFO(mnemonic_name(c.m));
    REQUIRE(d.op == c.m);
    if (d.cls == InstrClass::U) {
      CHECK(d.imm == int32_t(uint32_t(c.o.imm) << 12));
    } else if (c.m == Mnemonic::Csrrci) {
      CHECK(d.imm == c.o.imm);
      CHECK(d.rs1 == c.o.rs1);
    } else if (d.cls != InstrClass::R) {
      CHECK(d.imm == c.o.imm);
    }
  }
}

TEST_CASE("assembler: li32 materializes arbitrary constants") {
  for (const uint32_t value : {0u, 1u, 2047u, 2048u, 0x7FFFF800u, 0x80000000u, 0xF0000000u,
                               0xFFFFFFFFu, 0x12345678u, 0xFFFFF7FFu}) {
    Assembler a;
    a.li32(5, value);
    a.li32(1, Machine::kMmioOutput);
    a.emit(enc::sw(5, 1, 0));
    a.emit(enc::sw(0, 1, 4));
    Machine m;
    EncodedProgram p;
    p.words = a.words();
    m.load_binary(p.bytes());
    m.run();
    REQUIRE(m.state() == HaltState::Halted);
    REQUIRE(m.output().size() == 1);
    CHECK(m.output()[0] == value);
  }
}

TEST_CASE("kernels: accurate runs reproduce the host reference bit-exactly") {
  for (const Kernel k : kAllKernels) {
    const KernelSpec spec{k, 0, 12345};
    const EncodedProgram p = generate(spec);
    REQUIRE_FALSE(p.reference_outputs.empty());
    Machine m = run_program(p);
    INFO(kernel_name(k));
    CHECK(m.output() == p.reference_outputs);
  }
}

TEST_CASE("kernels: generation is deterministic in (spec, seed)") {
  const KernelSpec spec{Kernel::Conv2d3x3, 12, 99};
  const EncodedProgram a = generate(spec);
  const EncodedProgram b = generate(spec);
  CHECK(a.words == b.words);
  CHECK(a.reference_outputs == b.reference_outputs);
  const EncodedProgram c = generate({Kernel::Conv2d3x3, 12, 100});
  CHECK(a.words != c.words);  // data differs with the seed
}

TEST_CASE("factorial: reference and machine agree on 10!") {
  const EncodedProgram p = generate({Kernel::Factorial, 10, 1});
  REQUIRE(p.reference_outputs.size() == 1);
  CHECK(p.reference_outputs[0] == 3'628'800u);
  Machine m = run_program(p);
  CHECK(m.output()[0] == 3'628'800u);
  CHECK(generate({Kernel::Factorial, 1, 1}).reference_outputs[0] == 1);
  CHECK(run_program(generate({Kernel::Factorial, 1, 1})).output()[0] == 1);
  CHECK_THROWS_AS(generate({Kernel::Factorial, 13, 1}), std::invalid_argument);
}

TEST_CASE("matmul: the generator emits exactly n^3 multiplies") {
  const EncodedProgram p = generate({Kernel::MatmulInt, 8, 7});
  Machine m = run_program(p);
  const InstructionMix mix = instruction_mix(m.retired_counts());
  CHECK(mix.mul == 512);
  CHECK(mix.mulh == 0);
  CHECK(m.output().size() == 64);
}

TEST_CASE("instruction mix: class folding and the mul share") {
  const EncodedProgram p = generate({Kernel::IirInt, 64, 3});
  Machine m = run_program(p);
  const InstructionMix mix = instruction_mix(m.retired_counts());
  CHECK(mix.mul == 128);        // two per sample
  CHECK(mix.div_class == 64);   // one per sample
  CHECK(mix.load == 64);
  CHECK(mix.store == 65);       // outputs plus the halt store
  CHECK(mix.total() == m.instret());
  CHECK(mix.mul_share_of_arith_percent() ==
        100.0 * double(mix.mul + mix.mulh) / double(mix.arithmetic()));

  const EncodedProgram nr = generate({Kernel::NrSolver, 4, 3});
  Machine m2 = run_program(nr);
  const InstructionMix mix2 = instruction_mix(m2.retired_counts());
  CHECK(mix2.div_class == 4 * 16);
  CHECK(mix2.mul == 4);  // residual multiply per value

  // a pure-add stream has a zero mul share
  std::array<uint64_t, kMnemonicCount> counts{};
  counts[unsigned(Mnemonic::Addi)] = 100;
  counts[unsigned(Mnemonic::Add)] = 50;
  const InstructionMix pure = instruction_mix(counts);
  CHECK(pure.add_class == 150);
  CHECK(pure.mul_share_of_arith_percent() == 0.0);
}

TEST_CASE("kernel export: ihex and raw binary load identically") {
  const EncodedProgram p = generate({Kernel::FirInt, 32, 5});
  Machine from_bin, from_hex;
  from_bin.load_binary(p.bytes(), p.entry);
  from_hex.load_ihex(p.to_ihex());
  const RunSummary a = from_bin.run();
  const RunSummary b = from_hex.run();
  CHECK(a.state == HaltState::Halted);
  CHECK(b.state == HaltState::Halted);
  CHECK(from_bin.output() == from_hex.output());
  CHECK(a.pc_trace_hash == b.pc_trace_hash);
}

TEST_CASE("kernel size validation") {
  CHECK_THROWS_AS(generate({Kernel::Conv2d3x3, 2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate({Kernel::MatmulInt, 65, 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate({Kernel::FirInt, 4, 1}), std::invalid_argument);
  CHECK_NOTHROW(generate({Kernel::Conv2d5x5, 5, 1}));
}

TEST_CASE("kernel names round-trip") {
  for (const Kernel k : kAllKernels) {
    const auto back = kernel_from_name(kernel_name(k));
    REQUIRE(back.has_value());
    CHECK(*back == k);
  }
  CHECK_FALSE(kernel_from_name("quicksort").has_value());
}
