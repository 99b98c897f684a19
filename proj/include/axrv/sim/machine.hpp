#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "axrv/energy/event.hpp"
#include "axrv/isa/csr.hpp"
#include "axrv/isa/decode.hpp"
#include "axrv/isa/execute.hpp"
#include "axrv/isa/slots.hpp"
#include "axrv/sim/ihex.hpp"

namespace axrv {

struct Latencies {
  uint32_t mul_cycles = 4;
  uint32_t div_cycles = 32;
  uint32_t branch_penalty = 1;
};

struct MachineConfig {
  uint32_t mem_size = 4u << 20;
  uint32_t mem_base = 0;
  double clock_hz = 500e6;
  Latencies latency{};
  uint64_t max_cycles = 1ull << 32;
  uint32_t reg_count = 16;  // RV32E register file; 32 selects the full RV32I file
};

enum class HaltState : uint8_t { Running, Halted, Faulted, TimedOut };

constexpr const char* halt_state_name(HaltState s) {
  switch (s) {
    case HaltState::Running: return "running";
    case HaltState::Halted: return "halted";
    case HaltState::Faulted: return "faulted";
    case HaltState::TimedOut: return "timeout";
  }
  return "?";
}

/// One retired (or faulted) instruction, in retirement order.
struct TraceEvent {
  uint64_t cycle = 0;
  uint32_t pc = 0;
  uint32_t raw = 0;
  Mnemonic op = Mnemonic::Illegal;
  uint8_t rd = 0;
  uint32_t rd_value = 0;
  bool rd_written = false;
  bool mem_access = false;
  bool mem_write = false;
  uint32_t mem_addr = 0;
  ExecUnit unit = ExecUnit::Alu;
  uint8_t slot = 0;
  bool unit_active = false;  // true when an execution-unit circuit produced the result
};

inline std::string format_trace_line(const TraceEvent& ev) {
  char buf[96];
  if (ev.unit_active) {
    std::snprintf(buf, sizeof(buf), "%llu %08X %08X %s [%s:%u]",
                  static_cast<unsigned long long>(ev.cycle), ev.pc, ev.raw, mnemonic_name(ev.op),
                  exec_unit_name(ev.unit), unsigned(ev.slot));
  } else {
    std::snprintf(buf, sizeof(buf), "%llu %08X %08X %s",
                  static_cast<unsigned long long>(ev.cycle), ev.pc, ev.raw, mnemonic_name(ev.op));
  }
  return buf;
}

struct RunSummary {
  uint64_t instret = 0;
  uint64_t cycle = 0;
  double elapsed_s = 0.0;
  HaltState state = HaltState::Running;
  uint32_t exit_code = 0;
  std::string fault;
  uint64_t pc_trace_hash = 0;
  uint64_t addr_trace_hash = 0;
};

namespace detail {

inline constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr uint64_t kFnvPrime = 0x100000001b3ull;

constexpr uint64_t fnv_mix(uint64_t h, uint32_t value) {
  for (int i = 0; i < 4; ++i) {
    h ^= (value >> (8 * i)) & 0xFFu;
    h *= kFnvPrime;
  }
  return h;
}

inline std::string hex_fault(const char* what, uint32_t word, uint32_t pc) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s (word 0x%08X at pc 0x%08X)", what, word, pc);
  return buf;
}

}  // namespace detail

/// A single RV32IEM hart with a flat little-endian memory, the three
/// approximation CSRs, retirement counters, and two MMIO words:
/// a store to kMmioOutput appends the output channel, a store to kMmioHalt
/// stops the machine with that exit code.
class Machine {
 public:
  static constexpr uint32_t kMmioOutput = 0xF000'0000u;
  static constexpr uint32_t kMmioHalt = 0xF000'0004u;

  explicit Machine(MachineConfig cfg = {})
      : cfg_(cfg), mem_(cfg.mem_size, 0), written_(cfg.mem_size, false),
        slots_(CircuitSlotTable::defaults()) {
    if (cfg_.clock_hz <= 0) throw std::invalid_argument("machine: clock_hz must be positive");
    if (cfg_.latency.mul_cycles < 1 || cfg_.latency.div_cycles < 1)
      throw std::invalid_argument("machine: instruction latencies must be at least 1");
    if (cfg_.reg_count != 16 && cfg_.reg_count != 32)
      throw std::invalid_argument("machine: register file is 16 (RV32E) or 32 entries");
  }

  /// Install a raw little-endian image and reset all architectural state.
  /// Only bytes covered by the image (or stored to later) are readable;
  /// loads of untouched memory fault instead of returning silent zeros.
  void load_binary(std::span<const uint8_t> image, std::optional<uint32_t> base_opt = {}) {
    const uint32_t base = base_opt.value_or(cfg_.mem_base);
    if (image.empty()) throw std::invalid_argument("load: empty program image");
    if (base < cfg_.mem_base ||
        uint64_t(base) + image.size() > uint64_t(cfg_.mem_base) + cfg_.mem_size)
      throw std::invalid_argument("load: image does not fit in memory");
    reset();
    std::memcpy(mem_.data() + (base - cfg_.mem_base), image.data(), image.size());
    std::fill_n(written_.begin() + (base - cfg_.mem_base), image.size(), true);
    pc_ = base;
  }

  void load_ihex(std::string_view text) {
    const IhexImage image = ihex_parse(text);
    load_binary(image.bytes, image.base);
  }

  /// Preset one of the approximation CSRs before the first instruction.
  void set_csr(uint16_t addr, uint32_t value) {
    if (!csrs_.write(addr, value))
      throw std::invalid_argument("set_csr: not a writable CSR");
  }

  /// Execute one instruction. Precondition: the machine is running.
  TraceEvent step() {
    if (state_ != HaltState::Running) throw std::logic_error("step: machine is not running");

    TraceEvent ev;
    ev.cycle = cycle_;
    ev.pc = pc_;

    if (pc_ % 4 != 0) return fault_event(ev, detail::hex_fault("misaligned pc", 0, pc_));
    if (!in_memory(pc_, 4)) return fault_event(ev, detail::hex_fault("instruction fetch outside memory", 0, pc_));
    const uint32_t word = read_word_raw(pc_);
    ev.raw = word;

    const DecodedInstr in = decode(word, cfg_.reg_count);
    ev.op = in.op;
    if (in.is_illegal()) return fault_event(ev, detail::hex_fault("illegal instruction", word, pc_));

    uint32_t next_pc = pc_ + 4;
    bool taken_transfer = false;
    const uint32_t rs1v = reg(in.rs1);
    const uint32_t rs2v = reg(in.rs2);

    switch (in.op) {
      case Mnemonic::Lui:
        write_rd(ev, in.rd, uint32_t(in.imm));
        break;
      case Mnemonic::Auipc:
        write_rd(ev, in.rd, pc_ + uint32_t(in.imm));
        break;

      case Mnemonic::Jal: {
        const uint32_t target = pc_ + uint32_t(in.imm);
        if (target % 4 != 0) return fault_event(ev, detail::hex_fault("misaligned jump target", word, pc_));
        write_rd(ev, in.rd, pc_ + 4);
        next_pc = target;
        taken_transfer = true;
        break;
      }
      case Mnemonic::Jalr: {
        const uint32_t target = (rs1v + uint32_t(in.imm)) & ~1u;
        if (target % 4 != 0) return fault_event(ev, detail::hex_fault("misaligned jump target", word, pc_));
        write_rd(ev, in.rd, pc_ + 4);
        next_pc = target;
        taken_transfer = true;
        break;
      }

      case Mnemonic::Beq:
      case Mnemonic::Bne:
      case Mnemonic::Blt:
      case Mnemonic::Bge:
      case Mnemonic::Bltu:
      case Mnemonic::Bgeu: {
        bool taken = false;
        switch (in.op) {
          case Mnemonic::Beq: taken = rs1v == rs2v; break;
          case Mnemonic::Bne: taken = rs1v != rs2v; break;
          case Mnemonic::Blt: taken = int32_t(rs1v) < int32_t(rs2v); break;
          case Mnemonic::Bge: taken = int32_t(rs1v) >= int32_t(rs2v); break;
          case Mnemonic::Bltu: taken = rs1v < rs2v; break;
          default: taken = rs1v >= rs2v; break;
        }
        if (taken) {
          const uint32_t target = pc_ + uint32_t(in.imm);
          if (target % 4 != 0)
            return fault_event(ev, detail::hex_fault("misaligned branch target", word, pc_));
          next_pc = target;
          taken_transfer = true;
        }
        break;
      }

      case Mnemonic::Lb:
      case Mnemonic::Lh:
      case Mnemonic::Lw:
      case Mnemonic::Lbu:
      case Mnemonic::Lhu: {
        const uint32_t addr = rs1v + uint32_t(in.imm);  // address generation is always exact
        ev.mem_access = true;
        ev.mem_addr = addr;
        uint32_t value = 0;
        if (const char* err = load_memory(in.op, addr, value))
          return fault_event(ev, detail::hex_fault(err, word, pc_));
        addr_hash_ = detail::fnv_mix(addr_hash_, addr);
        write_rd(ev, in.rd, value);
        break;
      }

      case Mnemonic::Sb:
      case Mnemonic::Sh:
      case Mnemonic::Sw: {
        const uint32_t addr = rs1v + uint32_t(in.imm);
        ev.mem_access = true;
        ev.mem_write = true;
        ev.mem_addr = addr;
        addr_hash_ = detail::fnv_mix(addr_hash_, addr);
        if (in.op == Mnemonic::Sw && addr == kMmioOutput) {
          output_.push_back(rs2v);
          break;
        }
        if (in.op == Mnemonic::Sw && addr == kMmioHalt) {
          state_ = HaltState::Halted;
          exit_code_ = rs2v;
          break;
        }
        if (const char* err = store_memory(in.op, addr, rs2v))
          return fault_event(ev, detail::hex_fault(err, word, pc_));
        break;
      }

      case Mnemonic::Fence:
        break;

      case Mnemonic::Ecall:
        return fault_event(ev, detail::hex_fault("ecall encountered", word, pc_));
      case Mnemonic::Ebreak:
        return fault_event(ev, detail::hex_fault("ebreak encountered", word, pc_));

      case Mnemonic::Csrrw:
      case Mnemonic::Csrrs:
      case Mnemonic::Csrrc:
      case Mnemonic::Csrrwi:
      case Mnemonic::Csrrsi:
      case Mnemonic::Csrrci: {
        const bool imm_variant = in.op == Mnemonic::Csrrwi || in.op == Mnemonic::Csrrsi ||
                                 in.op == Mnemonic::Csrrci;
        const uint32_t operand = imm_variant ? uint32_t(in.rs1) : rs1v;
        const bool write_op = in.op == Mnemonic::Csrrw || in.op == Mnemonic::Csrrwi;
        const bool writes = write_op || in.rs1 != 0;
        const CsrAccess access =
            csr_access(csrs_, in.op, uint16_t(in.imm), operand, writes, cycle_, instret_);
        if (access.trap) return fault_event(ev, detail::hex_fault("illegal CSR access", word, pc_));
        write_rd(ev, in.rd, access.old_value);
        break;
      }

      default: {  // register/immediate arithmetic
        const uint32_t operand2 = in.cls == InstrClass::I ? uint32_t(in.imm) : rs2v;
        const ExecResult r = execute_arith(in, rs1v, operand2, csrs_, slots_);
        if (r.fault) return fault_event(ev, detail::hex_fault(r.fault, word, pc_));
        ev.unit = r.unit;
        ev.slot = r.slot;
        ev.unit_active = true;
        write_rd(ev, in.rd, r.value);
        break;
      }
    }

    // Control-transfer instructions contribute their pc and destination to
    // the control-flow trace hash.
    if (in.op == Mnemonic::Jal || in.op == Mnemonic::Jalr ||
        (in.cls == InstrClass::B && !in.is_illegal())) {
      pc_hash_ = detail::fnv_mix(pc_hash_, pc_);
      pc_hash_ = detail::fnv_mix(pc_hash_, next_pc);
    }

    uint32_t cycles = 1;
    if (is_mul_class(in.op)) cycles += cfg_.latency.mul_cycles - 1;
    else if (is_div_class(in.op)) cycles += cfg_.latency.div_cycles - 1;
    if (taken_transfer) cycles += cfg_.latency.branch_penalty;

    cycle_ += cycles;
    instret_ += 1;
    retired_[unsigned(in.op)] += 1;
    if (taken_transfer) ++taken_transfers_;
    pc_ = next_pc;

    if (energy_sink_) emit_energy_event(in.op, ev, cycles);
    if (on_retire) on_retire(ev);
    return ev;
  }

  /// Step until the program halts, faults, or the cycle budget runs out.
  RunSummary run() {
    while (state_ == HaltState::Running) {
      if (cycle_ >= cfg_.max_cycles) {
        state_ = HaltState::TimedOut;
        fault_ = "cycle budget exceeded";
        break;
      }
      step();
    }
    RunSummary s;
    s.instret = instret_;
    s.cycle = cycle_;
    s.elapsed_s = double(cycle_) / cfg_.clock_hz;
    s.state = state_;
    s.exit_code = exit_code_;
    s.fault = fault_;
    s.pc_trace_hash = pc_hash_;
    s.addr_trace_hash = addr_hash_;
    return s;
  }

  // -- architectural state access ------------------------------------------

  uint32_t reg(unsigned index) const { return index == 0 ? 0 : regs_[index]; }
  void set_reg(unsigned index, uint32_t value) {
    if (index != 0 && index < cfg_.reg_count) regs_[index] = value;
  }
  uint32_t pc() const { return pc_; }
  void set_pc(uint32_t pc) { pc_ = pc; }
  CsrFile& csrs() { return csrs_; }
  const CsrFile& csrs() const { return csrs_; }
  CircuitSlotTable& slot_table() { return slots_; }
  uint64_t cycle() const { return cycle_; }
  uint64_t instret() const { return instret_; }
  HaltState state() const { return state_; }
  uint32_t exit_code() const { return exit_code_; }
  const std::string& fault_reason() const { return fault_; }
  const std::vector<uint32_t>& output() const { return output_; }
  const std::array<uint64_t, kMnemonicCount>& retired_counts() const { return retired_; }
  uint64_t taken_transfers() const { return taken_transfers_; }
  const MachineConfig& config() const { return cfg_; }

  uint32_t peek_word(uint32_t addr) const {
    if (addr % 4 != 0 || !in_memory(addr, 4)) throw std::out_of_range("peek_word: bad address");
    return read_word_raw(addr);
  }
  void poke_word(uint32_t addr, uint32_t value) {
    if (addr % 4 != 0 || !in_memory(addr, 4)) throw std::out_of_range("poke_word: bad address");
    for (int i = 0; i < 4; ++i) {
      mem_[addr - cfg_.mem_base + i] = uint8_t(value >> (8 * i));
      written_[addr - cfg_.mem_base + i] = true;
    }
  }

  void attach_energy_sink(EnergySink* sink) { energy_sink_ = sink; }
  std::function<void(const TraceEvent&)> on_retire;

  static constexpr bool is_mul_class(Mnemonic m) {
    return m == Mnemonic::Mul || m == Mnemonic::Mulh || m == Mnemonic::Mulhsu ||
           m == Mnemonic::Mulhu;
  }
  static constexpr bool is_div_class(Mnemonic m) {
    return m == Mnemonic::Div || m == Mnemonic::Divu || m == Mnemonic::Rem || m == Mnemonic::Remu;
  }

 private:
  void reset() {
    std::fill(mem_.begin(), mem_.end(), uint8_t(0));
    written_.assign(cfg_.mem_size, false);
    regs_.fill(0);
    pc_ = cfg_.mem_base;
    csrs_ = CsrFile{};
    cycle_ = 0;
    instret_ = 0;
    state_ = HaltState::Running;
    exit_code_ = 0;
    fault_.clear();
    output_.clear();
    retired_.fill(0);
    taken_transfers_ = 0;
    pc_hash_ = detail::kFnvOffset;
    addr_hash_ = detail::kFnvOffset;
  }

  bool in_memory(uint32_t addr, uint32_t len) const {
    return addr >= cfg_.mem_base &&
           uint64_t(addr) + len <= uint64_t(cfg_.mem_base) + cfg_.mem_size;
  }

  uint32_t read_word_raw(uint32_t addr) const {
    const size_t off = addr - cfg_.mem_base;
    return uint32_t(mem_[off]) | uint32_t(mem_[off + 1]) << 8 | uint32_t(mem_[off + 2]) << 16 |
           uint32_t(mem_[off + 3]) << 24;
  }

  const char* load_memory(Mnemonic op, uint32_t addr, uint32_t& value) const {
    const uint32_t size = op == Mnemonic::Lw ? 4 : (op == Mnemonic::Lh || op == Mnemonic::Lhu) ? 2 : 1;
    if (addr % size != 0) return "misaligned load";
    if (!in_memory(addr, size)) return "load outside memory";
    const size_t off = addr - cfg_.mem_base;
    for (uint32_t i = 0; i < size; ++i)
      if (!written_[off + i]) return "load of memory outside the loaded image";
    uint32_t raw = 0;
    for (uint32_t i = 0; i < size; ++i) raw |= uint32_t(mem_[off + i]) << (8 * i);
    switch (op) {
      case Mnemonic::Lb: value = uint32_t(int32_t(int8_t(raw))); break;
      case Mnemonic::Lh: value = uint32_t(int32_t(int16_t(raw))); break;
      default: value = raw; break;
    }
    return nullptr;
  }

  const char* store_memory(Mnemonic op, uint32_t addr, uint32_t value) {
    const uint32_t size = op == Mnemonic::Sw ? 4 : op == Mnemonic::Sh ? 2 : 1;
    if (addr % size != 0) return "misaligned store";
    if (!in_memory(addr, size)) return "store outside memory";
    const size_t off = addr - cfg_.mem_base;
    for (uint32_t i = 0; i < size; ++i) {
      mem_[off + i] = uint8_t(value >> (8 * i));
      written_[off + i] = true;
    }
    return nullptr;
  }

  void write_rd(TraceEvent& ev, uint8_t rd, uint32_t value) {
    ev.rd = rd;
    ev.rd_value = value;
    ev.rd_written = rd != 0;
    if (rd != 0) regs_[rd] = value;
  }

  TraceEvent fault_event(TraceEvent& ev, std::string reason) {
    state_ = HaltState::Faulted;
    fault_ = std::move(reason);
    return ev;
  }

  static constexpr OpClass classify(Mnemonic m) {
    switch (m) {
      case Mnemonic::Add: case Mnemonic::Addi: case Mnemonic::Sub:
        return OpClass::Add;
      case Mnemonic::And: case Mnemonic::Andi: case Mnemonic::Or: case Mnemonic::Ori:
      case Mnemonic::Xor: case Mnemonic::Xori:
        return OpClass::Logic;
      case Mnemonic::Sll: case Mnemonic::Slli: case Mnemonic::Srl: case Mnemonic::Srli:
      case Mnemonic::Sra: case Mnemonic::Srai:
        return OpClass::Shift;
      case Mnemonic::Slt: case Mnemonic::Slti: case Mnemonic::Sltu: case Mnemonic::Sltiu:
        return OpClass::Compare;
      case Mnemonic::Mul:
        return OpClass::Mul;
      case Mnemonic::Mulh: case Mnemonic::Mulhsu: case Mnemonic::Mulhu:
        return OpClass::Mulh;
      case Mnemonic::Div: case Mnemonic::Divu: case Mnemonic::Rem: case Mnemonic::Remu:
        return OpClass::Div;
      case Mnemonic::Lb: case Mnemonic::Lh: case Mnemonic::Lw: case Mnemonic::Lbu:
      case Mnemonic::Lhu:
        return OpClass::Load;
      case Mnemonic::Sb: case Mnemonic::Sh: case Mnemonic::Sw:
        return OpClass::Store;
      case Mnemonic::Beq: case Mnemonic::Bne: case Mnemonic::Blt: case Mnemonic::Bge:
      case Mnemonic::Bltu: case Mnemonic::Bgeu:
        return OpClass::Branch;
      case Mnemonic::Jal: case Mnemonic::Jalr:
        return OpClass::Jump;
      case Mnemonic::Csrrw: case Mnemonic::Csrrs: case Mnemonic::Csrrc: case Mnemonic::Csrrwi:
      case Mnemonic::Csrrsi: case Mnemonic::Csrrci:
        return OpClass::Csr;
      default:
        return OpClass::Other;
    }
  }

  void emit_energy_event(Mnemonic m, const TraceEvent& ev, uint32_t cycles) {
    EnergyEvent e;
    e.op_class = classify(m);
    e.cycles = cycles;
    const ApproxControlWord mw = csrs_.mul_control();
    const ApproxControlWord dw = csrs_.div_control();
    e.alu_slot = 0;  // single adder circuit, no switching
    e.mul_slot = mw.selected_slot();
    e.div_slot = dw.selected_slot();
    e.alu_kind = slots_.alu[e.alu_slot].kind;
    e.mul_kind = slots_.mul[e.mul_slot].kind;
    e.div_kind = slots_.div[e.div_slot].kind;
    e.mul_error_mask = uint8_t(mw.mul_config().error_mask);
    if (ev.unit_active) {
      switch (ev.unit) {
        case ExecUnit::Alu: e.exe_unit = EnergyUnit::Alu; break;
        case ExecUnit::Mul: e.exe_unit = EnergyUnit::Mul; break;
        case ExecUnit::Div: e.exe_unit = EnergyUnit::Div; break;
      }
      e.exe_slot = ev.slot;
      e.exe_kind = slots_.unit(ev.unit)[ev.slot].kind;
    } else if (e.op_class == OpClass::Branch) {
      e.exe_unit = EnergyUnit::Alu;  // branch comparison happens in the ALU
      e.exe_slot = e.alu_slot;
      e.exe_kind = e.alu_kind;
    } else {
      e.exe_unit = EnergyUnit::Other;
    }
    energy_sink_->accrue(e);
  }

  MachineConfig cfg_;
  std::vector<uint8_t> mem_;
  std::vector<bool> written_;
  CircuitSlotTable slots_;
  std::array<uint32_t, 32> regs_{};
  uint32_t pc_ = 0;
  CsrFile csrs_;
  uint64_t cycle_ = 0;
  uint64_t instret_ = 0;
  HaltState state_ = HaltState::Running;
  uint32_t exit_code_ = 0;
  std::string fault_;
  std::vector<uint32_t> output_;
  std::array<uint64_t, kMnemonicCount> retired_{};
  uint64_t taken_transfers_ = 0;
  uint64_t pc_hash_ = detail::kFnvOffset;
  uint64_t addr_hash_ = detail::kFnvOffset;
  EnergySink* energy_sink_ = nullptr;
};

}  // namespace axrv
