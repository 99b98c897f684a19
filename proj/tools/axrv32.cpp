// axrv32 — RV32IEM simulator with run-time-configurable approximate
// arithmetic. Subcommands: run, sweep-errors, compare, export.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "axrv/analysis/error_stats.hpp"
#include "axrv/energy/cost_model.hpp"
#include "axrv/energy/ledger.hpp"
#include "axrv/kernels/encoder.hpp"
#include "axrv/kernels/kernels.hpp"
#include "axrv/kernels/mix.hpp"
#include "axrv/sim/machine.hpp"

using namespace axrv;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string hex_word(uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "0x%08X", v);
  return buf;
}

std::string hex64(uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "0x%016llX", static_cast<unsigned long long>(v));
  return buf;
}

uint32_t parse_word(const std::string& text) {
  size_t used = 0;
  const unsigned long v = std::stoul(text, &used, 0);
  if (used != text.size() || v > 0xFFFFFFFFul)
    throw std::runtime_error("expected a 32-bit word, got '" + text + "'");
  return uint32_t(v);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

struct CsrPresets {
  std::optional<uint32_t> alucsr, mulcsr, divcsr;

  std::vector<std::pair<uint16_t, uint32_t>> entries() const {
    std::vector<std::pair<uint16_t, uint32_t>> v;
    if (alucsr) v.emplace_back(CsrFile::kAluCsr, *alucsr);
    if (mulcsr) v.emplace_back(CsrFile::kMulCsr, *mulcsr);
    if (divcsr) v.emplace_back(CsrFile::kDivCsr, *divcsr);
    return v;
  }
};

struct ProgramSource {
  std::string kernel;
  std::string bin_path;
  std::string ihex_path;
  uint32_t size = 0;
  uint64_t seed = 1;

  bool is_kernel() const { return !kernel.empty(); }

  std::string describe() const {
    if (is_kernel()) return kernel;
    return bin_path.empty() ? ihex_path : bin_path;
  }
};

EncodedProgram load_program(const ProgramSource& src) {
  if (src.is_kernel()) {
    const auto k = kernel_from_name(src.kernel);
    if (!k) throw std::runtime_error("unknown kernel '" + src.kernel + "'");
    return generate(KernelSpec{*k, src.size, src.seed});
  }
  EncodedProgram p;
  if (!src.bin_path.empty()) {
    std::ifstream in(src.bin_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + src.bin_path);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    p.words.assign((bytes.size() + 3) / 4, 0);
    for (size_t i = 0; i < bytes.size(); ++i)
      p.words[i / 4] |= uint32_t(uint8_t(bytes[i])) << (8 * (i % 4));
  } else {
    std::ifstream in(src.ihex_path);
    if (!in) throw std::runtime_error("cannot open " + src.ihex_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const IhexImage img = ihex_parse(ss.str());
    p.entry = img.base;
    p.words.assign((img.bytes.size() + 3) / 4, 0);
    for (size_t i = 0; i < img.bytes.size(); ++i)
      p.words[i / 4] |= uint32_t(img.bytes[i]) << (8 * (i % 4));
  }
  return p;
}

/// Append a CSR-writing prologue after the image and enter through it, so
/// the csrrw instructions are visible in the counters and trace.
void add_csr_prologue(EncodedProgram& p, const CsrPresets& presets) {
  const uint32_t prologue_base = uint32_t(p.words.size() * 4);
  Assembler a;
  for (const auto& [addr, value] : presets.entries()) {
    a.li32(5, value);
    a.emit(enc::csrrw(0, addr, 5));
  }
  const int32_t off = int32_t(p.entry) - int32_t(prologue_base + a.here() * 4);
  a.emit(enc::jal(0, off));
  p.words.insert(p.words.end(), a.words().begin(), a.words().end());
  p.entry = prologue_base;
}

struct RunOptions {
  CsrPresets presets;
  bool prologue_csr = false;
  std::string cost_model_path;
  std::string profile;
  std::optional<bool> gating;
  std::string trace_path;
  uint64_t max_cycles = 1ull << 32;
};

struct RunResult {
  RunSummary summary;
  std::vector<uint32_t> outputs;
  InstructionMix mix;
  std::optional<EnergyReport> energy;
};

std::optional<CostModel> maybe_load_model(const std::string& path, const std::string& profile,
                                          const std::string& kernel_name) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cost model " + path);
  json doc;
  in >> doc;
  std::string selected = profile;
  if (selected.empty() && doc.contains("profiles")) {
    if (kernel_name.empty())
      throw std::runtime_error("cost model has profiles; --profile is required");
    selected = kernel_name;
  }
  return load_cost_model(doc, selected);
}

RunResult run_program(EncodedProgram program, const RunOptions& opt,
                      const std::string& kernel_name) {
  MachineConfig cfg;
  cfg.max_cycles = opt.max_cycles;
  Machine m(cfg);

  if (opt.prologue_csr) add_csr_prologue(program, opt.presets);
  m.load_binary(program.bytes());
  m.set_pc(program.entry);
  if (!opt.prologue_csr)
    for (const auto& [addr, value] : opt.presets.entries()) m.set_csr(addr, value);

  std::optional<CostModel> model = maybe_load_model(opt.cost_model_path, opt.profile, kernel_name);
  if (model && opt.gating) model->gating = *opt.gating;
  std::optional<EnergyLedger> ledger;
  if (model) {
    ledger.emplace(*model);
    m.attach_energy_sink(&*ledger);
  }

  std::ofstream trace;
  if (!opt.trace_path.empty()) {
    trace.open(opt.trace_path);
    if (!trace) throw std::runtime_error("cannot open trace file " + opt.trace_path);
    m.on_retire = [&trace](const TraceEvent& ev) { trace << format_trace_line(ev) << "\n"; };
  }

  RunResult r;
  r.summary = m.run();
  r.outputs = m.output();
  r.mix = instruction_mix(m.retired_counts());
  if (ledger && r.summary.instret > 0)
    r.energy = ledger->finalize(r.summary.instret, r.summary.cycle);
  return r;
}

ordered_json mix_json(const InstructionMix& mix) {
  ordered_json j;
  j["add_class"] = mix.add_class;
  j["mul"] = mix.mul;
  j["mulh"] = mix.mulh;
  j["div_class"] = mix.div_class;
  j["load"] = mix.load;
  j["store"] = mix.store;
  j["branch"] = mix.branch;
  j["other"] = mix.other;
  j["total"] = mix.total();
  j["mul_share_of_arith_percent"] = mix.mul_share_of_arith_percent();
  j["reference"] = {{"avg_instruction_count", kReferenceAvgInstructionCount},
                    {"avg_mul_count", kReferenceAvgMulCount},
                    {"mul_share_of_arith_percent", kReferenceMulShareOfArithPercent}};
  return j;
}

ordered_json summary_json(const RunSummary& s) {
  ordered_json j;
  j["state"] = halt_state_name(s.state);
  j["exit_code"] = s.exit_code;
  if (!s.fault.empty()) j["fault"] = s.fault;
  j["instret"] = s.instret;
  j["cycle"] = s.cycle;
  j["elapsed_s"] = s.elapsed_s;
  j["pc_trace_hash"] = hex64(s.pc_trace_hash);
  j["addr_trace_hash"] = hex64(s.addr_trace_hash);
  return j;
}

int cmd_run(const ProgramSource& src, const RunOptions& opt, const std::string& format,
            const std::string& out_path) {
  const std::string kernel_name = src.is_kernel() ? src.kernel : "";
  const RunResult r = run_program(load_program(src), opt, kernel_name);

  std::string text;
  if (format == "json") {
    ordered_json j;
    j["program"] = src.describe();
    if (src.is_kernel()) {
      j["size"] = src.size ? src.size : kernel_default_size(*kernel_from_name(src.kernel));
      j["seed"] = src.seed;
    }
    ordered_json presets;
    if (opt.presets.alucsr) presets["alucsr"] = hex_word(*opt.presets.alucsr);
    if (opt.presets.mulcsr) presets["mulcsr"] = hex_word(*opt.presets.mulcsr);
    if (opt.presets.divcsr) presets["divcsr"] = hex_word(*opt.presets.divcsr);
    if (!presets.empty()) j["csr_presets"] = presets;
    j["run"] = summary_json(r.summary);
    j["outputs"] = r.outputs;
    j["instruction_mix"] = mix_json(r.mix);
    if (r.energy) j["energy"] = r.energy->to_json();
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "program,state,exit_code,instret,cycle,elapsed_s,outputs\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%s,%s,%u,%llu,%llu,%.9e,%zu\n",
                  src.describe().c_str(), halt_state_name(r.summary.state), r.summary.exit_code,
                  static_cast<unsigned long long>(r.summary.instret),
                  static_cast<unsigned long long>(r.summary.cycle), r.summary.elapsed_s,
                  r.outputs.size());
    os << line;
    if (r.energy) os << EnergyReport::csv_header() << "\n" << r.energy->csv_row() << "\n";
    text = os.str();
  }
  write_text(out_path, text);
  return r.summary.state == HaltState::Halted ? 0 : 1;
}

int cmd_sweep(const std::string& out_path, unsigned threads) {
  const auto rows = sweep_configs(threads ? threads : std::thread::hardware_concurrency());
  std::ostringstream table;
  write_sweep_table(table, rows);
  write_text(out_path, table.str());

  double min_mred = 1e9, max_mred = 0, min_er = 1e9, max_er = 0;
  for (const ErrorStats& r : rows) {
    if (r.config == 0x7F) continue;
    min_mred = std::min(min_mred, r.mred);
    max_mred = std::max(max_mred, r.mred);
    min_er = std::min(min_er, r.er);
    max_er = std::max(max_er, r.er);
  }
  const ErrorStats& at7e = rows[0x7E];
  std::fprintf(stderr,
               "sweep: 128 configurations\n"
               "  mask 0x7E: ER %.2f%%, MRED %.4f%% (reference operating point: ER 36.2%%, MRED 0.85%%)\n"
               "  non-trivial MRED range %.4f%% - %.4f%% (reference band 0.85 - 8.94)\n"
               "  non-trivial ER range %.2f%% - %.2f%% (reference band 36.16 - 65.06)\n",
               at7e.er * 100, at7e.mred * 100, min_mred * 100, max_mred * 100, min_er * 100,
               max_er * 100);
  return 0;
}

struct CompareRow {
  std::string kernel;
  EnergyReport accurate;
  EnergyReport approx;
  OutputError quality;
  double mul_improvement = 0, exe_improvement = 0, total_improvement = 0;
};

int cmd_compare(const std::vector<std::string>& kernel_names, const std::string& accurate_model,
                const std::string& approx_model, uint32_t mulcsr, uint64_t seed,
                const std::string& format, const std::string& out_path) {
  std::vector<CompareRow> rows;
  std::vector<std::pair<EnergyReport, EnergyReport>> pairs;

  for (const std::string& name : kernel_names) {
    ProgramSource src;
    src.kernel = name;
    src.seed = seed;

    RunOptions acc_opt;
    acc_opt.cost_model_path = accurate_model;
    const RunResult acc = run_program(load_program(src), acc_opt, name);
    if (acc.summary.state != HaltState::Halted)
      throw std::runtime_error("accurate run of " + name + " failed: " + acc.summary.fault);

    RunOptions apx_opt;
    apx_opt.cost_model_path = approx_model;
    apx_opt.presets.mulcsr = mulcsr;
    const RunResult apx = run_program(load_program(src), apx_opt, name);
    if (apx.summary.state != HaltState::Halted)
      throw std::runtime_error("approximate run of " + name + " failed: " + apx.summary.fault);

    CompareRow row;
    row.kernel = name;
    row.accurate = *acc.energy;
    row.approx = *apx.energy;
    std::vector<int64_t> ref, cand;
    for (uint32_t v : acc.outputs) ref.push_back(int64_t(int32_t(v)));
    for (uint32_t v : apx.outputs) cand.push_back(int64_t(int32_t(v)));
    row.quality = app_output_error(ref, cand);
    row.mul_improvement = improvement_percent(row.accurate, row.approx, Scope::Mul);
    row.exe_improvement = improvement_percent(row.accurate, row.approx, Scope::Exe);
    row.total_improvement = improvement_percent(row.accurate, row.approx, Scope::Total);
    pairs.emplace_back(row.accurate, row.approx);
    rows.push_back(std::move(row));
  }

  const ImprovementSummary avg = summary_across_apps(pairs);

  std::string text;
  if (format == "json") {
    ordered_json j;
    j["mulcsr"] = hex_word(mulcsr);
    j["seed"] = seed;
    ordered_json apps = ordered_json::array();
    for (const CompareRow& r : rows) {
      ordered_json a;
      a["kernel"] = r.kernel;
      a["accurate_pj_per_instr"] = r.accurate.pj_per_instr;
      a["approx_pj_per_instr"] = r.approx.pj_per_instr;
      a["improvement_percent"] = {{"mul", r.mul_improvement},
                                  {"exe", r.exe_improvement},
                                  {"total", r.total_improvement}};
      a["output_error"] = {{"er", r.quality.er},
                           {"mred", r.quality.mred},
                           {"mean_ed", r.quality.mean_ed},
                           {"max_ed", r.quality.max_ed}};
      a["accurate"] = r.accurate.to_json();
      a["approx"] = r.approx.to_json();
      apps.push_back(std::move(a));
    }
    j["apps"] = std::move(apps);
    j["averages_percent"] = {{"mul", avg.avg_mul_percent},
                             {"exe", avg.avg_exe_percent},
                             {"total", avg.avg_total_percent}};
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "kernel,acc_pj_per_instr,apx_pj_per_instr,mul_improvement_pct,exe_improvement_pct,"
          "total_improvement_pct,output_er,output_mred,output_max_ed\n";
    char line[512];
    for (const CompareRow& r : rows) {
      std::snprintf(line, sizeof(line), "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.9f,%.9f,%llu\n",
                    r.kernel.c_str(), r.accurate.pj_per_instr, r.approx.pj_per_instr,
                    r.mul_improvement, r.exe_improvement, r.total_improvement, r.quality.er,
                    r.quality.mred, static_cast<unsigned long long>(r.quality.max_ed));
      os << line;
    }
    std::snprintf(line, sizeof(line), "average,,,%.6f,%.6f,%.6f,,,\n", avg.avg_mul_percent,
                  avg.avg_exe_percent, avg.avg_total_percent);
    os << line;
    text = os.str();
  }
  write_text(out_path, text);
  return 0;
}

int cmd_export(const std::string& kernel, uint32_t size, uint64_t seed, const std::string& format,
               const std::string& out_path) {
  const auto k = kernel_from_name(kernel);
  if (!k) throw std::runtime_error("unknown kernel '" + kernel + "'");
  const EncodedProgram p = generate(KernelSpec{*k, size, seed});
  if (format == "ihex") {
    write_text(out_path, p.to_ihex());
  } else {
    const auto bytes = p.bytes();
    if (out_path.empty() || out_path == "-")
      throw std::runtime_error("binary export requires --out");
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RV32IEM simulator with CSR-controlled approximate arithmetic"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "load a program, run it, report counters and energy");
  ProgramSource src;
  RunOptions opt;
  std::string alucsr_s, mulcsr_s, divcsr_s, gating_s, format = "json", out_path;
  run->add_option("--kernel", src.kernel, "built-in kernel name");
  run->add_option("--bin", src.bin_path, "raw little-endian program image");
  run->add_option("--ihex", src.ihex_path, "Intel HEX program image");
  run->add_option("--size", src.size, "kernel size parameter (0 = default)");
  run->add_option("--seed", src.seed, "kernel input seed");
  run->add_option("--alucsr", alucsr_s, "alucsr preset (hex word)");
  run->add_option("--mulcsr", mulcsr_s, "mulcsr preset (hex word)");
  run->add_option("--divcsr", divcsr_s, "divcsr preset (hex word)");
  run->add_flag("--prologue-csr", opt.prologue_csr,
                "install CSR presets with real csrrw instructions instead of pre-applying");
  run->add_option("--cost-model", opt.cost_model_path, "cost model JSON");
  run->add_option("--profile", opt.profile, "cost model profile name");
  run->add_option("--gating", gating_s, "override event-mode gating (on|off)")
      ->check(CLI::IsMember({"on", "off"}));
  run->add_option("--report", format, "report format")->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--out", out_path, "report file (default stdout)");
  run->add_option("--trace", opt.trace_path, "write a retirement trace to this file");
  run->add_option("--max-cycles", opt.max_cycles, "cycle budget");

  // sweep-errors
  auto* sweep = app.add_subcommand("sweep-errors",
                                   "exhaustive ER/MRED table over all 128 error configurations");
  std::string sweep_out;
  unsigned sweep_threads = 0;
  sweep->add_option("--out", sweep_out, "table file (default stdout)");
  sweep->add_option("--threads", sweep_threads, "worker threads (default: hardware)");

  // compare
  auto* compare = app.add_subcommand(
      "compare", "run kernels in accurate and approximate mode and report improvements");
  std::string kernels_arg = "all", acc_model, apx_model, cmp_mulcsr_s = "0x007E0003";
  std::string cmp_format = "json", cmp_out;
  uint64_t cmp_seed = 1;
  compare->add_option("--kernels", kernels_arg, "comma-separated kernel list or 'all'");
  compare->add_option("--accurate-model", acc_model, "cost model for the accurate runs")
      ->required();
  compare->add_option("--approx-model", apx_model, "cost model for the approximate runs")
      ->required();
  compare->add_option("--mulcsr", cmp_mulcsr_s, "mulcsr preset for the approximate runs");
  compare->add_option("--seed", cmp_seed, "kernel input seed");
  compare->add_option("--report", cmp_format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  compare->add_option("--out", cmp_out, "report file (default stdout)");

  // export
  auto* exp = app.add_subcommand("export", "write a generated kernel as raw binary or Intel HEX");
  std::string exp_kernel, exp_format = "bin", exp_out;
  uint32_t exp_size = 0;
  uint64_t exp_seed = 1;
  exp->add_option("--kernel", exp_kernel, "kernel name")->required();
  exp->add_option("--size", exp_size, "kernel size parameter (0 = default)");
  exp->add_option("--seed", exp_seed, "kernel input seed");
  exp->add_option("--format", exp_format, "bin|ihex")->check(CLI::IsMember({"bin", "ihex"}));
  exp->add_option("--out", exp_out, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const int sources = int(!src.kernel.empty()) + int(!src.bin_path.empty()) +
                          int(!src.ihex_path.empty());
      if (sources != 1)
        throw std::runtime_error("exactly one of --kernel/--bin/--ihex is required");
      if (!alucsr_s.empty()) opt.presets.alucsr = parse_word(alucsr_s);
      if (!mulcsr_s.empty()) opt.presets.mulcsr = parse_word(mulcsr_s);
      if (!divcsr_s.empty()) opt.presets.divcsr = parse_word(divcsr_s);
      if (!gating_s.empty()) opt.gating = gating_s == "on";
      return cmd_run(src, opt, format, out_path);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_out, sweep_threads);
    if (compare->parsed()) {
      std::vector<std::string> names;
      if (kernels_arg == "all") {
        for (const Kernel k : kAllKernels) names.emplace_back(kernel_name(k));
      } else {
        std::stringstream ss(kernels_arg);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) names.push_back(item);
      }
      if (names.empty()) throw std::runtime_error("no kernels selected");
      return cmd_compare(names, acc_model, apx_model, parse_word(cmp_mulcsr_s), cmp_seed,
                         cmp_format, cmp_out);
    }
    if (exp->parsed()) return cmd_export(exp_kernel, exp_size, exp_seed, exp_format, exp_out);
  } catch (const std::exception& e) {
    std::cerr << "axrv32: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
