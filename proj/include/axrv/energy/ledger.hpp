#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "axrv/analysis/error_stats.hpp"
#include "axrv/energy/cost_model.hpp"
#include "axrv/energy/event.hpp"

namespace axrv {

/// Finalized energy accounting for one run.
struct EnergyReport {
  double elapsed_s = 0.0;
  uint64_t instret = 0;
  uint64_t cycles = 0;
  double total_energy_pj = 0.0;
  double pj_per_instr = 0.0;
  std::map<std::string, double> unit_energy_pj;
  std::map<std::string, double> slot_energy_pj;  // "UNIT[slot]" keys, event mode only
  std::map<std::string, double> unit_power_mw;
  double exe_power_mw = 0.0;
  double total_power_mw = 0.0;
  double exe_share = 0.0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["elapsed_s"] = elapsed_s;
    j["instret"] = instret;
    j["cycles"] = cycles;
    j["total_energy_pj"] = total_energy_pj;
    j["pj_per_instr"] = pj_per_instr;
    j["unit_energy_pj"] = unit_energy_pj;
    if (!slot_energy_pj.empty()) j["slot_energy_pj"] = slot_energy_pj;
    j["unit_power_mw"] = unit_power_mw;
    j["exe_power_mw"] = exe_power_mw;
    j["total_power_mw"] = total_power_mw;
    j["exe_share"] = exe_share;
    return j;
  }

  static std::string csv_header() {
    return "instret,cycles,elapsed_s,total_energy_pj,pj_per_instr,"
           "power_MUL_mw,power_ALU_mw,power_DIV_mw,power_IFID_mw,power_MEMWB_mw,power_other_mw,"
           "exe_power_mw,total_power_mw,exe_share";
  }

  std::string csv_row() const {
    char buf[512];
    const auto p = [&](const char* unit) {
      const auto it = unit_power_mw.find(unit);
      return it == unit_power_mw.end() ? 0.0 : it->second;
    };
    std::snprintf(buf, sizeof(buf),
                  "%llu,%llu,%.9e,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f",
                  static_cast<unsigned long long>(instret), static_cast<unsigned long long>(cycles),
                  elapsed_s, total_energy_pj, pj_per_instr, p("MUL"), p("ALU"), p("DIV"), p("IFID"),
                  p("MEMWB"), p("other"), exe_power_mw, total_power_mw, exe_share);
    return buf;
  }
};

/// Accumulates energy events against a cost model.
///
/// Table mode: every unit draws its (unit, active-slot-kind) average power
/// for the duration of every event, so per-unit average power over a run
/// equals the table value.
///
/// Event mode: the working unit's selected slot is charged its per-op
/// energy (IF/ID and MEM/WB are charged per retired op as well); every
/// modeled slot leaks for the event's duration unless gating switches
/// unselected slots off.
class EnergyLedger final : public EnergySink {
 public:
  explicit EnergyLedger(CostModel model) : model_(std::move(model)) {}

  void accrue(const EnergyEvent& e) override {
    const double dt_pj_per_mw = 1e9 * double(e.cycles) / model_.clock_hz;
    if (model_.mode == CostModelMode::Table) {
      for (unsigned u = 0; u < kEnergyUnitCount; ++u) {
        const SlotKind kind = active_kind(EnergyUnit(u), e);
        add(EnergyUnit(u), selected_slot(EnergyUnit(u), e),
            model_.units[u].table_power_mw[unsigned(kind)] * dt_pj_per_mw);
      }
      return;
    }

    // Per-op switching energy: the producing unit plus the front end and
    // the memory/write-back stage.
    charge_op(e.exe_unit, e.exe_slot, e);
    if (e.exe_unit != EnergyUnit::IfId) charge_op(EnergyUnit::IfId, 0, e);
    if (e.exe_unit != EnergyUnit::MemWb) charge_op(EnergyUnit::MemWb, 0, e);

    // Leakage of every modeled slot; gating zeroes unselected slots.
    for (unsigned u = 0; u < kEnergyUnitCount; ++u) {
      const auto& slots = model_.units[u].slots;
      for (unsigned s = 0; s < slots.size(); ++s) {
        if (model_.gating && s != selected_slot(EnergyUnit(u), e)) continue;
        add(EnergyUnit(u), uint8_t(s), slots[s].leakage_mw * dt_pj_per_mw);
      }
    }
  }

  EnergyReport finalize(uint64_t instret, uint64_t cycles) const {
    if (instret == 0) throw std::invalid_argument("finalize: no retired instructions");
    EnergyReport r;
    r.instret = instret;
    r.cycles = cycles;
    r.elapsed_s = double(cycles) / model_.clock_hz;
    for (unsigned u = 0; u < kEnergyUnitCount; ++u) {
      const std::string name = energy_unit_name(EnergyUnit(u));
      r.unit_energy_pj[name] = unit_energy_pj_[u];
      r.total_energy_pj += unit_energy_pj_[u];
      if (model_.mode == CostModelMode::Event) {
        for (unsigned s = 0; s < 4; ++s) {
          if (slot_used_[u][s]) {
            char key[24];
            std::snprintf(key, sizeof(key), "%s[%u]", name.c_str(), s);
            r.slot_energy_pj[key] = slot_energy_pj_[u][s];
          }
        }
      }
    }
    r.pj_per_instr = r.total_energy_pj / double(instret);
    if (r.elapsed_s > 0) {
      for (const auto& [name, e] : r.unit_energy_pj)
        r.unit_power_mw[name] = e * 1e-9 / r.elapsed_s;
      r.exe_power_mw = r.unit_power_mw["MUL"] + r.unit_power_mw["ALU"] + r.unit_power_mw["DIV"];
      r.total_power_mw = r.total_energy_pj * 1e-9 / r.elapsed_s;
      if (r.total_power_mw > 0) r.exe_share = r.exe_power_mw / r.total_power_mw;
    }
    return r;
  }

  const CostModel& model() const { return model_; }

  /// Per-slot accumulated energy (event mode), for gating diagnostics.
  double slot_energy_pj(EnergyUnit u, unsigned slot) const {
    return slot_energy_pj_[unsigned(u)][slot];
  }

 private:
  static uint8_t selected_slot(EnergyUnit u, const EnergyEvent& e) {
    switch (u) {
      case EnergyUnit::Alu: return e.alu_slot;
      case EnergyUnit::Mul: return e.mul_slot;
      case EnergyUnit::Div: return e.div_slot;
      default: return 0;
    }
  }

  static SlotKind active_kind(EnergyUnit u, const EnergyEvent& e) {
    switch (u) {
      case EnergyUnit::Alu: return e.alu_kind;
      case EnergyUnit::Mul: return e.mul_kind;
      case EnergyUnit::Div: return e.div_kind;
      default: return SlotKind::Accurate;
    }
  }

  void charge_op(EnergyUnit u, uint8_t slot, const EnergyEvent& e) {
    const auto& slots = model_.units[unsigned(u)].slots;
    if (slot >= slots.size())
      throw std::out_of_range(std::string("energy: no cost entry for slot of unit ") +
                              energy_unit_name(u));
    const SlotCost& cost = slots[slot];
    double pj = 0.0;
    if (cost.mask_scaled) {
      pj = power_estimate_uw(MulConfig{e.mul_error_mask, 0}) * 1e6 * double(e.cycles) /
           model_.clock_hz;
    } else {
      auto it = cost.op_energy_pj.find(op_class_name(e.op_class));
      if (it == cost.op_energy_pj.end()) it = cost.op_energy_pj.find("any");
      if (it != cost.op_energy_pj.end()) pj = it->second;
    }
    add(u, slot, pj);
  }

  void add(EnergyUnit u, uint8_t slot, double pj) {
    unit_energy_pj_[unsigned(u)] += pj;
    slot_energy_pj_[unsigned(u)][slot] += pj;
    slot_used_[unsigned(u)][slot] = true;
  }

  CostModel model_;
  std::array<double, kEnergyUnitCount> unit_energy_pj_{};
  std::array<std::array<double, 4>, kEnergyUnitCount> slot_energy_pj_{};
  std::array<std::array<bool, 4>, kEnergyUnitCount> slot_used_{};
};

enum class Scope : uint8_t { Total, Exe, Mul };

inline double scope_power_mw(const EnergyReport& r, Scope scope) {
  switch (scope) {
    case Scope::Total: return r.total_power_mw;
    case Scope::Exe: return r.exe_power_mw;
    case Scope::Mul: {
      const auto it = r.unit_power_mw.find("MUL");
      return it == r.unit_power_mw.end() ? 0.0 : it->second;
    }
  }
  return 0.0;
}

/// Relative power saving of the approximate run, in percent of the
/// accurate run's scoped power.
inline double improvement_percent(const EnergyReport& accurate, const EnergyReport& approx,
                                  Scope scope) {
  const double pa = scope_power_mw(accurate, scope);
  if (pa == 0.0) throw std::invalid_argument("improvement: accurate scope power is zero");
  return 100.0 * (pa - scope_power_mw(approx, scope)) / pa;
}

struct ImprovementSummary {
  double avg_total_percent = 0.0;
  double avg_exe_percent = 0.0;
  double avg_mul_percent = 0.0;
};

/// Arithmetic mean of per-application improvements for each scope.
inline ImprovementSummary summary_across_apps(
    std::span<const std::pair<EnergyReport, EnergyReport>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("summary_across_apps: no report pairs");
  ImprovementSummary s;
  for (const auto& [accurate, approx] : pairs) {
    s.avg_total_percent += improvement_percent(accurate, approx, Scope::Total);
    s.avg_exe_percent += improvement_percent(accurate, approx, Scope::Exe);
    s.avg_mul_percent += improvement_percent(accurate, approx, Scope::Mul);
  }
  const double n = double(pairs.size());
  s.avg_total_percent /= n;
  s.avg_exe_percent /= n;
  s.avg_mul_percent /= n;
  return s;
}

}  // namespace axrv
