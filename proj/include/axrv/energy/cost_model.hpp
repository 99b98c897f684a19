#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "axrv/energy/event.hpp"

namespace axrv {

/// Two costing modes:
///  - "table": per-unit average power in mW, keyed by (unit, active slot
///    kind). Reproduces whole-run average-power tables exactly.
///  - "event": per-op energy in pJ per (unit, slot, op class) plus per-slot
///    leakage power, with optional gating of unselected slots. Makes slot
///    switching and the multiplier's error mask observable in the totals.
enum class CostModelMode : uint8_t { Table, Event };

struct SlotCost {
  SlotKind kind = SlotKind::Accurate;
  double leakage_mw = 0.0;
  std::map<std::string, double> op_energy_pj;  // keyed by op-class name, "any" fallback
  bool mask_scaled = false;  // per-op energy follows the mask-dependent power estimate
};

struct UnitCost {
  std::array<double, 2> table_power_mw{0.0, 0.0};  // indexed by SlotKind
  std::vector<SlotCost> slots;
};

struct CostModel {
  CostModelMode mode = CostModelMode::Table;
  double clock_hz = 500e6;
  bool gating = true;
  std::string profile;
  std::array<UnitCost, kEnergyUnitCount> units{};

  double table_power_mw(EnergyUnit u, SlotKind k) const {
    return units[unsigned(u)].table_power_mw[unsigned(k)];
  }
};

namespace detail {

inline std::optional<EnergyUnit> unit_from_name(const std::string& name) {
  for (unsigned u = 0; u < kEnergyUnitCount; ++u)
    if (name == energy_unit_name(EnergyUnit(u))) return EnergyUnit(u);
  return std::nullopt;
}

// Power values may be JSON numbers or decimal strings (tables transcribed
// verbatim keep their printed form).
inline double cost_number(const nlohmann::json& v, const char* what) {
  double d = 0.0;
  if (v.is_number()) {
    d = v.get<double>();
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    size_t used = 0;
    try {
      d = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("cost model: bad numeric string for ") + what);
    }
    if (used != s.size())
      throw std::invalid_argument(std::string("cost model: bad numeric string for ") + what);
  } else {
    throw std::invalid_argument(std::string("cost model: expected a number for ") + what);
  }
  if (d < 0.0) throw std::invalid_argument(std::string("cost model: negative value for ") + what);
  return d;
}

inline void apply_table_entry(UnitCost& unit, const nlohmann::json& entry, const std::string& name) {
  if (entry.is_object()) {
    if (entry.contains("accurate"))
      unit.table_power_mw[unsigned(SlotKind::Accurate)] = cost_number(entry["accurate"], name.c_str());
    if (entry.contains("approximate"))
      unit.table_power_mw[unsigned(SlotKind::Approximate)] =
          cost_number(entry["approximate"], name.c_str());
  } else {
    const double p = cost_number(entry, name.c_str());
    unit.table_power_mw[unsigned(SlotKind::Accurate)] = p;
    unit.table_power_mw[unsigned(SlotKind::Approximate)] = p;
  }
}

inline void apply_event_entry(UnitCost& unit, const nlohmann::json& entry, const std::string& name) {
  if (!entry.is_object() || !entry.contains("slots") || !entry["slots"].is_array() ||
      entry["slots"].empty())
    throw std::invalid_argument("cost model: event-mode unit " + name + " needs a slots array");
  unit.slots.clear();
  for (const auto& js : entry["slots"]) {
    SlotCost slot;
    const std::string kind = js.value("kind", "accurate");
    if (kind == "accurate") slot.kind = SlotKind::Accurate;
    else if (kind == "approximate") slot.kind = SlotKind::Approximate;
    else throw std::invalid_argument("cost model: unknown slot kind '" + kind + "'");
    if (js.contains("leakage_mw")) slot.leakage_mw = cost_number(js["leakage_mw"], name.c_str());
    slot.mask_scaled = js.value("mask_scaled", false);
    if (js.contains("op_energy_pj")) {
      if (!js["op_energy_pj"].is_object())
        throw std::invalid_argument("cost model: op_energy_pj must map op classes to pJ");
      for (const auto& [cls, v] : js["op_energy_pj"].items())
        slot.op_energy_pj[cls] = cost_number(v, name.c_str());
    }
    unit.slots.push_back(std::move(slot));
  }
}

}  // namespace detail

/// Parse and validate a cost-model document. When the document carries
/// per-application `profiles`, `profile` selects one; its unit entries
/// overlay the shared `units` table.
inline CostModel load_cost_model(const nlohmann::json& doc, const std::string& profile = "") {
  if (!doc.is_object() || doc.empty()) throw std::invalid_argument("cost model: empty document");
  CostModel model;

  const std::string mode = doc.value("mode", "");
  if (mode == "table") model.mode = CostModelMode::Table;
  else if (mode == "event") model.mode = CostModelMode::Event;
  else throw std::invalid_argument("cost model: mode must be \"table\" or \"event\"");

  if (!doc.contains("clock_hz")) throw std::invalid_argument("cost model: clock_hz is required");
  model.clock_hz = detail::cost_number(doc["clock_hz"], "clock_hz");
  if (model.clock_hz <= 0) throw std::invalid_argument("cost model: clock_hz must be positive");
  model.gating = doc.value("gating", true);

  std::array<bool, kEnergyUnitCount> defined{};
  const auto apply_units = [&](const nlohmann::json& units) {
    if (!units.is_object()) throw std::invalid_argument("cost model: units must be an object");
    for (const auto& [name, entry] : units.items()) {
      const auto unit = detail::unit_from_name(name);
      if (!unit) throw std::invalid_argument("cost model: unknown unit '" + name + "'");
      if (model.mode == CostModelMode::Table)
        detail::apply_table_entry(model.units[unsigned(*unit)], entry, name);
      else
        detail::apply_event_entry(model.units[unsigned(*unit)], entry, name);
      defined[unsigned(*unit)] = true;
    }
  };

  if (doc.contains("units")) apply_units(doc["units"]);
  if (doc.contains("profiles")) {
    if (profile.empty())
      throw std::invalid_argument("cost model: document has profiles; a profile name is required");
    if (!doc["profiles"].contains(profile))
      throw std::invalid_argument("cost model: no profile named '" + profile + "'");
    apply_units(doc["profiles"][profile]);
    model.profile = profile;
  } else if (!profile.empty()) {
    throw std::invalid_argument("cost model: document has no profiles");
  }

  for (unsigned u = 0; u < kEnergyUnitCount; ++u)
    if (!defined[u])
      throw std::invalid_argument(std::string("cost model: missing unit ") +
                                  energy_unit_name(EnergyUnit(u)));
  return model;
}

inline CostModel load_cost_model_file(const std::string& path, const std::string& profile = "") {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cost model: cannot open " + path);
  nlohmann::json doc;
  in >> doc;
  return load_cost_model(doc, profile);
}

}  // namespace axrv
