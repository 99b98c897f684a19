#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "axrv/arith/multiplier.hpp"

namespace axrv {

/// Exhaustive accuracy characterization of one multiplier configuration,
/// derived from all 65,536 8-bit input pairs. ER counts every pair,
/// including zero operands (those are always error-free by the
/// non-propagation property); MRED averages over pairs with a nonzero
/// exact product.
struct ErrorStats {
  uint32_t config = 0;
  double er = 0.0;
  double mred = 0.0;
  double mean_ed = 0.0;
  uint32_t max_ed = 0;
  double power_estimate_uw = 0.0;
};

inline constexpr double kMulPowerFloorUw = 70.2;
inline constexpr double kMulPowerCeilUw = 101.3;

/// Dynamic-power estimate of the 8x8 multiplier: linear in the number of
/// accurate error lines, spanning the circuit's characterized power range
/// (all-approximate floor to all-accurate ceiling).
inline double power_estimate_uw(MulConfig cfg) {
  const int accurate_bits = std::popcount(cfg.error_mask & 0x7Fu);
  return kMulPowerFloorUw +
         (kMulPowerCeilUw - kMulPowerFloorUw) * double(accurate_bits) / double(kMulControllableBits);
}

inline ErrorStats error_stats_8x8(MulConfig cfg) {
  if (cfg.truncation != 0)
    throw std::invalid_argument("error_stats_8x8: sweep characterizes error masks only (truncation must be 0)");
  uint64_t mismatches = 0;
  uint64_t ed_sum = 0;
  uint32_t max_ed = 0;
  double red_sum = 0.0;
  uint64_t nonzero = 0;
  for (uint32_t a = 0; a < 256; ++a) {
    for (uint32_t b = 0; b < 256; ++b) {
      const uint32_t exact = a * b;
      const uint32_t approx = approx_mul8(uint8_t(a), uint8_t(b), cfg);
      const uint32_t ed = approx > exact ? approx - exact : exact - approx;
      if (ed != 0) ++mismatches;
      ed_sum += ed;
      if (ed > max_ed) max_ed = ed;
      if (exact != 0) {
        red_sum += double(ed) / double(exact);
        ++nonzero;
      }
    }
  }
  ErrorStats stats;
  stats.config = cfg.error_mask & 0x7Fu;
  stats.er = double(mismatches) / 65536.0;
  stats.mred = red_sum / double(nonzero);
  stats.mean_ed = double(ed_sum) / 65536.0;
  stats.max_ed = max_ed;
  stats.power_estimate_uw = power_estimate_uw(cfg);
  return stats;
}

/// One row per error mask 0x00-0x7F, in mask order. Rows are independent;
/// they are computed by `workers` threads and merged by index, so the
/// result does not depend on the thread count.
inline std::vector<ErrorStats> sweep_configs(unsigned workers = std::thread::hardware_concurrency()) {
  std::vector<ErrorStats> rows(kMulConfigCount);
  workers = std::max(1u, std::min(workers, unsigned(kMulConfigCount)));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&rows, w, workers] {
      for (uint32_t mask = w; mask < kMulConfigCount; mask += workers)
        rows[mask] = error_stats_8x8(MulConfig{mask, 0});
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

/// Delimited sweep table: `mask_hex,er,mred,mean_ed,max_ed,power_uW`.
inline void write_sweep_table(std::ostream& os, std::span<const ErrorStats> rows) {
  os << "mask_hex,er,mred,mean_ed,max_ed,power_uW\n";
  char line[128];
  for (const ErrorStats& r : rows) {
    std::snprintf(line, sizeof(line), "0x%02X,%.9f,%.9f,%.9f,%u,%.4f\n", r.config, r.er, r.mred,
                  r.mean_ed, r.max_ed, r.power_estimate_uw);
    os << line;
  }
}

/// Element-wise quality of an approximate run against an accurate
/// reference. Values are the machine's output words, sign-extended by the
/// caller to whatever the program's output convention is.
struct OutputError {
  double er = 0.0;
  double mred = 0.0;
  double mean_ed = 0.0;
  uint64_t max_ed = 0;
};

inline OutputError app_output_error(std::span<const int64_t> reference,
                                    std::span<const int64_t> candidate) {
  if (reference.size() != candidate.size())
    throw std::invalid_argument("app_output_error: sequence lengths differ");
  if (reference.empty()) return {};
  OutputError out;
  uint64_t mismatches = 0;
  double ed_sum = 0.0;
  double red_sum = 0.0;
  uint64_t nonzero = 0;
  for (size_t i = 0; i < reference.size(); ++i) {
    const int64_t r = reference[i];
    const int64_t c = candidate[i];
    const uint64_t ed = uint64_t(c > r ? c - r : r - c);
    if (ed != 0) ++mismatches;
    ed_sum += double(ed);
    if (ed > out.max_ed) out.max_ed = ed;
    if (r != 0) {
      red_sum += double(ed) / double(r > 0 ? r : -r);
      ++nonzero;
    }
  }
  out.er = double(mismatches) / double(reference.size());
  out.mred = nonzero ? red_sum / double(nonzero) : 0.0;
  out.mean_ed = ed_sum / double(reference.size());
  return out;
}

}  // namespace axrv
