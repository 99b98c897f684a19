#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "axrv/analysis/error_stats.hpp"

using namespace axrv;
using Catch::Matchers::WithinAbs;

// Frozen expected values computed by an independent (vectorized, different
// summation order) exhaustive enumeration of the same circuit definition.
namespace {
struct Frozen {
  uint32_t mask;
  double er;
  double mred;
  double mean_ed;
  uint32_t max_ed;
};
constexpr Frozen kFrozen[] = {
    {0x7F, 0.0, 0.0, 0.0, 0},
    {0x7E, 0.359375, 0.002274019436, 5.75, 16},
    {0x7D, 0.4375, 0.005098593649, 14.0, 32},
    {0x40, 0.909988403320, 0.073259143857, 316.3564453125, 1008},
    {0x55, 0.793807983398, 0.051746090723, 260.0517578125, 672},
    {0x00, 0.921554565430, 0.114849145869, 608.37060546875, 2032},
};
}  // namespace

TEST_CASE("error_stats_8x8: frozen exhaustive characterization") {
  for (const Frozen& f : kFrozen) {
    const ErrorStats s = error_stats_8x8({f.mask, 0});
    INFO("mask 0x" << std::hex << f.mask);
    CHECK_THAT(s.er, WithinAbs(f.er, 1e-9));
    CHECK_THAT(s.mred, WithinAbs(f.mred, 1e-9));
    CHECK_THAT(s.mean_ed, WithinAbs(f.mean_ed, 1e-9));
    CHECK(s.max_ed == f.max_ed);
    CHECK((s.er == 0.0) == (s.max_ed == 0));
    if (s.er == 0.0) CHECK(s.mred == 0.0);
  }
}

TEST_CASE("error_stats_8x8: max deviation equals the analytic bound") {
  for (const uint32_t mask : {0x7Eu, 0x3Cu, 0x00u})
    CHECK(error_stats_8x8({mask, 0}).max_ed == mul8_error_bound(mask));
}

TEST_CASE("error_stats_8x8: rejects truncated configurations") {
  CHECK_THROWS_AS(error_stats_8x8({0x7F, 3}), std::invalid_argument);
}

TEST_CASE("power estimate: interpolation over accurate-line count") {
  CHECK_THAT(power_estimate_uw({0x00, 0}), WithinAbs(70.2, 1e-12));
  CHECK_THAT(power_estimate_uw({0x7F, 0}), WithinAbs(101.3, 1e-12));
  CHECK_THAT(power_estimate_uw({0x15, 0}),  // popcount 3
             WithinAbs(70.2 + 31.1 * 3.0 / 7.0, 1e-12));
  for (uint32_t m = 1; m < 128; ++m)
    CHECK(power_estimate_uw({m, 0}) >= power_estimate_uw({m & (m - 1), 0}) - 1e-12);
}

TEST_CASE("sweep: one row per mask, deterministic across worker counts") {
  const auto serial = sweep_configs(1);
  const auto parallel = sweep_configs(8);
  REQUIRE(serial.size() == 128);
  REQUIRE(parallel.size() == 128);
  for (uint32_t m = 0; m < 128; ++m) {
    CHECK(serial[m].config == m);
    CHECK(serial[m].er == parallel[m].er);
    CHECK(serial[m].mred == parallel[m].mred);
    CHECK(serial[m].max_ed == parallel[m].max_ed);
  }
  CHECK(serial[0x7F].er == 0.0);
  CHECK(serial[0x7F].max_ed == 0);
}

TEST_CASE("sweep table: header plus 128 rows, byte-stable") {
  const auto rows = sweep_configs(4);
  std::ostringstream a, b;
  write_sweep_table(a, rows);
  write_sweep_table(b, rows);
  CHECK(a.str() == b.str());
  size_t lines = 0;
  for (char c : a.str())
    if (c == '\n') ++lines;
  CHECK(lines == 129);
  CHECK(a.str().rfind("mask_hex,er,mred,mean_ed,max_ed,power_uW\n", 0) == 0);
}

TEST_CASE("app_output_error: element-wise metrics") {
  const int64_t ref[] = {100, 200, 300};
  const int64_t same[] = {100, 200, 300};
  const auto zero = app_output_error(ref, same);
  CHECK(zero.er == 0.0);
  CHECK(zero.mred == 0.0);
  CHECK(zero.max_ed == 0);

  const int64_t r1[] = {100};
  const int64_t c1[] = {101};
  const auto one = app_output_error(r1, c1);
  CHECK_THAT(one.mred, WithinAbs(0.01, 1e-12));
  CHECK(one.er == 1.0);
  CHECK(one.max_ed == 1);

  const int64_t neg_r[] = {-100, 0};
  const int64_t neg_c[] = {-110, 5};
  const auto neg = app_output_error(neg_r, neg_c);
  CHECK_THAT(neg.mred, WithinAbs(0.10, 1e-12));  // zero-reference element excluded
  CHECK(neg.max_ed == 10);

  const int64_t shorter[] = {1, 2};
  CHECK_THROWS_AS(app_output_error(ref, shorter), std::invalid_argument);
}
