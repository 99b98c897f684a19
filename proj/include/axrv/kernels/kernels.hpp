#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "axrv/kernels/encoder.hpp"
#include "axrv/sim/ihex.hpp"
#include "axrv/sim/machine.hpp"

namespace axrv {

enum class Kernel : uint8_t {
  Conv2d3x3, Conv2d5x5, FirInt, IirInt, MatmulInt, NrSolver, Factorial
};

inline constexpr std::array<Kernel, 7> kAllKernels = {
    Kernel::Conv2d3x3, Kernel::Conv2d5x5, Kernel::FirInt, Kernel::IirInt,
    Kernel::MatmulInt, Kernel::NrSolver,  Kernel::Factorial};

constexpr const char* kernel_name(Kernel k) {
  switch (k) {
    case Kernel::Conv2d3x3: return "conv2d3x3";
    case Kernel::Conv2d5x5: return "conv2d5x5";
    case Kernel::FirInt: return "fir_int";
    case Kernel::IirInt: return "iir_int";
    case Kernel::MatmulInt: return "matmul_int";
    case Kernel::NrSolver: return "nr_solver";
    case Kernel::Factorial: return "factorial";
  }
  return "?";
}

inline std::optional<Kernel> kernel_from_name(std::string_view name) {
  for (Kernel k : kAllKernels)
    if (name == kernel_name(k)) return k;
  return std::nullopt;
}

/// Size parameter: image dimension (conv), sample count (fir/iir), matrix
/// order (matmul), value count (nr_solver), n (factorial). Zero selects
/// the kernel default. Every generated program has data-independent
/// control flow: branches test loop counters only.
struct KernelSpec {
  Kernel kernel = Kernel::MatmulInt;
  uint32_t size = 0;
  uint64_t seed = 1;
};

constexpr uint32_t kernel_default_size(Kernel k) {
  switch (k) {
    case Kernel::Conv2d3x3: return 16;
    case Kernel::Conv2d5x5: return 16;
    case Kernel::FirInt: return 256;
    case Kernel::IirInt: return 256;
    case Kernel::MatmulInt: return 8;
    case Kernel::NrSolver: return 32;
    case Kernel::Factorial: return 12;
  }
  return 0;
}

/// A generated program image plus its host-side exact reference outputs
/// (the values an accurate-mode run writes to the MMIO output channel).
struct EncodedProgram {
  std::vector<uint32_t> words;
  uint32_t entry = 0;
  std::vector<uint32_t> reference_outputs;

  size_t output_count() const { return reference_outputs.size(); }

  std::vector<uint8_t> bytes() const {
    std::vector<uint8_t> out(words.size() * 4);
    for (size_t i = 0; i < words.size(); ++i)
      for (int b = 0; b < 4; ++b) out[i * 4 + b] = uint8_t(words[i] >> (8 * b));
    return out;
  }

  std::string to_ihex() const { return ihex_emit(bytes(), entry); }
};

namespace detail {

// Program data lives at a fixed address so the code can load pointers as
// plain constants regardless of code length.
inline constexpr uint32_t kKernelDataBase = 0x4000;
inline constexpr size_t kKernelCodeWordBudget = kKernelDataBase / 4;
inline constexpr size_t kKernelImageWordBudget = (1u << 20) / 4;  // 1 MiB

class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}
  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  uint32_t below(uint32_t bound) { return uint32_t(next() % bound); }

 private:
  uint64_t state_;
};

struct ProgramBuilder {
  Assembler code;
  std::vector<uint32_t> data;

  uint32_t data_address() const {
    return kKernelDataBase + uint32_t(data.size() * 4);
  }
  uint32_t push_data(uint32_t value) {
    const uint32_t addr = data_address();
    data.push_back(value);
    return addr;
  }

  EncodedProgram finish(std::vector<uint32_t> reference) {
    if (code.words().size() > kKernelCodeWordBudget)
      throw std::invalid_argument("kernel: generated code exceeds the code budget");
    const size_t data_words = kKernelDataBase / 4 + data.size();
    if (data_words > kKernelImageWordBudget)
      throw std::invalid_argument("kernel: data exceeds the image budget");
    EncodedProgram p;
    p.words.assign(data.empty() ? code.words().size() : data_words, 0);
    std::copy(code.words().begin(), code.words().end(), p.words.begin());
    std::copy(data.begin(), data.end(), p.words.begin() + kKernelDataBase / 4);
    p.reference_outputs = std::move(reference);
    return p;
  }
};

// Shared register roles: x2 = MMIO base. sw value,0(x2) emits an output
// word; sw x0,4(x2) halts with exit code 0.
inline void emit_output(Assembler& a, unsigned value_reg) { a.emit(enc::sw(value_reg, 2, 0)); }
inline void emit_halt(Assembler& a) { a.emit(enc::sw(0, 2, 4)); }

inline EncodedProgram gen_conv2d(uint32_t dim, uint32_t k, uint64_t seed) {
  if (dim < k) throw std::invalid_argument("conv2d: image smaller than the coefficient window");
  ProgramBuilder b;
  SplitMix64 rng(seed);

  std::vector<uint32_t> img(dim * dim);
  for (auto& v : img) v = rng.below(256);
  std::vector<uint32_t> coef(k * k);
  for (auto& v : coef) v = rng.below(16);
  const uint32_t img_base = kKernelDataBase;
  for (uint32_t v : img) b.push_data(v);
  const uint32_t coef_base = img_base + dim * dim * 4;
  for (uint32_t v : coef) b.push_data(v);

  const uint32_t out_dim = dim - k + 1;
  std::vector<uint32_t> ref;
  ref.reserve(size_t(out_dim) * out_dim);
  for (uint32_t i = 0; i < out_dim; ++i)
    for (uint32_t j = 0; j < out_dim; ++j) {
      uint32_t acc = 0;
      for (uint32_t di = 0; di < k; ++di)
        for (uint32_t dj = 0; dj < k; ++dj)
          acc += img[(i + di) * dim + (j + dj)] * coef[di * k + dj];
      ref.push_back(acc);
    }

  Assembler& a = b.code;
  a.li32(2, Machine::kMmioOutput);
  a.li32(13, out_dim);
  a.li32(14, 4 * dim);
  a.li32(1, img_base);
  a.li32(3, 0);
  const size_t i_loop = a.here();
  a.li32(4, 0);
  a.emit(enc::addi(15, 1, 0));  // window pointer for this row
  const size_t j_loop = a.here();
  a.li32(7, 0);
  a.li32(9, coef_base);
  a.emit(enc::addi(8, 15, 0));
  a.li32(5, int32_t(k));
  const size_t di_loop = a.here();
  a.li32(6, int32_t(k));
  const size_t dj_loop = a.here();
  a.emit(enc::lw(10, 8, 0));
  a.emit(enc::lw(11, 9, 0));
  a.emit(enc::mul(12, 10, 11));
  a.emit(enc::add(7, 7, 12));
  a.emit(enc::addi(8, 8, 4));
  a.emit(enc::addi(9, 9, 4));
  a.emit(enc::addi(6, 6, -1));
  a.branch(Mnemonic::Bne, 6, 0, dj_loop);
  a.emit(enc::addi(8, 8, -int32_t(4 * k)));
  a.emit(enc::add(8, 8, 14));
  a.emit(enc::addi(5, 5, -1));
  a.branch(Mnemonic::Bne, 5, 0, di_loop);
  emit_output(a, 7);
  a.emit(enc::addi(15, 15, 4));
  a.emit(enc::addi(4, 4, 1));
  a.branch(Mnemonic::Blt, 4, 13, j_loop);
  a.emit(enc::add(1, 1, 14));
  a.emit(enc::addi(3, 3, 1));
  a.branch(Mnemonic::Blt, 3, 13, i_loop);
  emit_halt(a);

  return b.finish(std::move(ref));
}

inline EncodedProgram gen_fir(uint32_t n, uint64_t seed) {
  constexpr uint32_t kTaps = 8;
  if (n < kTaps) throw std::invalid_argument("fir: fewer samples than taps");
  ProgramBuilder b;
  SplitMix64 rng(seed);

  std::vector<uint32_t> x(n), h(kTaps);
  for (auto& v : x) v = rng.below(256);
  for (auto& v : h) v = rng.below(16);
  const uint32_t x_base = kKernelDataBase;
  for (uint32_t v : x) b.push_data(v);
  const uint32_t h_base = x_base + n * 4;
  for (uint32_t v : h) b.push_data(v);

  const uint32_t out_count = n - kTaps + 1;
  std::vector<uint32_t> ref;
  ref.reserve(out_count);
  for (uint32_t i = 0; i < out_count; ++i) {
    uint32_t acc = 0;
    for (uint32_t t = 0; t < kTaps; ++t) acc += x[i + t] * h[t];
    ref.push_back(acc);
  }

  Assembler& a = b.code;
  a.li32(2, Machine::kMmioOutput);
  a.li32(1, x_base);
  a.li32(3, int32_t(out_count));
  const size_t n_loop = a.here();
  a.li32(7, 0);
  a.emit(enc::addi(8, 1, 0));
  a.li32(9, h_base);
  a.li32(5, kTaps);
  const size_t t_loop = a.here();
  a.emit(enc::lw(10, 8, 0));
  a.emit(enc::lw(11, 9, 0));
  a.emit(enc::mul(12, 10, 11));
  a.emit(enc::add(7, 7, 12));
  a.emit(enc::addi(8, 8, 4));
  a.emit(enc::addi(9, 9, 4));
  a.emit(enc::addi(5, 5, -1));
  a.branch(Mnemonic::Bne, 5, 0, t_loop);
  emit_output(a, 7);
  a.emit(enc::addi(1, 1, 4));
  a.emit(enc::addi(3, 3, -1));
  a.branch(Mnemonic::Bne, 3, 0, n_loop);
  emit_halt(a);

  return b.finish(std::move(ref));
}

inline EncodedProgram gen_iir(uint32_t n, uint64_t seed) {
  if (n == 0) throw std::invalid_argument("iir: need at least one sample");
  constexpr int32_t kB0 = 3, kA1 = 5, kScale = 7;
  ProgramBuilder b;
  SplitMix64 rng(seed);

  std::vector<uint32_t> x(n);
  for (auto& v : x) v = rng.below(256);
  const uint32_t x_base = kKernelDataBase;
  for (uint32_t v : x) b.push_data(v);

  std::vector<uint32_t> ref;
  ref.reserve(n);
  uint32_t y = 0;
  for (uint32_t v : x) {
    y = (uint32_t(kB0) * v + uint32_t(kA1) * y) / uint32_t(kScale);
    ref.push_back(y);
  }

  Assembler& a = b.code;
  a.li32(2, Machine::kMmioOutput);
  a.li32(1, x_base);
  a.li32(3, int32_t(n));
  a.li32(4, 0);
  a.li32(5, kB0);
  a.li32(6, kA1);
  a.li32(7, kScale);
  const size_t loop = a.here();
  a.emit(enc::lw(10, 1, 0));
  a.emit(enc::mul(11, 10, 5));
  a.emit(enc::mul(12, 4, 6));
  a.emit(enc::add(11, 11, 12));
  a.emit(enc::div_(4, 11, 7));
  emit_output(a, 4);
  a.emit(enc::addi(1, 1, 4));
  a.emit(enc::addi(3, 3, -1));
  a.branch(Mnemonic::Bne, 3, 0, loop);
  emit_halt(a);

  return b.finish(std::move(ref));
}

inline EncodedProgram gen_matmul(uint32_t n, uint64_t seed) {
  if (n == 0 || n > 64) throw std::invalid_argument("matmul: order must be 1-64");
  ProgramBuilder b;
  SplitMix64 rng(seed);

  std::vector<uint32_t> ma(n * n), mb(n * n);
  for (auto& v : ma) v = rng.below(256);
  for (auto& v : mb) v = rng.below(256);
  const uint32_t a_base = kKernelDataBase;
  for (uint32_t v : ma) b.push_data(v);
  const uint32_t b_base = a_base + n * n * 4;
  for (uint32_t v : mb) b.push_data(v);

  std::vector<uint32_t> ref;
  ref.reserve(size_t(n) * n);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j) {
      uint32_t acc = 0;
      for (uint32_t k = 0; k < n; ++k) acc += ma[i * n + k] * mb[k * n + j];
      ref.push_back(acc);
    }

  Assembler& a = b.code;
  a.li32(2, Machine::kMmioOutput);
  a.li32(13, int32_t(n));
  a.li32(14, int32_t(4 * n));
  a.li32(1, a_base);  // current row of A
  a.li32(3, 0);       // i
  const size_t i_loop = a.here();
  a.li32(15, b_base);  // current column of B
  a.li32(4, 0);        // j
  const size_t j_loop = a.here();
  a.emit(enc::addi(8, 1, 0));   // walker over A row
  a.emit(enc::addi(9, 15, 0));  // walker down B column
  a.li32(7, 0);                 // acc
  a.li32(6, 0);                 // k
  const size_t k_loop = a.here();
  a.emit(enc::lw(10, 8, 0));
  a.emit(enc::lw(11, 9, 0));
  a.emit(enc::mul(12, 10, 11));
  a.emit(enc::add(7, 7, 12));
  a.emit(enc::addi(8, 8, 4));
  a.emit(enc::add(9, 9, 14));
  a.emit(enc::addi(6, 6, 1));
  a.branch(Mnemonic::Blt, 6, 13, k_loop);
  emit_output(a, 7);
  a.emit(enc::addi(15, 15, 4));
  a.emit(enc::addi(4, 4, 1));
  a.branch(Mnemonic::Blt, 4, 13, j_loop);
  a.emit(enc::add(1, 1, 14));
  a.emit(enc::addi(3, 3, 1));
  a.branch(Mnemonic::Blt, 3, 13, i_loop);
  emit_halt(a);

  return b.finish(std::move(ref));
}

inline EncodedProgram gen_nr_solver(uint32_t count, uint64_t seed) {
  if (count == 0) throw std::invalid_argument("nr_solver: need at least one value");
  constexpr uint32_t kIterations = 16;
  constexpr uint32_t kSeedGuess = 1024;
  ProgramBuilder b;
  SplitMix64 rng(seed);

  std::vector<uint32_t> values(count);
  for (auto& v : values) v = 1 + rng.below(1'000'000);
  const uint32_t v_base = kKernelDataBase;
  for (uint32_t v : values) b.push_data(v);

  // Fixed-iteration Newton recurrence for the integer square root; the
  // residual exercises multiplication and may be negative near the root.
  std::vector<uint32_t> ref;
  ref.reserve(count * 2);
  for (uint32_t v : values) {
    uint32_t x = kSeedGuess;
    for (uint32_t i = 0; i < kIterations; ++i) x = (x + v / x) >> 1;
    ref.push_back(x);
    ref.push_back(v - x * x);
  }

  Assembler& a = b.code;
  a.li32(2, Machine::kMmioOutput);
  a.li32(1, v_base);
  a.li32(3, int32_t(count));
  const size_t vals_loop = a.here();
  a.emit(enc::lw(4, 1, 0));
  a.li32(5, kSeedGuess);
  a.li32(6, kIterations);
  const size_t nr_loop = a.here();
  a.emit(enc::div_(7, 4, 5));
  a.emit(enc::add(8, 5, 7));
  a.emit(enc::srai(5, 8, 1));
  a.emit(enc::addi(6, 6, -1));
  a.branch(Mnemonic::Bne, 6, 0, nr_loop);
  a.emit(enc::mul(10, 5, 5));
  a.emit(enc::sub(9, 4, 10));
  emit_output(a, 5);
  emit_output(a, 9);
  a.emit(enc::addi(1, 1, 4));
  a.emit(enc::addi(3, 3, -1));
  a.branch(Mnemonic::Bne, 3, 0, vals_loop);
  emit_halt(a);

  return b.finish(std::move(ref));
}

inline EncodedProgram gen_factorial(uint32_t n) {
  if (n > 12) throw std::invalid_argument("factorial: 13! does not fit 32 bits");
  ProgramBuilder b;

  uint32_t acc = 1;
  for (uint32_t i = 2; i <= n; ++i) acc *= i;

  Assembler& a = b.code;
  a.li32(2, Machine::kMmioOutput);
  a.li32(5, 2);
  a.li32(6, 1);
  a.li32(7, int32_t(n));
  const size_t check = a.here();
  const size_t exit_branch = a.reserve();
  a.emit(enc::mul(6, 6, 5));
  a.emit(enc::addi(5, 5, 1));
  a.jump(0, check);
  a.patch_branch(exit_branch, Mnemonic::Blt, 7, 5, a.here());
  emit_output(a, 6);
  emit_halt(a);

  return b.finish({acc});
}

}  // namespace detail

inline EncodedProgram generate(const KernelSpec& spec) {
  const uint32_t size = spec.size ? spec.size : kernel_default_size(spec.kernel);
  switch (spec.kernel) {
    case Kernel::Conv2d3x3: return detail::gen_conv2d(size, 3, spec.seed);
    case Kernel::Conv2d5x5: return detail::gen_conv2d(size, 5, spec.seed);
    case Kernel::FirInt: return detail::gen_fir(size, spec.seed);
    case Kernel::IirInt: return detail::gen_iir(size, spec.seed);
    case Kernel::MatmulInt: return detail::gen_matmul(size, spec.seed);
    case Kernel::NrSolver: return detail::gen_nr_solver(size, spec.seed);
    case Kernel::Factorial: return detail::gen_factorial(size);
  }
  throw std::invalid_argument("generate: unknown kernel");
}

}  // namespace axrv
