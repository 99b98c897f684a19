/* Shared conventions for the reference kernel sources.
 *
 * These C files mirror the generated instruction-stream kernels for
 * optional cross-compilation with a RISC-V toolchain, e.g.:
 *
 *   riscv32-unknown-elf-gcc -march=rv32iem -mabi=ilp32e -O2 -nostartfiles \
 *       -Ttext=0 fir_int.c -o fir_int.elf
 *
 * They are not part of the build or the test surface. Inputs come from
 * the same splitmix64 stream the generators use, so a given seed yields
 * the same data; outputs leave through the simulator's MMIO channel.
 */
#ifndef AXRV_KERNEL_H
#define AXRV_KERNEL_H

#include <stdint.h>

#define AXRV_MMIO_OUTPUT ((volatile uint32_t *)0xF0000000u)
#define AXRV_MMIO_HALT ((volatile uint32_t *)0xF0000004u)

static inline void axrv_emit(uint32_t value) { *AXRV_MMIO_OUTPUT = value; }

static inline void axrv_halt(uint32_t exit_code) {
  *AXRV_MMIO_HALT = exit_code;
  for (;;) {
  }
}

static uint64_t axrv_rng_state;

static inline void axrv_seed(uint64_t seed) { axrv_rng_state = seed; }

static inline uint64_t axrv_next(void) {
  uint64_t z = (axrv_rng_state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

static inline uint32_t axrv_below(uint32_t bound) {
  return (uint32_t)(axrv_next() % bound);
}

#endif
