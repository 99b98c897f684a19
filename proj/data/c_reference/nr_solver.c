#include "axrv_kernel.h"

#define COUNT 32
#define ITERATIONS 16

static uint32_t v[COUNT];

int main(void) {
  axrv_seed(1);
  for (int i = 0; i < COUNT; ++i) v[i] = 1 + axrv_below(1000000);

  for (int i = 0; i < COUNT; ++i) {
    uint32_t x = 1024;
    for (int it = 0; it < ITERATIONS; ++it) x = (x + v[i] / x) >> 1;
    axrv_emit(x);
    axrv_emit(v[i] - x * x);
  }
  axrv_halt(0);
}
