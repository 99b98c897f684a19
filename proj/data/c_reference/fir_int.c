#include "axrv_kernel.h"

#define N 256
#define TAPS 8

static uint32_t x[N];
static uint32_t h[TAPS];

int main(void) {
  axrv_seed(1);
  for (int i = 0; i < N; ++i) x[i] = axrv_below(256);
  for (int i = 0; i < TAPS; ++i) h[i] = axrv_below(16);

  for (int n = 0; n <= N - TAPS; ++n) {
    uint32_t acc = 0;
    for (int t = 0; t < TAPS; ++t) acc += x[n + t] * h[t];
    axrv_emit(acc);
  }
  axrv_halt(0);
}
