#include "axrv_kernel.h"

#define N 256

static uint32_t x[N];

int main(void) {
  axrv_seed(1);
  for (int i = 0; i < N; ++i) x[i] = axrv_below(256);

  uint32_t y = 0;
  for (int n = 0; n < N; ++n) {
    y = (3u * x[n] + 5u * y) / 7u;
    axrv_emit(y);
  }
  axrv_halt(0);
}
