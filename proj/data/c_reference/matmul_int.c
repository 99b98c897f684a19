#include "axrv_kernel.h"

#define N 8

static uint32_t a[N * N];
static uint32_t b[N * N];

int main(void) {
  axrv_seed(1);
  for (int i = 0; i < N * N; ++i) a[i] = axrv_below(256);
  for (int i = 0; i < N * N; ++i) b[i] = axrv_below(256);

  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      uint32_t acc = 0;
      for (int k = 0; k < N; ++k) acc += a[i * N + k] * b[k * N + j];
      axrv_emit(acc);
    }
  axrv_halt(0);
}
