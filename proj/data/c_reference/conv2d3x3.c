#include "axrv_kernel.h"

#define DIM 16
#define K 3

static uint32_t img[DIM * DIM];
static uint32_t coef[K * K];

int main(void) {
  axrv_seed(1);
  for (int i = 0; i < DIM * DIM; ++i) img[i] = axrv_below(256);
  for (int i = 0; i < K * K; ++i) coef[i] = axrv_below(16);

  for (int i = 0; i <= DIM - K; ++i)
    for (int j = 0; j <= DIM - K; ++j) {
      uint32_t acc = 0;
      for (int di = 0; di < K; ++di)
        for (int dj = 0; dj < K; ++dj)
          acc += img[(i + di) * DIM + (j + dj)] * coef[di * K + dj];
      axrv_emit(acc);
    }
  axrv_halt(0);
}
