#include "axrv_kernel.h"

#define N 12

int main(void) {
  uint32_t acc = 1;
  for (uint32_t i = 2; i <= N; ++i) acc *= i;
  axrv_emit(acc);
  axrv_halt(0);
}
