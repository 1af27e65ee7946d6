#include <cstdio>

int main() {
  std::puts("accelev: cli under construction");
  return 0;
}
