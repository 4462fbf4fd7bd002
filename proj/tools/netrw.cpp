#include <cstdio>

int main() {
  std::puts("netrw: placeholder");
  return 0;
}
