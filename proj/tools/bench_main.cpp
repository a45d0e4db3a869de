#include <cstdio>

int main() {
  std::printf("lanegrid-bench: not wired up yet\n");
  return 0;
}
