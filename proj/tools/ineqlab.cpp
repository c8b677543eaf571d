#include <cstdio>

#include "ineqlab/weight.hpp"

int main() {
  std::printf("ineqlab %.12f\n", ineqlab::kappa());
  return 0;
}
