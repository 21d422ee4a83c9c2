#include "nflab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace nflab::kernels {

const Table& active() {
  static const Table* chosen = [] {
    const char* env = std::getenv("NFLAB_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar();
    const Table* v = avx2();
    return v ? v : &scalar();
  }();
  return *chosen;
}

}  // namespace nflab::kernels
