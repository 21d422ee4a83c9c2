#include "nflab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace nflab::fft {

namespace {

struct PlanKey {
  std::vector<int> dims;
  int sign;
  int howmany;
  int stride;
  int dist;
  bool operator<(const PlanKey& o) const {
    return std::tie(dims, sign, howmany, stride, dist) <
           std::tie(o.dims, o.sign, o.howmany, o.stride, o.dist);
  }
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

  fftw_plan get(const PlanKey& key, std::size_t total) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    if (!buf) throw std::bad_alloc();
    const int sign = key.sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = fftw_plan_many_dft(static_cast<int>(key.dims.size()), key.dims.data(),
                                     key.howmany, buf, nullptr, key.stride, key.dist, buf,
                                     nullptr, key.stride, key.dist, sign, flags);
    fftw_free(buf);
    if (!p) throw std::runtime_error("fftw planning failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(const PlanKey& key, std::vector<cd>& data) {
  fftw_plan p = cache().get(key, data.size());
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, ptr, ptr);
}

}  // namespace

void transform_nd(std::vector<cd>& data, const std::vector<int>& dims, int sign) {
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  if (total != data.size()) throw std::invalid_argument("fft: extent mismatch");
  run(PlanKey{dims, sign, 1, 1, 0}, data);
}

void transform_slow_axis(std::vector<cd>& data, int n0, std::size_t inner, int sign) {
  if (static_cast<std::size_t>(n0) * inner != data.size())
    throw std::invalid_argument("fft: extent mismatch");
  run(PlanKey{{n0}, sign, static_cast<int>(inner), static_cast<int>(inner), 1}, data);
}

void transform_fast_axis(std::vector<cd>& data, std::size_t outer, int n1, int sign) {
  if (outer * static_cast<std::size_t>(n1) != data.size())
    throw std::invalid_argument("fft: extent mismatch");
  run(PlanKey{{n1}, sign, static_cast<int>(outer), 1, n1}, data);
}

}  // namespace nflab::fft
