#include "nvist/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

namespace nvist {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  // FFTW_ESTIMATE keeps plan choice (and hence rounding) identical between runs.
  fftw_plan get(int rows, int cols, int sign) {
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    auto* buf = fftw_alloc_complex(static_cast<size_t>(rows) * cols);
    fftw_plan p = fftw_plan_dft_2d(rows, cols, buf, buf, sign, FFTW_ESTIMATE);
    fftw_free(buf);
    plans.emplace(key, p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

struct Workspace {
  fftw_complex* data = nullptr;
  size_t size = 0;
  ~Workspace() { fftw_free(data); }
  fftw_complex* reserve(size_t n) {
    if (n > size) {
      fftw_free(data);
      data = fftw_alloc_complex(n);
      size = n;
    }
    return data;
  }
};

void transform(ComplexArray& a, int sign) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  const size_t count = static_cast<size_t>(rows) * cols;
  if (count == 0) return;
  fftw_plan plan = cache().get(rows, cols, sign);
  thread_local Workspace ws;
  fftw_complex* buf = ws.reserve(count);
  std::memcpy(buf, a.data(), count * sizeof(fftw_complex));
  fftw_execute_dft(plan, buf, buf);
  std::memcpy(static_cast<void*>(a.data()), buf, count * sizeof(fftw_complex));
}

}  // namespace

void fft2(ComplexArray& a) { transform(a, FFTW_FORWARD); }

void ifft2(ComplexArray& a) {
  transform(a, FFTW_BACKWARD);
  a /= static_cast<double>(a.rows() * a.cols());
}

int fft_friendly_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace nvist
