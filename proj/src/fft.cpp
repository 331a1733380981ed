#include "lh/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace lh::fft {

namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& kv : plans) fftw_destroy_plan(kv.second);
  }

  fftw_plan get(int rank, int len, int stride, Direction dir) {
    const int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
    auto key = std::make_tuple(rank, len, stride, sign);
    std::lock_guard<std::mutex> lock(mutex);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::size_t count = rank == 2 ? static_cast<std::size_t>(len) * len
                                  : static_cast<std::size_t>(len - 1) * stride + 1;
    std::vector<cplx> scratch(count);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan;
    if (rank == 2) {
      plan = fftw_plan_dft_2d(len, len, buf, buf, sign, flags);
    } else {
      int n[1] = {len};
      plan = fftw_plan_many_dft(1, n, 1, buf, nullptr, stride, 0, buf, nullptr, stride, 0,
                                sign, flags);
    }
    if (!plan) throw NumericalError("FFTW plan creation failed");
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void transform_2d(int n, cplx* data, Direction dir) {
  fftw_plan plan = cache().get(2, n, 1, dir);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

void transform_1d(int len, cplx* data, Direction dir, int stride) {
  fftw_plan plan = cache().get(1, len, stride, dir);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace lh::fft
