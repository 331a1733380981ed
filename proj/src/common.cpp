#include "lh/common.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace lh {

namespace {

std::atomic<int> g_threads{0};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

int ilog2(std::int64_t n) {
  int r = 0;
  while ((std::int64_t{1} << (r + 1)) <= n) ++r;
  return r;
}

double frac(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double wrap_half(double d) { return d - std::floor(d + 0.5); }

int thread_count() {
  int t = g_threads.load();
  if (t > 0) return t;
  if (const char* env = std::getenv("LH_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_thread_count(int threads) { g_threads.store(threads > 0 ? threads : 0); }

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(root) ^ (stream * 0xD1B54A32D192ED03ULL)) ^ index);
}

}  // namespace lh
