#pragma once

#include <complex>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace lh {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// A point of the plane; on the torus coordinates are read modulo 1.
struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Invalid configuration or parameter outside its admissible range.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative method failed or produced non-finite values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_power_of_two(std::int64_t n);
int ilog2(std::int64_t n);

/// Reduce x to [0, 1).
double frac(double x);

/// Nearest periodic image of d, in [-1/2, 1/2).
double wrap_half(double d);

/// Index of integer frequency xi on an n-point DFT.
inline int freq_index(int xi, int n) { return xi >= 0 ? xi : xi + n; }

/// Integer frequency of DFT index idx, in [-n/2, n/2).
inline int index_freq(int idx, int n) { return idx < n / 2 ? idx : idx - n; }

/// Worker count for parallel loops. Defaults to LH_THREADS, else the core count.
int thread_count();
void set_thread_count(int threads);

/// Counter-based sub-seed: seeds of earlier (stream, index) pairs never
/// change when more trials are appended.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index);

/// Static-partition parallel loop over [0, count). An exception thrown by the body is
/// rethrown after the loop; with several, the one from the lowest index wins.
template <class Body>
void parallel_for(std::int64_t count, Body&& body) {
  const int threads = thread_count();
  std::exception_ptr first;
  std::int64_t first_index = count;
  std::mutex guard;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (i < first_index) {
        first_index = i;
        first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace lh
