#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hessiasol {

inline constexpr const char* kVersion = "hessiasol 0.1.0";

/// Deterministic RNG wrapper. All value mappings are implemented by hand so
/// that a fixed seed produces identical streams on every platform (the
/// standard distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(gen_() % span);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Global cap on worker threads (0 = hardware concurrency). Set once by the
/// CLI from --threads / HESSIASOL_THREADS before running anything parallel.
void set_max_threads(int n);
int max_threads();

/// Runs fn(begin, end) over disjoint chunks of [0, count). Chunking depends
/// only on `count` and the thread cap, so side effects into per-index slots
/// are deterministic.
void parallel_for(std::int64_t count,
                  const std::function<void(std::int64_t, std::int64_t)>& fn);

/// Binomial coefficient as double; exact for n <= 64 well within the double
/// integer range used here.
double binomial(int n, int k);

/// snprintf("%.17g") – round-trips doubles exactly through decimal text.
std::string format_full(double v);

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hessiasol
