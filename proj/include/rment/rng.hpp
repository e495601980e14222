#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace rment {

// Seeded generator wrapper. mt19937_64 output is fully specified by the
// standard, and all derived draws below avoid std::*_distribution (whose
// algorithms are implementation-defined), so byte-identical results are
// reproducible across platforms and standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Modulo bias is negligible for the tiny n
  // used here (action counts).
  int uniform_int(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Samples an index from an unnormalized non-negative weight vector by CDF
  // inversion. Falls back to the last positive entry on accumulated rounding.
  int sample(std::span<const double> probs) {
    double total = 0.0;
    for (double p : probs) total += p;
    double u = uniform01() * total;
    double acc = 0.0;
    int last = 0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] <= 0.0) continue;
      acc += probs[i];
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rment
