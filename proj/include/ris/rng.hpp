#pragma once
// Counter-based Philox4x32-10 streams. A stream is addressed by
// (seed, stream id); draws depend only on that pair and the draw index, so
// trials can be generated in any order or on any thread.

#include <array>
#include <complex>
#include <cstdint>
#include <limits>

namespace ris {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

Philox4x32Counter philox4x32_10(Philox4x32Counter counter, Philox4x32Key key);

class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // [0, 1) with 53 random bits.
  double uniform();
  // (0, 1]
  double uniform_open_low();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // N(0, 1)
  double normal();
  // CN(0, 1): real and imaginary parts independent N(0, 1/2).
  std::complex<double> complex_normal();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned used_ = 2;
};

// Mixes a parent seed with a label into an independent child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);

}  // namespace ris
