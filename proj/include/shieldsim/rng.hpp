#pragma once

#include <cstdint>
#include <string_view>

namespace shieldsim {

/// Independent stream families derived from one user seed.
enum class StreamPurpose : std::uint64_t {
  Disorder = 0x6469736f72646572ULL,
  InitialState = 0x696e697473746174ULL,
  Lanczos = 0x6c616e637a6f7321ULL,
};

/// Counter-based generator: SplitMix64 applied to a Weyl sequence whose
/// starting point is a hash of (seed, stream index, purpose).
///
/// Draw k of a stream is mix(key + (k+1) * 0x9e3779b97f4a7c15), so every
/// (seed, index) pair names a fixed sequence independent of how many other
/// streams were consumed or in which order.
class CounterRng {
 public:
  static constexpr std::string_view kAlgorithm = "splitmix64-weyl/v1";

  CounterRng(std::uint64_t seed, std::uint64_t stream, StreamPurpose purpose);

  static std::uint64_t mix(std::uint64_t z);

  std::uint64_t key() const { return key_; }
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller; pairs are consumed in order.
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace shieldsim
