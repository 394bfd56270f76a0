#pragma once

#include <cstdint>

namespace kinctrl {

// Disjoint draw sequences for the distinct consumers of randomness.  Keeping
// the purpose in the stream key means adding draws to one phase never shifts
// the numbers seen by another.
enum class StreamPurpose : std::uint64_t {
  init_forward = 1,
  init_adjoint = 2,
  forward_step = 3,
  adjoint_step = 4,
  source_injection = 5,
  reaction = 6,
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

// Counter-style generator whose state is a pure function of
// (seed, purpose, entity, step).  Any worker holding the same key replays the
// same sequence, so serial and threaded runs produce identical ensembles.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t entity,
            std::uint64_t step) {
    state_ = detail::mix64(seed);
    state_ = detail::mix64(state_ ^ static_cast<std::uint64_t>(purpose));
    state_ = detail::mix64(state_ ^ entity);
    state_ = detail::mix64(state_ ^ step);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1), 53 significant bits
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace kinctrl
