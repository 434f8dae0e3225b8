#pragma once

#include <cstdint>

namespace omni {

// Deterministic splitmix64 stream. The state advances by a fixed odd
// constant and each output is a finalizing hash of the state, so the
// sequence is a pure function of (seed, draw index) on every platform.
//
// One instance per logical stream: concurrent draws from a shared
// instance are forbidden. Derive independent streams for parallel work
// with clone_with_offset.
class SeededRng {
  public:
    explicit SeededRng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64();

    /// uniform double in [0, 1)
    double uniform();
    double uniform(double lo, double hi);

    /// integer in [0, n), n >= 1
    int uniform_int(int n);

    /// standard normal (Box-Muller; consumes two uniforms per call)
    double normal();

    /// independent stream keyed by (current state, offset)
    SeededRng clone_with_offset(uint64_t offset) const;

  private:
    uint64_t state_;
};

}  // namespace omni
