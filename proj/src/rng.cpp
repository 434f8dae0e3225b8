#include "omni/rng.hpp"

#include <cmath>

namespace omni {

static inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t SeededRng::next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
}

double SeededRng::uniform() {
    // top 53 bits -> [0, 1), never reaches 1
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

int SeededRng::uniform_int(int n) {
    return static_cast<int>(uniform() * static_cast<double>(n));
}

double SeededRng::normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;  // keep log finite
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

SeededRng SeededRng::clone_with_offset(uint64_t offset) const {
    SeededRng child(mix64(state_ ^ (offset + 1) * 0xA0761D6478BD642Full));
    return child;
}

}  // namespace omni
