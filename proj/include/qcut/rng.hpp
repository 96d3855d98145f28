#pragma once

#include <cstdint>
#include <span>

namespace qcut {

// Counter-based pseudo-random stream. Each stream is keyed by a (seed,
// stream index) pair and mixed through the splitmix64 finalizer, so shot i
// of a run always sees the same numbers no matter which worker executes it.
class ShotRng {
public:
    ShotRng(std::uint64_t seed, std::uint64_t stream) {
        state_ = mix(seed + 0x9e3779b97f4a7c15ull * (stream + 1));
        state_ = mix(state_ ^ 0xbf58476d1ce4e5b9ull);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

// Inverse-CDF draw over a small probability vector. Walks the vector in
// index order; the last index absorbs any rounding slack.
inline std::size_t sample_index(std::span<const double> probs, double u) {
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        cum += probs[i];
        if (u < cum) return i;
    }
    return probs.empty() ? 0 : probs.size() - 1;
}

}  // namespace qcut
