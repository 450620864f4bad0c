#pragma once

#include <cstdint>
#include <vector>

#include "aoa/matrix.hpp"

namespace aoa {

// xoshiro256** seeded through splitmix64. Chosen because its output is
// fully specified, so identical seeds give identical streams on every
// platform (std::uniform_real_distribution carries no such guarantee).
//
// All randomness in a run flows from one root seed; independent uses
// (init, splits, shuffles, dropout) take derived streams via derive().
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Unbiased-enough draw in [0, n); uses the fixed widening-multiply map.
    std::uint64_t next_below(std::uint64_t n);

    // Uniform in [0, 1) with 53 random bits.
    Real uniform();
    // Uniform in [lo, hi).
    Real uniform(Real lo, Real hi);

    // Child generator for an independent stream. Deterministic in
    // (root seed, stream_id).
    Rng derive(std::uint64_t stream_id) const;

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::uint64_t i = v.size(); i > 1; --i) {
            const std::uint64_t j = next_below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t seed_;
    std::uint64_t state_[4];
};

Matrix uniform_init(std::size_t rows, std::size_t cols, Real lo, Real hi, Rng& rng);

}  // namespace aoa
