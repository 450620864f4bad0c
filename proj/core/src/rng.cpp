#include "aoa/rng.hpp"

#include <stdexcept>

namespace aoa {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

std::uint64_t Rng::next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

Real Rng::uniform() {
    return static_cast<Real>(next_u64() >> 11) * Real(0x1.0p-53);
}

Real Rng::uniform(Real lo, Real hi) { return lo + uniform() * (hi - lo); }

Rng Rng::derive(std::uint64_t stream_id) const {
    std::uint64_t s = seed_ ^ (0xA0A0A0A0A0A0A0A0ULL + stream_id);
    return Rng(splitmix64(s));
}

Matrix uniform_init(std::size_t rows, std::size_t cols, Real lo, Real hi, Rng& rng) {
    if (!(lo < hi)) {
        throw std::invalid_argument("uniform_init: lo must be < hi");
    }
    Matrix m(rows, cols);
    for (Real& v : m.data) v = rng.uniform(lo, hi);
    return m;
}

}  // namespace aoa
