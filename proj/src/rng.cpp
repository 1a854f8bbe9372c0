#include "seqlab/rng.hpp"

#include <cmath>

#include "seqlab/errors.hpp"

namespace seqlab {

namespace {

// splitmix64: tiny, well-mixed, stable across platforms.
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t hash_name(std::uint64_t seed, const std::string& name) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    // One mixing round so nearby names diverge fully.
    std::uint64_t s = h;
    return splitmix64(s);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : state_(seed), root_(seed) {
    // Burn one draw so seed 0 does not start at a fixed point.
    (void)splitmix64(state_);
}

RngStream::RngStream(std::uint64_t root_seed, const std::string& stream_name)
    : RngStream(hash_name(root_seed, stream_name)) {
    root_ = root_seed;
}

std::uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
    if (n == 0) throw ContractError("RngStream::next_below: n must be > 0");
    // Rejection sampling keeps the draw unbiased and platform-stable.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
        r = next_u64();
    } while (r >= limit);
    return r % n;
}

double RngStream::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 6.283185307179586476925286766559;
    spare_ = mag * std::sin(two_pi * u2);
    have_spare_ = true;
    return mag * std::cos(two_pi * u2);
}

RngStream RngStream::fork(const std::string& name) const {
    return RngStream(state_ ^ root_, name);
}

}  // namespace seqlab
