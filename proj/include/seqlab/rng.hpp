#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace seqlab {

/// Deterministic random stream. All randomness in the project flows from one
/// root seed through named sub-streams, so every component (init, shuffles,
/// dropout, synthesis) is independently reproducible across platforms.
/// Draws avoid std::*_distribution, whose outputs are implementation-defined.
class RngStream {
public:
    RngStream() : RngStream(0) {}
    explicit RngStream(std::uint64_t seed);
    RngStream(std::uint64_t root_seed, const std::string& stream_name);

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double next_double();

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n);

    /// Standard normal via Box-Muller on our own uniforms.
    double next_gaussian();

    /// Fisher-Yates with explicit draws; identical order on every platform.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Derive a child stream deterministically.
    RngStream fork(const std::string& name) const;

private:
    std::uint64_t state_;
    std::uint64_t root_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace seqlab
