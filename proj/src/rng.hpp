#ifndef FNCCSIM_RNG_HPP
#define FNCCSIM_RNG_HPP

#include <cstdint>
#include <string_view>

namespace fnccsim {

// Deterministic random stream, derived from (master seed, stream label).
// Same inputs always produce the same sequence on every platform, so runs
// are byte-reproducible. xoshiro256** seeded through splitmix64.
class RandomStream {
public:
    RandomStream() : RandomStream(0, "") {}
    RandomStream(std::uint64_t master_seed, std::string_view label);

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double uniform();

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n);

    // Exponential with the given rate (mean 1/rate).
    double exponential(double rate);

private:
    std::uint64_t s_[4];
};

} // namespace fnccsim

#endif
