#ifndef FNCCSIM_SIM_TIME_HPP
#define FNCCSIM_SIM_TIME_HPP

#include <cstdint>

namespace fnccsim {

// Simulated time in integer nanoseconds. All time arithmetic in the engine
// is integral; sub-ns quantities are rounded up where they gate progress.
using SimTime = std::int64_t;

constexpr SimTime kMicrosecond = 1000;
constexpr SimTime kMillisecond = 1000 * 1000;
constexpr SimTime kSecond = 1000 * 1000 * 1000;

// Serialization time of `bytes` at `rate_bps`, rounded up to a whole ns.
inline SimTime serialize_ns(std::int64_t bytes, double rate_bps) {
    double ns = static_cast<double>(bytes) * 8.0 * 1e9 / rate_bps;
    SimTime t = static_cast<SimTime>(ns);
    if (static_cast<double>(t) < ns) ++t;
    return t;
}

} // namespace fnccsim

#endif
