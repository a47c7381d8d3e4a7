#ifndef FNCCSIM_WORKLOAD_HPP
#define FNCCSIM_WORKLOAD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rng.hpp"
#include "sim_time.hpp"

namespace fnccsim {

struct FlowSpec {
    std::string src, dst;
    std::int64_t size_bytes = 0;
    SimTime start = 0;
    SimTime stop_at = -1; // elephants: truncate at this time, -1 = run to size
    std::uint16_t src_port = 0; // 0 = auto-assign
    std::uint16_t dst_port = 0;
};

// Empirical flow-size distribution: (size, cumulative probability) knots.
// Sampling inverse-transforms with linear interpolation in log-size.
class FlowSizeCdf {
public:
    static FlowSizeCdf from_points(std::vector<std::pair<std::int64_t, double>> points);
    // Plain-text file, two columns "size_bytes cumulative_probability",
    // '#' comments allowed.
    static FlowSizeCdf from_file(const std::string& path);

    std::int64_t sample(RandomStream& rng) const;
    std::int64_t sample_from_uniform(double u) const;

    // Analytic mean of the interpolated distribution (closed-form per
    // log-linear segment).
    double mean() const;

    const std::vector<std::pair<std::int64_t, double>>& points() const { return points_; }

private:
    std::vector<std::pair<std::int64_t, double>> points_;
};

// Scripted arrivals: validates specs and rejects duplicate five-tuples.
std::vector<FlowSpec> script_flows(std::vector<FlowSpec> entries);

// Per-source Poisson arrivals at a target average NIC load. lambda =
// load * link_rate / (8 * mean_flow_size) flows per second per host;
// destinations uniform among the other hosts.
std::vector<FlowSpec> poisson_arrivals(const FlowSizeCdf& cdf, double load,
                                       const std::vector<std::string>& host_names,
                                       double link_rate_bps, SimTime duration,
                                       RandomStream& rng);

} // namespace fnccsim

#endif
