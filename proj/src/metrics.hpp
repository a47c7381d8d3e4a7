#ifndef FNCCSIM_METRICS_HPP
#define FNCCSIM_METRICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sim_time.hpp"
#include "topology.hpp"

namespace fnccsim {

struct FlowRecord {
    std::uint32_t flow_id = 0;
    std::string src, dst;
    std::int64_t size_bytes = 0;
    SimTime start = 0;
    SimTime finish = 0;
    SimTime ideal_fct = 0;
    double slowdown = 0;
};

struct SeriesSample {
    SimTime t;
    int node;
    int port;
    std::string metric;
    double value;
};

struct WindowSample {
    SimTime t;
    double window;
    double u;
    bool lhcs;
    bool wc_synced;
};

struct FlowSeriesSample {
    SimTime t;
    std::uint32_t flow;
    std::string metric;
    double value;
};

struct LhcsEvent {
    SimTime t;
    std::uint32_t flow;
    double wc_bytes;       // exact jump value B*T*beta/N
    double bandwidth_bps;  // B used for the jump
    std::uint16_t n;
};

struct BucketStats {
    std::int64_t lo = 0, hi = 0; // [lo, hi) size range
    std::size_t count = 0;
    double mean = 0, median = 0, p95 = 0, p99 = 0;
};

// Nearest-rank percentile over a sorted copy. p in (0, 100].
double nearest_rank(std::vector<double> values, double p);

// Per size-bucket slowdown statistics; empty buckets are omitted.
std::vector<BucketStats> slowdown_summary(const std::vector<FlowRecord>& records,
                                          const std::vector<std::int64_t>& bucket_bounds);

// Ideal FCT of a flow on an otherwise empty network: full-size serialization
// at the bottleneck, store-and-forward of the final packet at each later hop,
// both directions' propagation, and one ACK serialization for the return.
SimTime ideal_fct(std::int64_t size_bytes, const std::vector<LinkSpec>& forward_links);

class Metrics {
public:
    void record_series(SimTime t, int node, int port, std::string metric, double value) {
        series_.push_back(SeriesSample{t, node, port, std::move(metric), value});
    }
    void record_pause(SimTime t, int node, int port) {
        ++pause_total_;
        ++pause_by_node_[node];
        record_series(t, node, port, "pause", 1.0);
    }
    void observe_queue(int node, int port, std::int64_t qlen) {
        auto& pk = peak_queue_[{node, port}];
        if (qlen > pk) pk = qlen;
    }
    void record_flow(FlowRecord r) { flows_.push_back(std::move(r)); }
    void record_window(std::uint32_t flow, WindowSample s) {
        window_trace_[flow].push_back(s);
    }
    void record_flow_series(SimTime t, std::uint32_t flow, std::string metric, double value) {
        flow_series_.push_back(FlowSeriesSample{t, flow, std::move(metric), value});
    }
    void record_lhcs(LhcsEvent e) { lhcs_events_.push_back(e); }

    const std::vector<SeriesSample>& series() const { return series_; }
    const std::vector<FlowRecord>& flows() const { return flows_; }
    std::int64_t pause_frames_total() const { return pause_total_; }
    const std::map<int, std::int64_t>& pause_frames_by_node() const { return pause_by_node_; }
    const std::map<std::pair<int, int>, std::int64_t>& peak_queues() const { return peak_queue_; }
    std::int64_t peak_queue(int node, int port) const {
        auto it = peak_queue_.find({node, port});
        return it == peak_queue_.end() ? 0 : it->second;
    }
    std::int64_t global_peak_queue() const;
    const std::map<std::uint32_t, std::vector<WindowSample>>& window_traces() const {
        return window_trace_;
    }
    const std::vector<FlowSeriesSample>& flow_series() const { return flow_series_; }
    const std::vector<LhcsEvent>& lhcs_events() const { return lhcs_events_; }

    void write_series_csv(const std::string& path, const Topology& topo) const;
    void write_flows_csv(const std::string& path) const;
    // Ordered JSON text: per-bucket statistics, pause counts, peak queue,
    // mean utilization per port.
    std::string summary_json(const Topology& topo,
                             const std::vector<std::int64_t>& bucket_bounds) const;

private:
    std::vector<SeriesSample> series_;
    std::vector<FlowRecord> flows_;
    std::map<std::pair<int, int>, std::int64_t> peak_queue_;
    std::map<int, std::int64_t> pause_by_node_;
    std::int64_t pause_total_ = 0;
    std::map<std::uint32_t, std::vector<WindowSample>> window_trace_;
    std::vector<FlowSeriesSample> flow_series_;
    std::vector<LhcsEvent> lhcs_events_;
};

} // namespace fnccsim

#endif
