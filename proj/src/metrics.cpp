#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "packet.hpp"
#include <json.hpp>

namespace fnccsim {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

double nearest_rank(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return values[rank - 1];
}

std::vector<BucketStats> slowdown_summary(const std::vector<FlowRecord>& records,
                                          const std::vector<std::int64_t>& bucket_bounds) {
    // bucket_bounds are upper edges; a final open bucket catches the rest.
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    std::int64_t lo = 0;
    for (std::int64_t b : bucket_bounds) {
        ranges.emplace_back(lo, b);
        lo = b;
    }
    ranges.emplace_back(lo, std::numeric_limits<std::int64_t>::max());

    std::vector<BucketStats> out;
    for (auto [blo, bhi] : ranges) {
        std::vector<double> s;
        for (const auto& r : records) {
            if (r.size_bytes >= blo && r.size_bytes < bhi) s.push_back(r.slowdown);
        }
        if (s.empty()) continue;
        BucketStats bs;
        bs.lo = blo;
        bs.hi = bhi;
        bs.count = s.size();
        double sum = 0;
        for (double v : s) sum += v;
        bs.mean = sum / static_cast<double>(s.size());
        bs.median = nearest_rank(s, 50);
        bs.p95 = nearest_rank(s, 95);
        bs.p99 = nearest_rank(s, 99);
        out.push_back(bs);
    }
    return out;
}

SimTime ideal_fct(std::int64_t size_bytes, const std::vector<LinkSpec>& forward_links) {
    double bottleneck = forward_links.front().rate_bps;
    SimTime prop = 0;
    for (const auto& l : forward_links) {
        bottleneck = std::min(bottleneck, l.rate_bps);
        prop += l.propagation_delay_ns;
    }
    std::int64_t tail = size_bytes % kMtuBytes;
    if (tail == 0) tail = std::min<std::int64_t>(size_bytes, kMtuBytes);
    SimTime t = serialize_ns(size_bytes, bottleneck) + prop;
    for (std::size_t i = 1; i < forward_links.size(); ++i) {
        t += serialize_ns(tail, forward_links[i].rate_bps);
    }
    // ACK return: propagation plus one serialization at the last-hop rate.
    std::int64_t ack_bytes = kAckBaseBytes + kAckConcurrencyFieldBytes;
    t += prop + serialize_ns(ack_bytes, forward_links.back().rate_bps);
    return t;
}

std::int64_t Metrics::global_peak_queue() const {
    std::int64_t pk = 0;
    for (const auto& [key, v] : peak_queue_) pk = std::max(pk, v);
    return pk;
}

void Metrics::write_series_csv(const std::string& path, const Topology& topo) const {
    std::ofstream f(path, std::ios::binary);
    f << "t_ns,node,port,metric,value\n";
    for (const auto& s : series_) {
        f << s.t << ',' << topo.nodes()[s.node].name << ',' << s.port << ',' << s.metric << ','
          << fmt_double(s.value) << '\n';
    }
    for (const auto& s : flow_series_) {
        f << s.t << ",flow_" << s.flow << ",0," << s.metric << ',' << fmt_double(s.value) << '\n';
    }
    for (const auto& [flow, trace] : window_trace_) {
        for (const auto& w : trace) {
            f << w.t << ",flow_" << flow << ",0,window_bytes," << fmt_double(w.window) << '\n';
            f << w.t << ",flow_" << flow << ",0,u," << fmt_double(w.u) << '\n';
            if (w.lhcs) f << w.t << ",flow_" << flow << ",0,lhcs,1\n";
        }
    }
}

void Metrics::write_flows_csv(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    f << "flow_id,src,dst,size_bytes,start_ns,finish_ns,ideal_fct_ns,slowdown\n";
    for (const auto& r : flows_) {
        f << r.flow_id << ',' << r.src << ',' << r.dst << ',' << r.size_bytes << ',' << r.start
          << ',' << r.finish << ',' << r.ideal_fct << ',' << fmt_double(r.slowdown) << '\n';
    }
}

std::string Metrics::summary_json(const Topology& topo,
                                  const std::vector<std::int64_t>& bucket_bounds) const {
    nlohmann::ordered_json j;
    j["flows_completed"] = flows_.size();
    auto buckets = slowdown_summary(flows_, bucket_bounds);
    j["slowdown_buckets"] = nlohmann::ordered_json::array();
    for (const auto& b : buckets) {
        nlohmann::ordered_json jb;
        jb["size_lo"] = b.lo;
        jb["size_hi"] = (b.hi == std::numeric_limits<std::int64_t>::max()) ? -1 : b.hi;
        jb["count"] = b.count;
        jb["mean"] = b.mean;
        jb["median"] = b.median;
        jb["p95"] = b.p95;
        jb["p99"] = b.p99;
        j["slowdown_buckets"].push_back(jb);
    }
    j["pause_frames_total"] = pause_total_;
    nlohmann::ordered_json jp = nlohmann::ordered_json::object();
    for (const auto& [node, count] : pause_by_node_) jp[topo.nodes()[node].name] = count;
    j["pause_frames_by_node"] = jp;
    j["peak_queue_bytes"] = global_peak_queue();
    nlohmann::ordered_json jq = nlohmann::ordered_json::object();
    for (const auto& [key, v] : peak_queue_) {
        jq[topo.nodes()[key.first].name + ":" + std::to_string(key.second)] = v;
    }
    j["peak_queue_by_port"] = jq;
    // Mean utilization per port over the whole run, from the sampled series.
    std::map<std::pair<int, int>, std::pair<double, std::int64_t>> util;
    for (const auto& s : series_) {
        if (s.metric == "util") {
            auto& u = util[{s.node, s.port}];
            u.first += s.value;
            u.second += 1;
        }
    }
    nlohmann::ordered_json ju = nlohmann::ordered_json::object();
    for (const auto& [key, v] : util) {
        ju[topo.nodes()[key.first].name + ":" + std::to_string(key.second)] =
            v.first / static_cast<double>(v.second);
    }
    j["mean_utilization_by_port"] = ju;
    return j.dump(2) + "\n";
}

} // namespace fnccsim
