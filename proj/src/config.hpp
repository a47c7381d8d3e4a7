#ifndef FNCCSIM_CONFIG_HPP
#define FNCCSIM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cc.hpp"
#include "topology.hpp"
#include "workload.hpp"

namespace fnccsim {

// Fully resolved scenario description. Parsed from a JSON config file;
// unknown keys and out-of-range values are rejected with context.
struct ScenarioConfig {
    std::string name = "scenario";
    std::uint64_t seed = 1;
    SimTime end_time = 0;

    enum class TopoKind { Dumbbell, Chain, Tree, FatTree };
    TopoKind topo_kind = TopoKind::Dumbbell;
    int switches = 3;
    int senders = 2;
    int fattree_k = 4;
    std::vector<int> hosts_per_switch;                 // chain and tree
    std::vector<std::pair<int, int>> switch_links;     // tree only
    LinkSpec link{100e9, 1500};

    CcMode cc_mode = CcMode::Fncc;
    double eta = 0.95;
    double alpha = 1.05;
    double beta = 0.9;
    double w_ai_bytes = 0; // 0 = auto: ceil(BDP * (1 - eta) / 64)
    int max_stage = 5;
    int ack_batch = 1;
    LhcsBandwidthSource lhcs_bw = LhcsBandwidthSource::LastHop;

    bool pfc_enabled = true;
    std::int64_t pfc_pause_threshold = 500000;
    double pfc_resume_fraction = 0.8;

    SimTime int_refresh_ns = 1000; // 0 = sample at ACK stamping instant

    enum class WorkloadKind { Script, Poisson };
    WorkloadKind workload_kind = WorkloadKind::Script;
    std::vector<FlowSpec> script;
    std::string cdf_path;
    double load = 0.5;
    SimTime workload_duration = 0; // 0 = end_time

    SimTime queue_sample_ns = 1000;   // 0 = off
    SimTime rate_sample_ns = 1000;    // 0 = off
    SimTime util_window_ns = 10000;   // 0 = off
    bool window_trace = false;
    std::vector<std::int64_t> size_buckets{10000, 100000, 1000000, 10000000};

    Topology build_topology() const;
    std::string dump_json() const; // resolved config; itself a valid input
};

ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

// Applies a dotted-path override ("cc.mode=hpcc", "topology.link.rate_gbps=200")
// to JSON text and returns the modified text.
std::string apply_override(const std::string& json_text, const std::string& key,
                           const std::string& value);

const char* cc_mode_name(CcMode m);

} // namespace fnccsim

#endif
