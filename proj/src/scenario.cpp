#include "scenario.hpp"

#include <filesystem>
#include <fstream>

namespace fnccsim {

Scenario::Scenario(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
    topo_ = std::make_unique<Topology>(cfg_.build_topology());
    engine_ = std::make_unique<Engine>(cfg_.seed);
    net_ = std::make_unique<Network>(*engine_, *topo_, cfg_, metrics_);

    std::vector<FlowSpec> flows;
    if (cfg_.workload_kind == ScenarioConfig::WorkloadKind::Script) {
        flows = script_flows(cfg_.script);
    } else {
        FlowSizeCdf cdf = FlowSizeCdf::from_file(cfg_.cdf_path);
        std::vector<std::string> names;
        for (int h : topo_->hosts()) names.push_back(topo_->nodes()[h].name);
        SimTime duration = cfg_.workload_duration > 0 ? cfg_.workload_duration : cfg_.end_time;
        RandomStream rng = engine_->rng("workload");
        flows = poisson_arrivals(cdf, cfg_.load, names, cfg_.link.rate_bps, duration, rng);
    }
    RandomStream port_rng = engine_->rng("ports");
    for (auto& f : flows) {
        // Auto ports get random values so ECMP spreads unpinned flows.
        if (f.src_port == 0) {
            f.src_port = static_cast<std::uint16_t>(1024 + port_rng.uniform_int(64512));
        }
        if (f.dst_port == 0) f.dst_port = 4791;
        net_->add_flow(f);
    }
    net_->start(cfg_.end_time);
}

Engine::RunSummary Scenario::run() { return engine_->run_until(cfg_.end_time); }

std::string Scenario::summary_json() const {
    return metrics_.summary_json(*topo_, cfg_.size_buckets);
}

void Scenario::write_outputs(const std::string& out_dir) const {
    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);
    metrics_.write_series_csv((dir / "series.csv").string(), *topo_);
    metrics_.write_flows_csv((dir / "flows.csv").string());
    std::ofstream((dir / "summary.json").string(), std::ios::binary) << summary_json();
    std::ofstream((dir / "config.json").string(), std::ios::binary) << cfg_.dump_json();
}

} // namespace fnccsim
