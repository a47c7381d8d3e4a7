#ifndef FNCCSIM_SCENARIO_HPP
#define FNCCSIM_SCENARIO_HPP

#include <memory>
#include <string>

#include "config.hpp"
#include "engine.hpp"
#include "metrics.hpp"
#include "network.hpp"
#include "topology.hpp"

namespace fnccsim {

// A fully wired simulation run: owns the engine, topology, network and
// metrics so callers can run a scenario and inspect or export the results.
class Scenario {
public:
    explicit Scenario(ScenarioConfig cfg);

    // Runs to cfg.end_time and returns the engine summary.
    Engine::RunSummary run();

    // Writes series.csv, flows.csv, summary.json and config.json to out_dir
    // (created if missing).
    void write_outputs(const std::string& out_dir) const;

    std::string summary_json() const;

    const ScenarioConfig& config() const { return cfg_; }
    const Topology& topology() const { return *topo_; }
    Engine& engine() { return *engine_; }
    Network& network() { return *net_; }
    const Metrics& metrics() const { return metrics_; }

private:
    ScenarioConfig cfg_;
    std::unique_ptr<Topology> topo_;
    std::unique_ptr<Engine> engine_;
    Metrics metrics_;
    std::unique_ptr<Network> net_;
};

} // namespace fnccsim

#endif
