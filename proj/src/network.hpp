#ifndef FNCCSIM_NETWORK_HPP
#define FNCCSIM_NETWORK_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cc.hpp"
#include "config.hpp"
#include "engine.hpp"
#include "metrics.hpp"
#include "packet.hpp"
#include "topology.hpp"
#include "workload.hpp"

namespace fnccsim {

// Runtime network: device state per topology node, link serialization,
// PFC, the switches' All_INT_Table, and host transport endpoints.
// Everything runs on the engine's single thread.
class Network {
public:
    Network(Engine& engine, const Topology& topo, const ScenarioConfig& cfg, Metrics& metrics);

    // Registers a flow and schedules its start (and optional stop) events.
    std::uint32_t add_flow(const FlowSpec& spec);

    // Schedules the periodic samplers and INT table refresh up to end_time.
    void start(SimTime end_time);

    struct FlowState {
        std::uint32_t id = 0;
        FiveTuple tuple;
        std::string src_name, dst_name;
        std::int64_t size = 0;
        SimTime start = 0;
        SimTime stop_at = -1;
        std::int64_t snd_nxt = 0;
        std::int64_t acked = 0;
        std::int64_t inflight = 0;
        std::int64_t delivered = 0; // receiver-side
        std::int64_t stale_acks = 0;
        SimTime base_rtt = 0;
        double bottleneck_bps = 0;
        double rate_bps = 0;
        SimTime next_allowed = 0;
        bool timer_pending = false;
        bool started = false;
        bool done = false;
        std::vector<LinkSpec> fwd_links;
        std::unique_ptr<CcSender> cc;
    };

    const std::vector<FlowState>& flows() const { return flows_; }
    std::int64_t total_sent_bytes() const { return total_sent_; }
    std::int64_t total_delivered_bytes() const { return total_delivered_; }
    std::int64_t pause_frames_sent(int node) const;

    // Port handle for tests: (node, port) of the egress from `node` toward
    // its neighbor `peer`.
    int port_towards(int node, int peer) const;

private:
    struct OutPort {
        std::deque<Packet> data_q;
        std::deque<Packet> ctrl_q;
        std::int64_t data_bytes = 0;
        bool busy = false;
        bool paused = false; // peer sent XOFF
        std::int64_t tx_bytes = 0;
        SimTime last_tx_ts = 0; // when tx_bytes last advanced
        std::int64_t pause_frames_sent = 0;
    };
    struct RecvFlow {
        std::int64_t received = 0;
        int since_ack = 0;
        bool open = false;
    };
    struct NodeState {
        std::vector<OutPort> ports;
        // Switch-only state.
        std::vector<IntRecord> int_table;
        std::vector<std::int64_t> ingress_bytes; // PFC attribution per input port
        std::vector<char> ingress_paused;
        // Host-only state.
        std::map<std::uint32_t, RecvFlow> recv;
        int open_inbound = 0;
    };

    void on_arrival(int node, int port, Packet pkt);
    void enqueue(int node, int out_port, Packet pkt, int in_port);
    void maybe_start_tx(int node, int port);
    IntRecord sample_port(int node, int port) const;
    void refresh_int_table(int node);
    void pfc_after_enqueue(int node, int in_port);
    void pfc_after_dequeue(int node, int in_port);

    void start_flow(FlowState& f);
    void stop_flow(FlowState& f);
    void try_send(FlowState& f);
    void sender_on_ack(FlowState& f, const Packet& pkt);
    void receiver_on_data(int host, const Packet& pkt);
    void complete_flow(FlowState& f);

    Engine& engine_;
    const Topology& topo_;
    const ScenarioConfig& cfg_;
    Metrics& metrics_;
    std::vector<NodeState> nodes_;
    std::vector<FlowState> flows_;
    std::int64_t total_sent_ = 0;
    std::int64_t total_delivered_ = 0;
    std::int64_t pfc_resume_threshold_ = 0;
    SimTime end_time_ = 0;
    std::vector<std::vector<std::int64_t>> util_last_tx_; // per node/port
    std::vector<std::int64_t> rate_last_delivered_;       // per flow
};

} // namespace fnccsim

#endif
