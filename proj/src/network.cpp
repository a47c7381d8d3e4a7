#include "network.hpp"

#include <algorithm>
#include <cmath>

namespace fnccsim {

namespace {
constexpr std::int64_t kAckWireBase = kAckBaseBytes + kAckConcurrencyFieldBytes;
}

Network::Network(Engine& engine, const Topology& topo, const ScenarioConfig& cfg,
                 Metrics& metrics)
    : engine_(engine), topo_(topo), cfg_(cfg), metrics_(metrics) {
    nodes_.resize(topo.nodes().size());
    util_last_tx_.resize(topo.nodes().size());
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        int pc = topo.port_count(static_cast<int>(n));
        nodes_[n].ports.resize(pc);
        util_last_tx_[n].assign(pc, 0);
        if (topo.nodes()[n].is_switch) {
            nodes_[n].int_table.resize(pc);
            nodes_[n].ingress_bytes.assign(pc, 0);
            nodes_[n].ingress_paused.assign(pc, 0);
        }
    }
    pfc_resume_threshold_ = static_cast<std::int64_t>(
        static_cast<double>(cfg.pfc_pause_threshold) * cfg.pfc_resume_fraction);
}

int Network::port_towards(int node, int peer) const {
    const auto& peers = topo_.nodes()[node].peers;
    for (int p = 0; p < static_cast<int>(peers.size()); ++p) {
        if (peers[p].node == peer) return p;
    }
    throw ConfigError("no port from node " + std::to_string(node) + " to " + std::to_string(peer));
}

std::int64_t Network::pause_frames_sent(int node) const {
    std::int64_t total = 0;
    for (const auto& p : nodes_[node].ports) total += p.pause_frames_sent;
    return total;
}

IntRecord Network::sample_port(int node, int port) const {
    // The timestamp is the port's last transmission instant, not the sampling
    // instant: tx-byte counters only advance at packet boundaries, so rates
    // computed between two samples are exact instead of quantization noise.
    const OutPort& p = nodes_[node].ports[port];
    return IntRecord{topo_.nodes()[node].links[port].rate_bps, p.last_tx_ts, p.tx_bytes,
                     p.data_bytes};
}

void Network::refresh_int_table(int node) {
    auto& tbl = nodes_[node].int_table;
    for (std::size_t p = 0; p < tbl.size(); ++p) {
        tbl[p] = sample_port(node, static_cast<int>(p));
    }
}

std::uint32_t Network::add_flow(const FlowSpec& spec) {
    FlowState f;
    f.id = static_cast<std::uint32_t>(flows_.size());
    f.src_name = spec.src;
    f.dst_name = spec.dst;
    f.tuple.src_node = topo_.node_by_name(spec.src);
    f.tuple.dst_node = topo_.node_by_name(spec.dst);
    f.tuple.src_port = spec.src_port ? spec.src_port : static_cast<std::uint16_t>(1000 + f.id % 60000);
    f.tuple.dst_port = spec.dst_port ? spec.dst_port : 4791;
    f.size = spec.size_bytes;
    f.start = spec.start;
    f.stop_at = spec.stop_at;
    flows_.push_back(std::move(f));
    rate_last_delivered_.push_back(0);
    std::uint32_t id = flows_.back().id;
    engine_.schedule_at(spec.start, [this, id] { start_flow(flows_[id]); });
    if (spec.stop_at >= 0) {
        engine_.schedule_at(spec.stop_at, [this, id] { stop_flow(flows_[id]); });
    }
    return id;
}

void Network::start_flow(FlowState& f) {
    auto path = topo_.path(f.tuple);
    SimTime t = 0;
    double bottleneck = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        int out = port_towards(path[i], path[i + 1]);
        LinkSpec link = topo_.nodes()[path[i]].links[out];
        f.fwd_links.push_back(link);
        t += 2 * link.propagation_delay_ns + serialize_ns(kMtuBytes, link.rate_bps) +
             serialize_ns(kAckWireBase, link.rate_bps);
        bottleneck = (bottleneck == 0) ? link.rate_bps : std::min(bottleneck, link.rate_bps);
    }
    f.base_rtt = t;
    f.bottleneck_bps = bottleneck;
    double bdp = bottleneck * static_cast<double>(t) / 8e9; // bytes

    CcParams params;
    params.eta = cfg_.eta;
    params.alpha = cfg_.alpha;
    params.beta = cfg_.beta;
    params.max_stage = cfg_.max_stage;
    params.ack_batch = cfg_.ack_batch;
    params.mode = cfg_.cc_mode;
    params.lhcs_bw = cfg_.lhcs_bw;
    params.base_rtt_ns = t;
    params.w_ai_bytes = cfg_.w_ai_bytes > 0 ? cfg_.w_ai_bytes
                                            : std::ceil(bdp * (1.0 - cfg_.eta) / 64.0);
    params.w_min_bytes = kMtuBytes;
    params.w_max_bytes = 16.0 * bdp;
    f.cc = std::make_unique<CcSender>(params, bdp);
    f.rate_bps = f.fwd_links.front().rate_bps; // start at line rate
    f.started = true;
    try_send(f);
}

void Network::stop_flow(FlowState& f) {
    if (f.done || !f.started) return;
    if (f.snd_nxt >= f.size) return; // already fully sent
    // Truncate; a one-byte tail marks the end so the receiver closes the flow.
    f.size = f.snd_nxt + 1;
    try_send(f);
}

void Network::try_send(FlowState& f) {
    while (!f.done && f.snd_nxt < f.size) {
        std::int64_t pkt_size = std::min<std::int64_t>(kMtuBytes, f.size - f.snd_nxt);
        if (static_cast<double>(f.inflight + pkt_size) > f.cc->window()) return; // ack-clocked
        SimTime now = engine_.now();
        if (now < f.next_allowed) {
            if (!f.timer_pending) {
                f.timer_pending = true;
                std::uint32_t id = f.id;
                engine_.schedule_at(f.next_allowed, [this, id] {
                    flows_[id].timer_pending = false;
                    try_send(flows_[id]);
                });
            }
            return;
        }
        Packet pkt;
        pkt.kind = PacketKind::Data;
        pkt.flow_id = f.id;
        pkt.tuple = f.tuple;
        pkt.size_bytes = pkt_size;
        pkt.seq_end = f.snd_nxt + pkt_size;
        pkt.last_of_flow = (pkt.seq_end == f.size);
        f.snd_nxt += pkt_size;
        f.inflight += pkt_size;
        total_sent_ += pkt_size;
        enqueue(f.tuple.src_node, 0, std::move(pkt), -1);
        f.next_allowed = std::max(now, f.next_allowed) + serialize_ns(pkt_size, f.rate_bps);
    }
}

void Network::enqueue(int node, int out_port, Packet pkt, int in_port) {
    NodeState& ns = nodes_[node];
    OutPort& port = ns.ports[out_port];
    if (pkt.kind == PacketKind::Data) {
        pkt.input_port_meta = (topo_.nodes()[node].is_switch) ? in_port : -1;
        port.data_q.push_back(std::move(pkt));
        port.data_bytes += port.data_q.back().size_bytes;
        if (topo_.nodes()[node].is_switch) {
            metrics_.observe_queue(node, out_port, port.data_bytes);
            if (in_port >= 0) {
                ns.ingress_bytes[in_port] += port.data_q.back().size_bytes;
                pfc_after_enqueue(node, in_port);
            }
        }
    } else {
        // ACKs and PFC frames never queue behind data (Observation 3); they
        // still occupy link serialization time.
        port.ctrl_q.push_back(std::move(pkt));
    }
    maybe_start_tx(node, out_port);
}

void Network::pfc_after_enqueue(int node, int in_port) {
    if (!cfg_.pfc_enabled) return;
    NodeState& ns = nodes_[node];
    if (!ns.ingress_paused[in_port] && ns.ingress_bytes[in_port] > cfg_.pfc_pause_threshold) {
        ns.ingress_paused[in_port] = 1;
        Packet pause;
        pause.kind = PacketKind::Pause;
        pause.size_bytes = kPauseFrameBytes;
        nodes_[node].ports[in_port].pause_frames_sent++;
        metrics_.record_pause(engine_.now(), node, in_port);
        enqueue(node, in_port, std::move(pause), -1);
    }
}

void Network::pfc_after_dequeue(int node, int in_port) {
    if (!cfg_.pfc_enabled || in_port < 0) return;
    NodeState& ns = nodes_[node];
    if (ns.ingress_paused[in_port] && ns.ingress_bytes[in_port] <= pfc_resume_threshold_) {
        ns.ingress_paused[in_port] = 0;
        Packet resume;
        resume.kind = PacketKind::Resume;
        resume.size_bytes = kPauseFrameBytes;
        enqueue(node, in_port, std::move(resume), -1);
    }
}

void Network::maybe_start_tx(int node, int port_idx) {
    NodeState& ns = nodes_[node];
    OutPort& port = ns.ports[port_idx];
    if (port.busy) return;
    bool is_switch = topo_.nodes()[node].is_switch;
    Packet pkt;
    if (!port.ctrl_q.empty()) {
        pkt = std::move(port.ctrl_q.front());
        port.ctrl_q.pop_front();
        if (is_switch && pkt.kind == PacketKind::Ack && cfg_.cc_mode != CcMode::Hpcc) {
            // CP rule: stamp the INT of the request path's output port, which
            // is the ACK's input port on this switch.
            int src_port = pkt.input_port_meta;
            if (src_port < 0 || src_port >= static_cast<int>(ns.ports.size())) {
                throw ProtocolError("ACK input port metadata out of range");
            }
            IntRecord rec = (cfg_.int_refresh_ns == 0) ? sample_port(node, src_port)
                                                       : ns.int_table[src_port];
            pkt.int_list.push_back(rec);
            pkt.size_bytes += kIntEntryBytes;
        }
    } else if (!port.paused && !port.data_q.empty()) {
        pkt = std::move(port.data_q.front());
        port.data_q.pop_front();
        port.data_bytes -= pkt.size_bytes;
        if (is_switch) {
            int in_port = pkt.input_port_meta;
            if (in_port >= 0) ns.ingress_bytes[in_port] -= pkt.size_bytes;
            if (cfg_.cc_mode == CcMode::Hpcc) {
                pkt.int_list.push_back(sample_port(node, port_idx));
                pkt.size_bytes += kIntEntryBytes;
            }
            pfc_after_dequeue(node, in_port);
        }
    } else {
        return;
    }
    port.busy = true;
    port.tx_bytes += pkt.size_bytes;
    port.last_tx_ts = engine_.now();
    const LinkSpec& link = topo_.nodes()[node].links[port_idx];
    SimTime ser = serialize_ns(pkt.size_bytes, link.rate_bps);
    Topology::PortPeer peer = topo_.nodes()[node].peers[port_idx];
    engine_.schedule_in(ser, [this, node, port_idx] {
        nodes_[node].ports[port_idx].busy = false;
        maybe_start_tx(node, port_idx);
    });
    engine_.schedule_in(ser + link.propagation_delay_ns,
                        [this, peer, pkt = std::move(pkt)]() mutable {
                            on_arrival(peer.node, peer.port, std::move(pkt));
                        });
}

void Network::on_arrival(int node, int port, Packet pkt) {
    if (pkt.kind == PacketKind::Pause) {
        nodes_[node].ports[port].paused = true;
        return;
    }
    if (pkt.kind == PacketKind::Resume) {
        nodes_[node].ports[port].paused = false;
        maybe_start_tx(node, port);
        return;
    }
    if (topo_.nodes()[node].is_switch) {
        if (pkt.kind == PacketKind::Ack) pkt.input_port_meta = port;
        int out = topo_.route(node, pkt.tuple);
        enqueue(node, out, std::move(pkt), port);
        return;
    }
    // Host.
    if (pkt.kind == PacketKind::Data) {
        receiver_on_data(node, pkt);
    } else {
        sender_on_ack(flows_[pkt.flow_id], pkt);
    }
}

void Network::receiver_on_data(int host, const Packet& pkt) {
    NodeState& ns = nodes_[host];
    auto [it, inserted] = ns.recv.try_emplace(pkt.flow_id);
    RecvFlow& rf = it->second;
    if (inserted) {
        rf.open = true;
        ++ns.open_inbound;
    }
    // Wire size grows with appended INT (HPCC), so progress is tracked via
    // sequence numbers: a single-path lossless fabric delivers in order.
    std::int64_t payload = pkt.seq_end - rf.received;
    if (payload <= 0 || payload > kMtuBytes) {
        throw ProtocolError("out-of-order data under symmetric single-path routing");
    }
    rf.received = pkt.seq_end;
    ++rf.since_ack;
    FlowState& f = flows_[pkt.flow_id];
    f.delivered += payload;
    total_delivered_ += payload;
    if (rf.since_ack >= cfg_.ack_batch || pkt.last_of_flow) {
        Packet ack;
        ack.kind = PacketKind::Ack;
        ack.flow_id = pkt.flow_id;
        ack.tuple = pkt.tuple.reversed();
        ack.ack_seq = rf.received;
        // N counts flows with unfinished inbound data at this host; the
        // flow's own final ACK still counts itself.
        ack.concurrency_n =
            static_cast<std::uint16_t>(std::min(ns.open_inbound, 65535));
        ack.size_bytes = kAckWireBase;
        if (cfg_.cc_mode == CcMode::Hpcc) {
            ack.int_list = pkt.int_list; // echo the data path's INT
            ack.size_bytes += kIntEntryBytes * static_cast<std::int64_t>(ack.int_list.size());
        }
        rf.since_ack = 0;
        enqueue(host, 0, std::move(ack), -1);
    }
    if (pkt.last_of_flow && rf.open) {
        rf.open = false;
        --ns.open_inbound;
    }
}

void Network::sender_on_ack(FlowState& f, const Packet& pkt) {
    if (f.done) return;
    if (pkt.ack_seq <= f.acked) {
        ++f.stale_acks;
        return;
    }
    f.inflight -= pkt.ack_seq - f.acked;
    f.acked = pkt.ack_seq;
    std::vector<IntRecord> records = pkt.int_list;
    if (cfg_.cc_mode != CcMode::Hpcc) {
        // FNCC appends last-request-hop first; normalize to request order.
        std::reverse(records.begin(), records.end());
    }
    auto res = f.cc->on_new_ack(records, pkt.ack_seq, pkt.concurrency_n, f.snd_nxt);
    if (res.window_updated) {
        f.rate_bps = res.window * 8e9 / static_cast<double>(f.base_rtt);
        if (cfg_.window_trace) {
            metrics_.record_window(f.id, WindowSample{engine_.now(), res.window, res.u,
                                                      res.lhcs_triggered, res.wc_synced});
        }
        if (res.lhcs_triggered) {
            metrics_.record_lhcs(LhcsEvent{engine_.now(), f.id, f.cc->last_lhcs_wc(),
                                           f.cc->last_lhcs_bw_bps(), f.cc->last_lhcs_n()});
        }
    }
    if (f.acked >= f.size) {
        complete_flow(f);
    } else {
        try_send(f);
    }
}

void Network::complete_flow(FlowState& f) {
    f.done = true;
    FlowRecord r;
    r.flow_id = f.id;
    r.src = f.src_name;
    r.dst = f.dst_name;
    r.size_bytes = f.size;
    r.start = f.start;
    r.finish = engine_.now();
    r.ideal_fct = ideal_fct(f.size, f.fwd_links);
    r.slowdown = static_cast<double>(r.finish - r.start) / static_cast<double>(r.ideal_fct);
    metrics_.record_flow(std::move(r));
}

void Network::start(SimTime end_time) {
    end_time_ = end_time;
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        if (!topo_.nodes()[n].is_switch) continue;
        refresh_int_table(static_cast<int>(n));
    }
    if (cfg_.int_refresh_ns > 0) {
        struct Refresher {
            Network* net;
            void operator()() const {
                for (std::size_t n = 0; n < net->nodes_.size(); ++n) {
                    if (net->topo_.nodes()[n].is_switch) net->refresh_int_table(static_cast<int>(n));
                }
                SimTime next = net->engine_.now() + net->cfg_.int_refresh_ns;
                if (next <= net->end_time_) net->engine_.schedule_at(next, *this);
            }
        };
        engine_.schedule_at(cfg_.int_refresh_ns, Refresher{this});
    }
    if (cfg_.queue_sample_ns > 0) {
        struct QueueSampler {
            Network* net;
            void operator()() const {
                SimTime now = net->engine_.now();
                for (std::size_t n = 0; n < net->nodes_.size(); ++n) {
                    if (!net->topo_.nodes()[n].is_switch) continue;
                    for (std::size_t p = 0; p < net->nodes_[n].ports.size(); ++p) {
                        net->metrics_.record_series(
                            now, static_cast<int>(n), static_cast<int>(p), "qlen",
                            static_cast<double>(net->nodes_[n].ports[p].data_bytes));
                    }
                }
                SimTime next = now + net->cfg_.queue_sample_ns;
                if (next <= net->end_time_) net->engine_.schedule_at(next, *this);
            }
        };
        engine_.schedule_at(0, QueueSampler{this});
    }
    if (cfg_.util_window_ns > 0) {
        struct UtilSampler {
            Network* net;
            void operator()() const {
                SimTime now = net->engine_.now();
                for (std::size_t n = 0; n < net->nodes_.size(); ++n) {
                    if (!net->topo_.nodes()[n].is_switch) continue;
                    for (std::size_t p = 0; p < net->nodes_[n].ports.size(); ++p) {
                        std::int64_t tx = net->nodes_[n].ports[p].tx_bytes;
                        std::int64_t delta = tx - net->util_last_tx_[n][p];
                        net->util_last_tx_[n][p] = tx;
                        double cap = net->topo_.nodes()[n].links[p].rate_bps *
                                     static_cast<double>(net->cfg_.util_window_ns) / 8e9;
                        net->metrics_.record_series(now, static_cast<int>(n), static_cast<int>(p),
                                                    "util",
                                                    std::min(1.0, static_cast<double>(delta) / cap));
                    }
                }
                SimTime next = now + net->cfg_.util_window_ns;
                if (next <= net->end_time_) net->engine_.schedule_at(next, *this);
            }
        };
        engine_.schedule_at(cfg_.util_window_ns, UtilSampler{this});
    }
    if (cfg_.rate_sample_ns > 0) {
        struct RateSampler {
            Network* net;
            void operator()() const {
                SimTime now = net->engine_.now();
                for (const auto& f : net->flows_) {
                    if (!f.started) continue;
                    std::int64_t delta = f.delivered - net->rate_last_delivered_[f.id];
                    net->rate_last_delivered_[f.id] = f.delivered;
                    if (f.done && delta == 0) continue;
                    double bps = static_cast<double>(delta) * 8e9 /
                                 static_cast<double>(net->cfg_.rate_sample_ns);
                    net->metrics_.record_flow_series(now, f.id, "goodput_bps", bps);
                }
                SimTime next = now + net->cfg_.rate_sample_ns;
                if (next <= net->end_time_) net->engine_.schedule_at(next, *this);
            }
        };
        engine_.schedule_at(cfg_.rate_sample_ns, RateSampler{this});
    }
}

} // namespace fnccsim
