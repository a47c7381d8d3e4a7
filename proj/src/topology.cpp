#include "topology.hpp"

#include <algorithm>
#include <sstream>

namespace fnccsim {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t canonical_hash(const FiveTuple& t) {
    // Order the (addr, port) endpoint pairs; the is_ack direction flag is
    // excluded so a data packet and its ACK hash identically.
    std::uint64_t a = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(t.src_node)) << 16) | t.src_port;
    std::uint64_t b = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(t.dst_node)) << 16) | t.dst_port;
    if (a > b) std::swap(a, b);
    return mix64(a * 0x9e3779b97f4a7c15ULL + mix64(b));
}

int Topology::node_by_name(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw ConfigError("unknown node name: " + name);
    return it->second;
}

int Topology::add_host(const std::string& name) {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{false, name, 0, {}, {}});
    candidates_.emplace_back();
    hosts_.push_back(id);
    by_name_[name] = id;
    return id;
}

int Topology::add_switch(const std::string& name, int level) {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{true, name, level, {}, {}});
    candidates_.emplace_back();
    by_name_[name] = id;
    return id;
}

void Topology::connect(int a, int b, LinkSpec link) {
    int pa = static_cast<int>(nodes_[a].peers.size());
    int pb = static_cast<int>(nodes_[b].peers.size());
    nodes_[a].peers.push_back(PortPeer{b, pb});
    nodes_[a].links.push_back(link);
    nodes_[b].peers.push_back(PortPeer{a, pa});
    nodes_[b].links.push_back(link);
}

int Topology::route(int switch_id, const FiveTuple& t) const {
    const auto& table = candidates_[switch_id];
    auto it = table.find(t.dst_node);
    if (it == table.end() || it->second.empty()) {
        throw ConfigError("destination unreachable from switch " + nodes_[switch_id].name);
    }
    const auto& cands = it->second;
    if (cands.size() == 1) return cands[0];
    std::uint64_t h = canonical_hash(t) >> (16 * nodes_[switch_id].level);
    return cands[h % cands.size()];
}

std::vector<int> Topology::path(const FiveTuple& t) const {
    std::vector<int> p{t.src_node};
    int cur = nodes_[t.src_node].peers.at(0).node; // hosts have a single NIC
    while (true) {
        p.push_back(cur);
        if (cur == t.dst_node) break;
        if (p.size() > nodes_.size()) throw ConfigError("routing loop detected");
        int out = route(cur, t);
        cur = nodes_[cur].peers[out].node;
    }
    return p;
}

Topology Topology::build_dumbbell(int num_switches, int num_senders, LinkSpec link) {
    if (num_switches < 1 || num_senders < 1) {
        throw ConfigError("dumbbell requires at least one switch and one sender");
    }
    std::vector<int> hosts_per_switch(num_switches, 0);
    hosts_per_switch[0] = num_senders;
    Topology topo = build_chain(hosts_per_switch, link);
    // One receiver on the last switch.
    int r = topo.add_host("r0");
    topo.connect(r, topo.node_by_name("sw" + std::to_string(num_switches - 1)), link);
    topo.rebuild_tables_for_tree();
    return topo;
}

Topology Topology::build_chain(const std::vector<int>& hosts_per_switch, LinkSpec link) {
    if (hosts_per_switch.empty()) throw ConfigError("chain requires at least one switch");
    if (link.rate_bps <= 0) throw ConfigError("link rate must be positive");
    if (link.propagation_delay_ns < 0) throw ConfigError("propagation delay must be >= 0");
    Topology topo;
    int m = static_cast<int>(hosts_per_switch.size());
    std::vector<int> switches;
    for (int i = 0; i < m; ++i) switches.push_back(topo.add_switch("sw" + std::to_string(i)));
    for (int i = 0; i + 1 < m; ++i) topo.connect(switches[i], switches[i + 1], link);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < hosts_per_switch[i]; ++j) {
            std::string name = (i == 0) ? "h" + std::to_string(j)
                                        : "h" + std::to_string(i) + "_" + std::to_string(j);
            int h = topo.add_host(name);
            topo.connect(h, switches[i], link);
        }
    }
    topo.rebuild_tables_for_tree();
    return topo;
}

void Topology::rebuild_tables_for_tree() {
    // Tree routing: unique path, so every table entry has one candidate —
    // the port whose subtree contains the destination host.
    for (std::size_t sw = 0; sw < nodes_.size(); ++sw) {
        if (!nodes_[sw].is_switch) continue;
        candidates_[sw].clear();
        for (int host : hosts_) {
            int chosen = -1;
            for (int port = 0; port < static_cast<int>(nodes_[sw].peers.size()); ++port) {
                int peer = nodes_[sw].peers[port].node;
                if (peer == host) {
                    chosen = port;
                    break;
                }
                if (nodes_[peer].is_switch && tree_subtree_contains(static_cast<int>(sw), peer, host)) {
                    chosen = port;
                    break;
                }
            }
            if (chosen >= 0) candidates_[sw][host] = {chosen};
        }
    }
}

bool Topology::tree_subtree_contains(int from, int sw, int host) const {
    // DFS away from `from` through the switch tree rooted at `sw`.
    for (const auto& peer : nodes_[sw].peers) {
        if (peer.node == host) return true;
        if (peer.node != from && nodes_[peer.node].is_switch &&
            tree_subtree_contains(sw, peer.node, host)) {
            return true;
        }
    }
    return false;
}

Topology Topology::build_tree(const std::vector<int>& hosts_per_switch,
                              const std::vector<std::pair<int, int>>& switch_links,
                              LinkSpec link) {
    if (hosts_per_switch.empty()) throw ConfigError("tree requires at least one switch");
    if (link.rate_bps <= 0) throw ConfigError("link rate must be positive");
    if (link.propagation_delay_ns < 0) throw ConfigError("propagation delay must be >= 0");
    Topology topo;
    int m = static_cast<int>(hosts_per_switch.size());
    std::vector<int> switches;
    for (int i = 0; i < m; ++i) switches.push_back(topo.add_switch("sw" + std::to_string(i)));
    for (auto [a, b] : switch_links) {
        if (a < 0 || a >= m || b < 0 || b >= m || a == b) {
            throw ConfigError("tree switch link endpoints out of range");
        }
        topo.connect(switches[a], switches[b], link);
    }
    if (static_cast<int>(switch_links.size()) != m - 1) {
        throw ConfigError("tree requires exactly (switches - 1) switch links");
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < hosts_per_switch[i]; ++j) {
            std::string name = (i == 0) ? "h" + std::to_string(j)
                                        : "h" + std::to_string(i) + "_" + std::to_string(j);
            int h = topo.add_host(name);
            topo.connect(h, switches[i], link);
        }
    }
    topo.rebuild_tables_for_tree();
    // With exactly m-1 edges, full route tables imply a connected (and
    // therefore acyclic) switch graph.
    for (int i = 0; i < m; ++i) {
        if (topo.candidates_[switches[i]].size() != topo.hosts_.size()) {
            throw ConfigError("tree switch graph is not connected");
        }
    }
    return topo;
}

Topology Topology::build_fattree(int k, LinkSpec link) {
    if (k < 2 || k % 2 != 0) throw ConfigError("fat-tree k must be even and >= 2");
    if (link.rate_bps <= 0) throw ConfigError("link rate must be positive");
    Topology topo;
    int half = k / 2;

    // Core (i, j): group i in [0, half), offset j in [0, half). Core (i, j)
    // connects to aggregation switch i of every pod, so a flow that picks
    // the same (agg index, core offset) from both ends retraces the exact
    // mirror path.
    std::vector<std::vector<int>> core(half, std::vector<int>(half));
    for (int i = 0; i < half; ++i)
        for (int j = 0; j < half; ++j)
            core[i][j] = topo.add_switch("core" + std::to_string(i) + "_" + std::to_string(j), 2);

    std::vector<std::vector<int>> agg(k), tor(k);
    for (int pod = 0; pod < k; ++pod) {
        for (int i = 0; i < half; ++i)
            agg[pod].push_back(topo.add_switch("agg" + std::to_string(pod) + "_" + std::to_string(i), 1));
        for (int i = 0; i < half; ++i)
            tor[pod].push_back(topo.add_switch("tor" + std::to_string(pod) + "_" + std::to_string(i), 0));
        // Ports are added in ascending (core offset / agg index) order so the
        // sorted candidate lists line up with the wiring indices.
        for (int i = 0; i < half; ++i)
            for (int j = 0; j < half; ++j)
                topo.connect(agg[pod][i], core[i][j], link);
        for (int t = 0; t < half; ++t)
            for (int i = 0; i < half; ++i)
                topo.connect(tor[pod][t], agg[pod][i], link);
    }
    std::vector<int> host_ids;
    for (int pod = 0; pod < k; ++pod) {
        for (int t = 0; t < half; ++t) {
            for (int s = 0; s < half; ++s) {
                int h = topo.add_host("h" + std::to_string(pod * half * half + t * half + s));
                topo.connect(h, tor[pod][t], link);
                host_ids.push_back(h);
            }
        }
    }

    auto pod_of = [&](int host_index) { return host_index / (half * half); };
    auto tor_of = [&](int host_index) { return (host_index / half) % half; };

    for (int hi = 0; hi < static_cast<int>(host_ids.size()); ++hi) {
        int host = host_ids[hi];
        int hpod = pod_of(hi);
        int htor = tor_of(hi);
        // ToR tables.
        for (int pod = 0; pod < k; ++pod) {
            for (int t = 0; t < half; ++t) {
                int sw = tor[pod][t];
                std::vector<int>& c = topo.candidates_[sw][host];
                if (pod == hpod && t == htor) {
                    c = {topo.find_port(sw, host)};
                } else {
                    for (int i = 0; i < half; ++i) c.push_back(topo.find_port(sw, agg[pod][i]));
                }
            }
        }
        // Aggregation tables.
        for (int pod = 0; pod < k; ++pod) {
            for (int i = 0; i < half; ++i) {
                int sw = agg[pod][i];
                std::vector<int>& c = topo.candidates_[sw][host];
                if (pod == hpod) {
                    c = {topo.find_port(sw, tor[pod][htor])};
                } else {
                    for (int j = 0; j < half; ++j) c.push_back(topo.find_port(sw, core[i][j]));
                }
            }
        }
        // Core tables: one downlink per pod.
        for (int i = 0; i < half; ++i)
            for (int j = 0; j < half; ++j)
                topo.candidates_[core[i][j]][host] = {topo.find_port(core[i][j], agg[hpod][i])};
    }
    return topo;
}

int Topology::find_port(int node, int peer) const {
    for (int p = 0; p < static_cast<int>(nodes_[node].peers.size()); ++p)
        if (nodes_[node].peers[p].node == peer) return p;
    throw ConfigError("no port from " + nodes_[node].name + " to " + nodes_[peer].name);
}

std::string Topology::dump_json() const {
    std::ostringstream os;
    os << "{\"nodes\":[";
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (i) os << ",";
        os << "{\"id\":" << i << ",\"name\":\"" << nodes_[i].name
           << "\",\"switch\":" << (nodes_[i].is_switch ? "true" : "false") << ",\"ports\":[";
        for (std::size_t p = 0; p < nodes_[i].peers.size(); ++p) {
            if (p) os << ",";
            os << nodes_[i].peers[p].node;
        }
        os << "]}";
    }
    os << "]}";
    return os.str();
}

} // namespace fnccsim
