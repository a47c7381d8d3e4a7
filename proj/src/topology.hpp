#ifndef FNCCSIM_TOPOLOGY_HPP
#define FNCCSIM_TOPOLOGY_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sim_time.hpp"

namespace fnccsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LinkSpec {
    double rate_bps = 0;
    SimTime propagation_delay_ns = 0;
};

// Transport endpoints of a flow. ACKs carry the reversed tuple of their data
// flow; the canonical key (and hence the ECMP hash) is direction-invariant.
struct FiveTuple {
    int src_node = -1;
    int dst_node = -1;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    bool is_ack = false;

    FiveTuple reversed() const {
        return FiveTuple{dst_node, src_node, dst_port, src_port, !is_ack};
    }
};

// Direction-invariant 64-bit hash: endpoint (addr, port) pairs are sorted
// before mixing, so a tuple and its reverse always collide.
std::uint64_t canonical_hash(const FiveTuple& t);

class Topology {
public:
    struct PortPeer {
        int node = -1;
        int port = -1;
    };
    struct Node {
        bool is_switch = false;
        std::string name;
        int level = 0; // ECMP branching level (0 = ToR / edge, 1 = agg)
        std::vector<PortPeer> peers;
        std::vector<LinkSpec> links; // egress direction of each port
    };

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<int>& hosts() const { return hosts_; }
    int node_by_name(const std::string& name) const;
    int port_count(int node) const { return static_cast<int>(nodes_[node].peers.size()); }

    // ECMP output port at `switch_id` for the tuple. Among equal-cost
    // candidates the choice is the canonical hash (shifted by branching
    // level) modulo the ordered candidate list; with mirrored tables this
    // makes the reverse flow retrace the forward path.
    int route(int switch_id, const FiveTuple& t) const;

    // Node sequence src host .. dst host under the installed routes.
    std::vector<int> path(const FiveTuple& t) const;

    std::string dump_json() const;

    static Topology build_dumbbell(int num_switches, int num_senders, LinkSpec link);
    // Chain of switches with an arbitrary number of hosts per switch;
    // backs the congestion-location scenarios.
    static Topology build_chain(const std::vector<int>& hosts_per_switch, LinkSpec link);
    // Arbitrary switch tree: hosts_per_switch[i] hosts on switch i, plus an
    // explicit switch-to-switch edge list. Covers the Y-shaped
    // congestion-location scenarios that a linear chain cannot express.
    static Topology build_tree(const std::vector<int>& hosts_per_switch,
                               const std::vector<std::pair<int, int>>& switch_links,
                               LinkSpec link);
    static Topology build_fattree(int k, LinkSpec link);

private:
    int add_host(const std::string& name);
    int add_switch(const std::string& name, int level = 0);
    void connect(int a, int b, LinkSpec link);
    void rebuild_tables_for_tree();
    bool tree_subtree_contains(int from, int sw, int host) const;
    int find_port(int node, int peer) const;

    std::vector<Node> nodes_;
    std::vector<int> hosts_;
    std::map<std::string, int> by_name_;
    // Per switch: destination host -> ordered equal-cost output ports.
    std::vector<std::map<int, std::vector<int>>> candidates_;
};

} // namespace fnccsim

#endif
