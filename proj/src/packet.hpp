#ifndef FNCCSIM_PACKET_HPP
#define FNCCSIM_PACKET_HPP

#include <cstdint>
#include <vector>

#include "sim_time.hpp"
#include "topology.hpp"

namespace fnccsim {

// One hop's telemetry sample. Values are full precision; the wire format's
// 64-bit bit packing is accounted for in header sizes only.
struct IntRecord {
    double bandwidth_bps = 0; // sampled output port's line rate
    SimTime ts = 0;           // sample timestamp
    std::int64_t tx_bytes = 0; // cumulative bytes transmitted by the port
    std::int64_t qlen = 0;     // bytes queued at the port
};

enum class PacketKind : std::uint8_t { Data, Ack, Pause, Resume };

constexpr std::int64_t kMtuBytes = 1518;
constexpr std::int64_t kAckBaseBytes = 64;
constexpr std::int64_t kAckConcurrencyFieldBytes = 2; // 16-bit N
constexpr std::int64_t kIntEntryBytes = 8;            // 64-bit table entry
constexpr std::int64_t kPauseFrameBytes = 64;

struct Packet {
    PacketKind kind = PacketKind::Data;
    std::uint32_t flow_id = 0;
    FiveTuple tuple;
    std::int64_t size_bytes = 0;

    // Data fields.
    std::int64_t seq_end = 0; // cumulative bytes including this packet
    bool last_of_flow = false;

    // ACK fields.
    std::int64_t ack_seq = 0;
    std::uint16_t concurrency_n = 0;

    // INT entries: appended by switches at ACK egress (FNCC) or data egress
    // (HPCC; echoed into the ACK by the receiver).
    std::vector<IntRecord> int_list;

    // Switch-local metadata, set at ingress for ACKs (Congestion Point rule:
    // the ACK's input port is the data path's output port).
    int input_port_meta = -1;
};

} // namespace fnccsim

#endif
