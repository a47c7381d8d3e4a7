#ifndef FNCCSIM_CC_HPP
#define FNCCSIM_CC_HPP

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "packet.hpp"
#include "sim_time.hpp"

namespace fnccsim {

struct ProtocolError : std::logic_error {
    using std::logic_error::logic_error;
};

enum class CcMode { Fncc, FnccNoLhcs, Hpcc };

// Alg. 3 line 29 indexes the first INT entry for the LHCS bandwidth while
// the prose says last-hop bandwidth; both are selectable, last-hop is the
// default. (With request-path-ordered entries the last hop is the final one.)
enum class LhcsBandwidthSource { LastHop, FirstEntry };

struct CcParams {
    double eta = 0.95;
    double alpha = 1.05;
    double beta = 0.9;
    double w_ai_bytes = 0;
    int max_stage = 5;
    int ack_batch = 1; // m: one cumulative ACK per m received packets
    CcMode mode = CcMode::Fncc;
    LhcsBandwidthSource lhcs_bw = LhcsBandwidthSource::LastHop;
    SimTime base_rtt_ns = 0; // T
    double w_min_bytes = kMtuBytes;
    double w_max_bytes = 1e18;
};

// Per-flow reaction-point window machine. INT entries are presented in
// request-path hop order (hop 0 = first switch out of the sender); the
// caller normalizes ACK-carried lists before handing them in.
class CcSender {
public:
    CcSender(CcParams params, double initial_window_bytes)
        : params_(params), w_(initial_window_bytes), wc_(initial_window_bytes) {}

    struct AckResult {
        bool window_updated = false; // false only while priming L
        bool wc_synced = false;      // per-RTT Wc <- W event
        bool lhcs_triggered = false;
        double window = 0;
        double u = 0;
    };

    // NewAck procedure. ack_seq is cumulative bytes acknowledged, snd_nxt the
    // sender's next sequence at the time of the call.
    AckResult on_new_ack(const std::vector<IntRecord>& hop_records,
                         std::int64_t ack_seq, std::uint16_t concurrency_n,
                         std::int64_t snd_nxt);

    // MeasureInFlight: per-hop utilization, EWMA of the max. Also populates
    // the per-hop values consumed by hop_detection.
    double measure_inflight(const std::vector<IntRecord>& hop_records);

    // Returns (U_max, hop index); first-wins on ties, resets accumulators.
    std::pair<double, int> hop_detection();

    // LHCS: jump Wc to B*T*beta/N when the last hop is congested. Returns
    // whether the jump fired. FNCC mode only.
    bool update_wc_lhcs(const std::vector<IntRecord>& hop_records, std::uint16_t concurrency_n);

    // ComputeWind: MI/MD vs AI staging on the reference window.
    double compute_wind(double u, bool update_wc,
                        const std::vector<IntRecord>& hop_records,
                        std::uint16_t concurrency_n);

    double window() const { return w_; }
    double reference_window() const { return wc_; }
    double ewma_u() const { return u_ewma_; }
    int inc_stage() const { return inc_stage_; }
    std::int64_t last_update_seq() const { return last_update_seq_; }
    bool primed() const { return primed_; }
    bool last_ack_lhcs() const { return last_lhcs_; }
    // Inputs and result of the most recent LHCS jump, for tracing.
    double last_lhcs_wc() const { return last_lhcs_wc_; }
    double last_lhcs_bw_bps() const { return last_lhcs_bw_bps_; }
    std::uint16_t last_lhcs_n() const { return last_lhcs_n_; }

    // Test hooks.
    void set_hop_utilizations(std::vector<double> u) { hop_u_ = std::move(u); }
    void prime(const std::vector<IntRecord>& records) {
        last_records_ = records;
        last_tx_rate_.assign(records.size(), 0.0);
        primed_ = true;
    }
    void set_reference_window(double wc) { wc_ = wc; }
    void set_ewma_u(double u) { u_ewma_ = u; }
    void set_inc_stage(int s) { inc_stage_ = s; }

private:
    CcParams params_;
    double w_ = 0;
    double wc_ = 0;
    double u_ewma_ = 1.0;
    int inc_stage_ = 0;
    std::int64_t last_update_seq_ = 0;
    bool primed_ = false;
    bool last_lhcs_ = false;
    double last_lhcs_wc_ = 0;
    double last_lhcs_bw_bps_ = 0;
    std::uint16_t last_lhcs_n_ = 0;

    std::vector<IntRecord> last_records_; // L
    std::vector<double> last_tx_rate_;    // duplicate-timestamp guard
    std::vector<double> hop_u_;           // raw per-hop u' for localization
};

} // namespace fnccsim

#endif
