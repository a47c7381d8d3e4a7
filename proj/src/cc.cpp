#include "cc.hpp"

#include <algorithm>

namespace fnccsim {

namespace {
// Bandwidths travel as bits/s; all window math runs in bytes and ns.
double bytes_per_ns(double bps) { return bps / 8e9; }
} // namespace

double CcSender::measure_inflight(const std::vector<IntRecord>& hop_records) {
    if (hop_records.size() != last_records_.size()) {
        throw ProtocolError("INT hop count changed mid-flow");
    }
    std::size_t n = hop_records.size();
    hop_u_.assign(n, 0.0);
    double u_best = 0.0;
    SimTime tau = params_.base_rtt_ns;
    for (std::size_t i = 0; i < n; ++i) {
        const IntRecord& cur = hop_records[i];
        const IntRecord& prev = last_records_[i];
        SimTime dts = cur.ts - prev.ts;
        double tx_rate; // bytes per ns
        if (dts == 0) {
            tx_rate = last_tx_rate_[i]; // duplicate-timestamp guard
        } else {
            tx_rate = static_cast<double>(cur.tx_bytes - prev.tx_bytes) / static_cast<double>(dts);
            last_tx_rate_[i] = tx_rate;
        }
        double b = bytes_per_ns(cur.bandwidth_bps);
        double qlen = static_cast<double>(std::min(cur.qlen, prev.qlen));
        double u = qlen / (b * static_cast<double>(params_.base_rtt_ns)) + tx_rate / b;
        hop_u_[i] = u;
        if (u > u_best) {
            u_best = u;
            tau = dts;
        }
    }
    tau = std::min(tau, params_.base_rtt_ns);
    double f = static_cast<double>(tau) / static_cast<double>(params_.base_rtt_ns);
    u_ewma_ = (1.0 - f) * u_ewma_ + f * u_best;
    return u_ewma_;
}

std::pair<double, int> CcSender::hop_detection() {
    double u_max = 0.0;
    int hop = 0;
    for (std::size_t j = 0; j < hop_u_.size(); ++j) {
        if (hop_u_[j] > u_max) {
            u_max = hop_u_[j];
            hop = static_cast<int>(j);
        }
    }
    hop_u_.clear();
    return {u_max, hop};
}

bool CcSender::update_wc_lhcs(const std::vector<IntRecord>& hop_records,
                              std::uint16_t concurrency_n) {
    if (params_.mode != CcMode::Fncc) return false;
    int last_hop = static_cast<int>(hop_records.size()) - 1;
    auto [u_max, hop] = hop_detection();
    if (hop != last_hop || u_max <= params_.alpha) return false;
    if (concurrency_n == 0) throw ProtocolError("ACK carries N == 0");
    const IntRecord& src = (params_.lhcs_bw == LhcsBandwidthSource::LastHop)
                               ? hop_records.back()
                               : hop_records.front();
    wc_ = bytes_per_ns(src.bandwidth_bps) * static_cast<double>(params_.base_rtt_ns) *
          params_.beta / static_cast<double>(concurrency_n);
    last_lhcs_wc_ = wc_;
    last_lhcs_bw_bps_ = src.bandwidth_bps;
    last_lhcs_n_ = concurrency_n;
    return true;
}

double CcSender::compute_wind(double u, bool update_wc,
                              const std::vector<IntRecord>& hop_records,
                              std::uint16_t concurrency_n) {
    last_lhcs_ = update_wc_lhcs(hop_records, concurrency_n);
    if (u >= params_.eta || inc_stage_ >= params_.max_stage) {
        if (u <= 0) throw ProtocolError("non-positive utilization in MI branch");
        w_ = wc_ / (u / params_.eta) + params_.w_ai_bytes;
        if (update_wc) {
            inc_stage_ = 0;
            wc_ = w_;
        }
    } else {
        w_ = wc_ + params_.w_ai_bytes;
        if (update_wc) {
            ++inc_stage_;
            wc_ = w_;
        }
    }
    w_ = std::clamp(w_, params_.w_min_bytes, params_.w_max_bytes);
    if (update_wc) wc_ = std::clamp(wc_, params_.w_min_bytes, params_.w_max_bytes);
    return w_;
}

CcSender::AckResult CcSender::on_new_ack(const std::vector<IntRecord>& hop_records,
                                         std::int64_t ack_seq, std::uint16_t concurrency_n,
                                         std::int64_t snd_nxt) {
    AckResult res;
    if (!primed_) {
        // First ACK only establishes L: no valid txRate deltas exist yet.
        prime(hop_records);
        res.window = w_;
        res.u = u_ewma_;
        return res;
    }
    double u = measure_inflight(hop_records);
    bool update_wc = ack_seq > last_update_seq_;
    res.window = compute_wind(u, update_wc, hop_records, concurrency_n);
    if (update_wc) last_update_seq_ = snd_nxt;
    last_records_ = hop_records;
    res.window_updated = true;
    res.wc_synced = update_wc;
    res.lhcs_triggered = last_lhcs_;
    res.u = u;
    return res;
}

} // namespace fnccsim
