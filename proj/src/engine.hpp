#ifndef FNCCSIM_ENGINE_HPP
#define FNCCSIM_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_set>
#include <vector>

#include "rng.hpp"
#include "sim_time.hpp"

namespace fnccsim {

// Single-threaded discrete-event loop. Events at equal times fire in
// insertion order (seq counter tie-break), so runs are fully reproducible.
class Engine {
public:
    using Callback = std::function<void()>;

    struct Handle {
        std::uint64_t id = 0;
    };

    struct RunSummary {
        SimTime final_time = 0;
        std::uint64_t events_processed = 0;
    };

    explicit Engine(std::uint64_t master_seed = 0) : seed_(master_seed) {}

    SimTime now() const { return now_; }

    // Scheduling in the past is a programming error and aborts the run.
    Handle schedule_at(SimTime fire_at, Callback cb);
    Handle schedule_in(SimTime delay, Callback cb) {
        return schedule_at(now_ + delay, std::move(cb));
    }

    void cancel(Handle h) { cancelled_.insert(h.id); }

    // Processes all events with fire_at <= end. An empty queue terminates
    // early; final_time then reports the last delivered event's time.
    RunSummary run_until(SimTime end);

    RandomStream rng(std::string_view label) const {
        return RandomStream(seed_, label);
    }
    std::uint64_t seed() const { return seed_; }

private:
    struct Event {
        SimTime fire_at;
        std::uint64_t seq;
        Callback cb;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
            return a.seq > b.seq;
        }
    };

    SimTime now_ = 0;
    std::uint64_t next_seq_ = 1;
    std::uint64_t seed_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::unordered_set<std::uint64_t> cancelled_;
};

} // namespace fnccsim

#endif
