#include "engine.hpp"

#include <cstdio>
#include <cstdlib>

namespace fnccsim {

Engine::Handle Engine::schedule_at(SimTime fire_at, Callback cb) {
    if (fire_at < now_) {
        std::fprintf(stderr,
                     "fatal: event scheduled in the past (fire_at=%lld ns, now=%lld ns)\n",
                     static_cast<long long>(fire_at), static_cast<long long>(now_));
        std::abort();
    }
    std::uint64_t id = next_seq_++;
    queue_.push(Event{fire_at, id, std::move(cb)});
    return Handle{id};
}

Engine::RunSummary Engine::run_until(SimTime end) {
    RunSummary summary;
    while (!queue_.empty() && queue_.top().fire_at <= end) {
        Event ev = std::move(const_cast<Event&>(queue_.top()));
        queue_.pop();
        if (!cancelled_.empty()) {
            auto it = cancelled_.find(ev.seq);
            if (it != cancelled_.end()) {
                cancelled_.erase(it);
                continue;
            }
        }
        now_ = ev.fire_at;
        ev.cb();
        ++summary.events_processed;
    }
    summary.final_time = now_;
    return summary;
}

} // namespace fnccsim
