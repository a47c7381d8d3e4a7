#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "engine.hpp"
#include "rng.hpp"

using namespace fnccsim;

TEST_CASE("event at t=0 scheduled from t=0 fires before later events") {
    Engine eng;
    std::vector<int> order;
    eng.schedule_at(10, [&] { order.push_back(2); });
    eng.schedule_at(0, [&] { order.push_back(1); });
    auto s = eng.run_until(100);
    CHECK(order == std::vector<int>{1, 2});
    CHECK(s.events_processed == 2);
    CHECK(s.final_time == 10);
}

TEST_CASE("simultaneous events fire in insertion order") {
    Engine eng;
    std::vector<int> order;
    for (int i = 0; i < 50; ++i) eng.schedule_at(500, [&order, i] { order.push_back(i); });
    eng.run_until(1000);
    for (int i = 0; i < 50; ++i) CHECK(order[i] == i);
}

TEST_CASE("cancelled events are never delivered") {
    Engine eng;
    bool fired = false;
    auto h = eng.schedule_at(100, [&] { fired = true; });
    eng.cancel(h);
    auto s = eng.run_until(kMillisecond);
    CHECK_FALSE(fired);
    CHECK(s.events_processed == 0);
}

TEST_CASE("empty queue terminates early with final_time 0") {
    Engine eng;
    auto s = eng.run_until(kMillisecond);
    CHECK(s.final_time == 0);
    CHECK(s.events_processed == 0);
}

TEST_CASE("single event at 500 ns with end at 1 ms") {
    Engine eng;
    eng.schedule_at(500, [] {});
    auto s = eng.run_until(kMillisecond);
    CHECK(s.events_processed == 1);
    CHECK(s.final_time == 500);
}

TEST_CASE("events past the horizon stay pending") {
    Engine eng;
    int fired = 0;
    eng.schedule_at(100, [&] { ++fired; });
    eng.schedule_at(2000, [&] { ++fired; });
    auto s = eng.run_until(1000);
    CHECK(fired == 1);
    CHECK(s.final_time == 100);
    s = eng.run_until(3000);
    CHECK(fired == 2);
    CHECK(s.final_time == 2000);
}

TEST_CASE("delivery is a total order over (fire_at, insertion)") {
    Engine eng;
    RandomStream rng(7, "order");
    struct Stamp {
        SimTime t;
        std::uint64_t n;
    };
    std::vector<Stamp> seen;
    std::uint64_t counter = 0;
    for (int i = 0; i < 2000; ++i) {
        SimTime t = static_cast<SimTime>(rng.uniform_int(100)); // heavy tie pressure
        std::uint64_t n = counter++;
        eng.schedule_at(t, [&seen, t, n] { seen.push_back({t, n}); });
    }
    eng.run_until(1000);
    REQUIRE(seen.size() == 2000);
    for (std::size_t i = 1; i < seen.size(); ++i) {
        bool increasing = seen[i].t > seen[i - 1].t ||
                          (seen[i].t == seen[i - 1].t && seen[i].n > seen[i - 1].n);
        CHECK(increasing);
    }
}

TEST_CASE("handlers scheduling at the current time run in the same pass") {
    Engine eng;
    std::vector<int> order;
    eng.schedule_at(5, [&] {
        order.push_back(1);
        eng.schedule_at(5, [&] { order.push_back(2); });
    });
    eng.run_until(5);
    CHECK(order == std::vector<int>{1, 2});
}

TEST_CASE("same seed and label reproduce the exact stream") {
    RandomStream a(42, "workload");
    RandomStream b(42, "workload");
    for (int i = 0; i < 10000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different labels give different streams") {
    Engine eng(42);
    RandomStream a = eng.rng("workload");
    RandomStream b = eng.rng("ports");
    int diff = 0;
    for (int i = 0; i < 10000; ++i) diff += (a.next_u64() != b.next_u64());
    CHECK(diff > 9900); // independent streams collide almost never
}

TEST_CASE("different seeds give different streams") {
    RandomStream a(1, "x");
    RandomStream b(2, "x");
    int diff = 0;
    for (int i = 0; i < 10000; ++i) diff += (a.next_u64() != b.next_u64());
    CHECK(diff > 9900);
}

TEST_CASE("uniform draws have mean 0.5 within 0.01 over 1e5 draws") {
    RandomStream rng(9, "uniform");
    double sum = 0;
    for (int i = 0; i < 100000; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(std::fabs(sum / 100000.0 - 0.5) < 0.01);
}

TEST_CASE("uniform_int stays in range and covers it") {
    RandomStream rng(3, "ints");
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 70000; ++i) {
        auto v = rng.uniform_int(7);
        REQUIRE(v < 7);
        ++hits[static_cast<std::size_t>(v)];
    }
    for (int h : hits) CHECK(h > 8000); // ~10000 expected per bin
}

TEST_CASE("exponential draws have the configured mean") {
    RandomStream rng(5, "exp");
    double rate = 2.5e-3;
    double sum = 0;
    int n = 100000;
    for (int i = 0; i < n; ++i) sum += rng.exponential(rate);
    double mean = sum / n;
    CHECK(mean == doctest::Approx(1.0 / rate).epsilon(0.02));
}
