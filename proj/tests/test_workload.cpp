#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "rng.hpp"
#include "topology.hpp"
#include "workload.hpp"

using namespace fnccsim;

TEST_CASE("degenerate single-point CDF is a point mass") {
    auto cdf = FlowSizeCdf::from_points({{1000, 1.0}});
    RandomStream rng(1, "cdf");
    for (int i = 0; i < 1000; ++i) CHECK(cdf.sample(rng) == 1000);
    CHECK(cdf.mean() == 1000.0);
}

TEST_CASE("draws at or below the first knot return the first size") {
    auto cdf = FlowSizeCdf::from_points({{100, 0.5}, {10000, 1.0}});
    CHECK(cdf.sample_from_uniform(0.25) == 100);
    CHECK(cdf.sample_from_uniform(0.5) == 100);
    CHECK(cdf.sample_from_uniform(1.0) == 10000);
}

TEST_CASE("interpolation is log-linear between knots") {
    auto cdf = FlowSizeCdf::from_points({{100, 0.5}, {10000, 1.0}});
    // Halfway through the segment: exp(mean of ln 100 and ln 10000) = 1000.
    CHECK(cdf.sample_from_uniform(0.75) == 1000);
}

TEST_CASE("malformed CDFs are rejected") {
    CHECK_THROWS_AS(FlowSizeCdf::from_points({}), ConfigError);
    CHECK_THROWS_AS(FlowSizeCdf::from_points({{100, 0.5}}), ConfigError);              // != 1.0
    CHECK_THROWS_AS(FlowSizeCdf::from_points({{100, 0.5}, {100, 1.0}}), ConfigError);  // not increasing
    CHECK_THROWS_AS(FlowSizeCdf::from_points({{100, 0.9}, {200, 0.5}}), ConfigError);  // decreasing p
    CHECK_THROWS_AS(FlowSizeCdf::from_points({{0, 1.0}}), ConfigError);                // < 1 byte
}

TEST_CASE("shipped CDF files parse and carry comments") {
    auto cdf = FlowSizeCdf::from_file(std::string(REPO_ROOT) + "/data/hadoop_like.txt");
    CHECK(cdf.points().size() >= 3);
    CHECK(cdf.points().back().second == 1.0);
    CHECK(cdf.mean() > 0);
}

TEST_CASE("empirical mean over 1e5 samples matches the analytic mean within 2%") {
    auto cdf = FlowSizeCdf::from_points(
        {{250, 0.1}, {1000, 0.4}, {10000, 0.7}, {100000, 0.85}, {1000000, 0.95}, {10000000, 1.0}});
    RandomStream rng(7, "cdf-mean");
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(cdf.sample(rng));
    double empirical = sum / n;
    CHECK(std::fabs(empirical - cdf.mean()) / cdf.mean() < 0.02);
}

TEST_CASE("samples land in each CDF segment with its probability mass") {
    auto cdf = FlowSizeCdf::from_points({{100, 0.2}, {1000, 0.5}, {50000, 0.9}, {1000000, 1.0}});
    RandomStream rng(9, "cdf-mass");
    const int n = 100000;
    std::vector<int> hits(4, 0);
    for (int i = 0; i < n; ++i) {
        std::int64_t s = cdf.sample(rng);
        if (s <= 100) ++hits[0];
        else if (s <= 1000) ++hits[1];
        else if (s <= 50000) ++hits[2];
        else ++hits[3];
    }
    double expected[] = {0.2, 0.3, 0.4, 0.1};
    for (int i = 0; i < 4; ++i) {
        double freq = static_cast<double>(hits[i]) / n;
        CHECK(std::fabs(freq - expected[i]) < 0.01);
    }
}

TEST_CASE("scripted flows keep their times and sort stably by start") {
    std::vector<FlowSpec> entries;
    entries.push_back({"h1", "r0", 100, 5000, -1, 0, 0});
    entries.push_back({"h0", "r0", 100, 0, -1, 0, 0});
    auto sched = script_flows(entries);
    REQUIRE(sched.size() == 2);
    CHECK(sched[0].src == "h0");
    CHECK(sched[0].start == 0);
    CHECK(sched[1].start == 5000);
}

TEST_CASE("invalid scripted flows are rejected") {
    CHECK_THROWS_AS(script_flows({{"h0", "h0", 100, 0, -1, 0, 0}}), ConfigError); // src == dst
    CHECK_THROWS_AS(script_flows({{"h0", "r0", 0, 0, -1, 0, 0}}), ConfigError);   // empty flow
    CHECK_THROWS_AS(script_flows({{"h0", "r0", 10, -5, -1, 0, 0}}), ConfigError); // negative start
    // Explicit duplicate five-tuples collide; auto-assigned ports (0) never do.
    std::vector<FlowSpec> dup = {{"h0", "r0", 10, 0, -1, 100, 200},
                                 {"h0", "r0", 10, 50, -1, 100, 200}};
    CHECK_THROWS_AS(script_flows(dup), ConfigError);
    std::vector<FlowSpec> autoports = {{"h0", "r0", 10, 0, -1, 0, 0},
                                       {"h0", "r0", 10, 50, -1, 0, 0}};
    CHECK(script_flows(autoports).size() == 2);
}

TEST_CASE("empty script is a valid idle schedule") {
    CHECK(script_flows({}).empty());
}

TEST_CASE("poisson arrival rate follows lambda = load*rate/(8*mean)") {
    // Point-mass CDF of 62,500 B at 100 Gbps, load 0.5: 100,000 flows/s/host.
    auto cdf = FlowSizeCdf::from_points({{62500, 1.0}});
    std::vector<std::string> hosts{"a", "b", "c", "d"};
    RandomStream rng(13, "poisson");
    SimTime duration = 10 * kMillisecond;
    auto sched = poisson_arrivals(cdf, 0.5, hosts, 100e9, duration, rng);
    // Expected 1000 arrivals per host over 10 ms; Poisson sd ~ 32 per host.
    std::map<std::string, int> per_src;
    for (const auto& f : sched) {
        CHECK(f.src != f.dst);
        CHECK(f.start >= 0);
        CHECK(f.start < duration);
        ++per_src[f.src];
    }
    CHECK(per_src.size() == 4);
    for (const auto& [src, n] : per_src) {
        CHECK(n > 850);
        CHECK(n < 1150);
    }
}

TEST_CASE("generated offered load is within 5% of the target") {
    // A light-tailed CDF keeps the sample variance small enough that a 5%
    // band is a real oracle rather than a coin flip.
    auto cdf = FlowSizeCdf::from_points({{1000, 0.5}, {10000, 1.0}});
    std::vector<std::string> hosts;
    for (int i = 0; i < 16; ++i) hosts.push_back("h" + std::to_string(i));
    RandomStream rng(17, "load");
    SimTime duration = 100 * kMillisecond;
    auto sched = poisson_arrivals(cdf, 0.5, hosts, 100e9, duration, rng);
    double bytes = 0;
    for (const auto& f : sched) bytes += static_cast<double>(f.size_bytes);
    double offered_bps = bytes * 8.0 / (static_cast<double>(duration) / 1e9) / hosts.size();
    CHECK(std::fabs(offered_bps - 0.5 * 100e9) / (0.5 * 100e9) < 0.05);
}

TEST_CASE("poisson destinations cover all other hosts roughly uniformly") {
    auto cdf = FlowSizeCdf::from_points({{1000, 1.0}});
    std::vector<std::string> hosts{"a", "b", "c", "d", "e"};
    RandomStream rng(19, "dst");
    auto sched = poisson_arrivals(cdf, 0.5, hosts, 100e9, 2 * kMillisecond, rng);
    std::map<std::string, int> per_dst;
    for (const auto& f : sched) ++per_dst[f.dst];
    REQUIRE(per_dst.size() == 5);
    double expect = static_cast<double>(sched.size()) / 5.0;
    for (const auto& [dst, n] : per_dst) {
        CHECK(n > 0.8 * expect);
        CHECK(n < 1.2 * expect);
    }
}

TEST_CASE("schedules are deterministic for a fixed seed") {
    auto cdf = FlowSizeCdf::from_points({{250, 0.5}, {10000, 1.0}});
    std::vector<std::string> hosts{"a", "b", "c"};
    RandomStream r1(23, "sched"), r2(23, "sched");
    auto s1 = poisson_arrivals(cdf, 0.3, hosts, 100e9, kMillisecond, r1);
    auto s2 = poisson_arrivals(cdf, 0.3, hosts, 100e9, kMillisecond, r2);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(s1[i].src == s2[i].src);
        CHECK(s1[i].dst == s2[i].dst);
        CHECK(s1[i].size_bytes == s2[i].size_bytes);
        CHECK(s1[i].start == s2[i].start);
    }
}

TEST_CASE("invalid load values are rejected") {
    auto cdf = FlowSizeCdf::from_points({{1000, 1.0}});
    std::vector<std::string> hosts{"a", "b"};
    RandomStream rng(1, "x");
    CHECK_THROWS_AS(poisson_arrivals(cdf, 0.0, hosts, 100e9, 1000, rng), ConfigError);
    CHECK_THROWS_AS(poisson_arrivals(cdf, 1.0, hosts, 100e9, 1000, rng), ConfigError);
}
