#include <doctest.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "fnccsim.h"

namespace {

const char* kTinyConfig = R"({
  "name": "capi",
  "seed": 1,
  "end_time_us": 200,
  "topology": {"kind": "dumbbell", "switches": 3, "senders": 2,
               "link": {"rate_gbps": 100, "propagation_delay_ns": 1500}},
  "workload": {"kind": "script", "flows": [
    {"src": "h0", "dst": "r0", "size_bytes": 100000, "start_ns": 0},
    {"src": "h1", "dst": "r0", "size_bytes": 100000, "start_ns": 0}
  ]},
  "metrics": {"queue_sample_ns": 1000}
})";

struct Handle {
    fnccsim_sim* sim;
    explicit Handle(fnccsim_sim* s) : sim(s) {}
    ~Handle() { fnccsim_destroy(sim); }
    operator fnccsim_sim*() const { return sim; }
};

} // namespace

TEST_CASE("version string is present and stable across calls") {
    const char* v = fnccsim_version();
    REQUIRE(v != nullptr);
    CHECK(std::string(v) == fnccsim_version());
    CHECK_FALSE(std::string(v).empty());
}

TEST_CASE("create, run, and read totals from a string config") {
    Handle h(fnccsim_create_from_string(kTinyConfig));
    REQUIRE(h.sim != nullptr);
    REQUIRE(fnccsim_ready(h) == FNCC_OK);
    REQUIRE(fnccsim_run(h) == FNCC_OK);
    std::uint64_t flows = 0, events = 0;
    CHECK(fnccsim_flows_completed(h, &flows) == FNCC_OK);
    CHECK(fnccsim_events_processed(h, &events) == FNCC_OK);
    CHECK(flows == 2);
    CHECK(events > 100);
}

TEST_CASE("create from a preset file works") {
    std::string path = std::string(REPO_ROOT) + "/presets/micro_dumbbell_100g.json";
    Handle h(fnccsim_create_from_file(path.c_str()));
    REQUIRE(h.sim != nullptr);
    CHECK(fnccsim_ready(h) == FNCC_OK);
}

TEST_CASE("a bad config reports FNCC_ERR_CONFIG with a message") {
    Handle h(fnccsim_create_from_string("{\"nonsense\": true}"));
    REQUIRE(h.sim != nullptr);
    CHECK(fnccsim_ready(h) == FNCC_ERR_CONFIG);
    const char* err = fnccsim_last_error(h);
    REQUIRE(err != nullptr);
    CHECK_FALSE(std::string(err).empty());
    // Running an unready handle is a state error, not a crash.
    CHECK(fnccsim_run(h) != FNCC_OK);
}

TEST_CASE("a missing file reports an error without crashing") {
    Handle h(fnccsim_create_from_file("/nonexistent/preset.json"));
    REQUIRE(h.sim != nullptr);
    CHECK(fnccsim_ready(h) != FNCC_OK);
    CHECK(std::string(fnccsim_last_error(h)).find("nonexistent") != std::string::npos);
}

TEST_CASE("overrides apply before the run and bad keys fail cleanly") {
    Handle h(fnccsim_create_from_string(kTinyConfig));
    REQUIRE(fnccsim_set(h, "cc.mode", "hpcc") == FNCC_OK);
    REQUIRE(fnccsim_set(h, "seed", "42") == FNCC_OK);
    CHECK(fnccsim_set(h, "cc.modee", "hpcc") == FNCC_ERR_CONFIG);
    CHECK(std::string(fnccsim_last_error(h)).find("modee") != std::string::npos);
    REQUIRE(fnccsim_ready(h) == FNCC_OK); // still runnable after the failed set
    const char* cfg = fnccsim_resolved_config_json(h);
    REQUIRE(cfg != nullptr);
    CHECK(std::string(cfg).find("\"hpcc\"") != std::string::npos);
    CHECK(fnccsim_run(h) == FNCC_OK);
    // Post-run mutation is out of sequence.
    CHECK(fnccsim_set(h, "seed", "3") == FNCC_ERR_STATE);
}

TEST_CASE("summary JSON carries the run's headline numbers") {
    Handle h(fnccsim_create_from_string(kTinyConfig));
    REQUIRE(fnccsim_run(h) == FNCC_OK);
    const char* s = fnccsim_summary_json(h);
    REQUIRE(s != nullptr);
    std::string j(s);
    CHECK(j.find("\"flows_completed\": 2") != std::string::npos);
    CHECK(j.find("slowdown_buckets") != std::string::npos);
    CHECK(j.find("pause_frames_total") != std::string::npos);
    CHECK(j.find("peak_queue_bytes") != std::string::npos);
}

TEST_CASE("summary before run is a state error") {
    Handle h(fnccsim_create_from_string(kTinyConfig));
    CHECK(fnccsim_summary_json(h) == nullptr);
    std::uint64_t n = 0;
    CHECK(fnccsim_flows_completed(h, &n) == FNCC_ERR_STATE);
}

TEST_CASE("write_outputs produces the four artifacts") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "fnccsim_capi_out";
    fs::remove_all(dir);
    Handle h(fnccsim_create_from_string(kTinyConfig));
    REQUIRE(fnccsim_run(h) == FNCC_OK);
    REQUIRE(fnccsim_write_outputs(h, dir.string().c_str()) == FNCC_OK);
    for (const char* f : {"series.csv", "flows.csv", "summary.json", "config.json"}) {
        CHECK(fs::exists(dir / f));
        CHECK(fs::file_size(dir / f) > 0);
    }
    // flows.csv holds a header plus one line per completed flow.
    std::ifstream flows(dir / "flows.csv");
    int lines = 0;
    for (std::string line; std::getline(flows, line);) ++lines;
    CHECK(lines == 3);
    fs::remove_all(dir);
}

TEST_CASE("null arguments are rejected, never dereferenced") {
    CHECK(fnccsim_ready(nullptr) == FNCC_ERR_ARG);
    CHECK(fnccsim_run(nullptr) == FNCC_ERR_ARG);
    CHECK(fnccsim_set(nullptr, "a", "b") == FNCC_ERR_ARG);
    CHECK(fnccsim_summary_json(nullptr) == nullptr);
    CHECK(fnccsim_last_error(nullptr) != nullptr); // static fallback message
    std::uint64_t n = 0;
    CHECK(fnccsim_flows_completed(nullptr, &n) == FNCC_ERR_ARG);
    Handle h(fnccsim_create_from_string(kTinyConfig));
    CHECK(fnccsim_set(h, nullptr, "b") == FNCC_ERR_ARG);
    CHECK(fnccsim_flows_completed(h, nullptr) == FNCC_ERR_ARG);
    fnccsim_destroy(nullptr); // must be a no-op
    Handle from_null(fnccsim_create_from_string(nullptr));
    if (from_null.sim != nullptr) CHECK(fnccsim_ready(from_null) != FNCC_OK);
}

TEST_CASE("two runs of the same config agree exactly") {
    std::uint64_t ev[2];
    for (int i = 0; i < 2; ++i) {
        Handle h(fnccsim_create_from_string(kTinyConfig));
        REQUIRE(fnccsim_run(h) == FNCC_OK);
        REQUIRE(fnccsim_events_processed(h, &ev[i]) == FNCC_OK);
    }
    CHECK(ev[0] == ev[1]);
}
