#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fnccsim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
    throw ConfigError(origin + ": " + msg);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& origin, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            fail(origin, "unknown key '" + it.key() + "' in " + where);
        }
    }
}

double get_num(const json& obj, const char* key, double dflt) {
    auto it = obj.find(key);
    return it == obj.end() ? dflt : it->get<double>();
}

} // namespace

const char* cc_mode_name(CcMode m) {
    switch (m) {
        case CcMode::Fncc: return "fncc";
        case CcMode::FnccNoLhcs: return "fncc_no_lhcs";
        case CcMode::Hpcc: return "hpcc";
    }
    return "?";
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("JSON parse error: ") + e.what());
    }
    ScenarioConfig c;
    check_keys(j, {"name", "seed", "end_time_ns", "end_time_us", "topology", "cc", "pfc",
                   "int_refresh_ns", "workload", "metrics"},
               origin, "top level");
    if (j.contains("name")) c.name = j["name"].get<std::string>();
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) fail(origin, "seed must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("end_time_ns")) c.end_time = j["end_time_ns"].get<SimTime>();
    else if (j.contains("end_time_us")) c.end_time = j["end_time_us"].get<SimTime>() * 1000;
    else fail(origin, "end_time_ns (or end_time_us) is required");
    if (c.end_time <= 0) fail(origin, "end_time must be positive");

    if (!j.contains("topology")) fail(origin, "topology section is required");
    const json& jt = j["topology"];
    check_keys(jt, {"kind", "switches", "senders", "hosts_per_switch", "switch_links", "k",
                    "link"},
               origin, "topology");
    std::string kind = jt.value("kind", "dumbbell");
    if (kind == "dumbbell") c.topo_kind = ScenarioConfig::TopoKind::Dumbbell;
    else if (kind == "chain") c.topo_kind = ScenarioConfig::TopoKind::Chain;
    else if (kind == "tree") c.topo_kind = ScenarioConfig::TopoKind::Tree;
    else if (kind == "fattree") c.topo_kind = ScenarioConfig::TopoKind::FatTree;
    else fail(origin, "topology.kind must be dumbbell, chain, tree, or fattree");
    c.switches = jt.value("switches", 3);
    c.senders = jt.value("senders", 2);
    c.fattree_k = jt.value("k", 4);
    if (jt.contains("hosts_per_switch")) c.hosts_per_switch = jt["hosts_per_switch"].get<std::vector<int>>();
    if (jt.contains("switch_links")) {
        for (const json& je : jt["switch_links"]) {
            if (!je.is_array() || je.size() != 2) {
                fail(origin, "topology.switch_links entries must be [a, b] pairs");
            }
            c.switch_links.emplace_back(je[0].get<int>(), je[1].get<int>());
        }
    }
    if (jt.contains("link")) {
        const json& jl = jt["link"];
        check_keys(jl, {"rate_gbps", "rate_bps", "propagation_delay_ns"}, origin, "topology.link");
        if (jl.contains("rate_bps")) c.link.rate_bps = jl["rate_bps"].get<double>();
        else c.link.rate_bps = get_num(jl, "rate_gbps", 100) * 1e9;
        c.link.propagation_delay_ns = jl.value("propagation_delay_ns", SimTime{1500});
    }
    if (c.link.rate_bps <= 0) fail(origin, "link rate must be positive");
    if (c.link.propagation_delay_ns < 0) fail(origin, "propagation delay must be >= 0");

    if (j.contains("cc")) {
        const json& jc = j["cc"];
        check_keys(jc, {"mode", "eta", "alpha", "beta", "w_ai_bytes", "max_stage", "ack_batch",
                        "lhcs_bandwidth_source"},
                   origin, "cc");
        std::string mode = jc.value("mode", "fncc");
        if (mode == "fncc") c.cc_mode = CcMode::Fncc;
        else if (mode == "fncc_no_lhcs") c.cc_mode = CcMode::FnccNoLhcs;
        else if (mode == "hpcc") c.cc_mode = CcMode::Hpcc;
        else fail(origin, "cc.mode must be fncc, fncc_no_lhcs, or hpcc");
        c.eta = get_num(jc, "eta", c.eta);
        c.alpha = get_num(jc, "alpha", c.alpha);
        c.beta = get_num(jc, "beta", c.beta);
        c.w_ai_bytes = get_num(jc, "w_ai_bytes", c.w_ai_bytes);
        c.max_stage = jc.value("max_stage", c.max_stage);
        c.ack_batch = jc.value("ack_batch", c.ack_batch);
        std::string src = jc.value("lhcs_bandwidth_source", "last_hop");
        if (src == "last_hop") c.lhcs_bw = LhcsBandwidthSource::LastHop;
        else if (src == "first_entry") c.lhcs_bw = LhcsBandwidthSource::FirstEntry;
        else fail(origin, "cc.lhcs_bandwidth_source must be last_hop or first_entry");
    }
    if (!(c.eta > 0 && c.eta < 1)) fail(origin, "cc.eta must satisfy 0 < eta < 1");
    if (!(c.alpha > 1)) fail(origin, "cc.alpha must be > 1");
    if (!(c.beta > 0 && c.beta < 1)) fail(origin, "cc.beta must satisfy 0 < beta < 1");
    if (c.w_ai_bytes < 0) fail(origin, "cc.w_ai_bytes must be >= 0");
    if (c.max_stage < 1) fail(origin, "cc.max_stage must be >= 1");
    if (c.ack_batch < 1) fail(origin, "cc.ack_batch must be >= 1");

    if (j.contains("pfc")) {
        const json& jp = j["pfc"];
        check_keys(jp, {"enabled", "pause_threshold_bytes", "resume_fraction"}, origin, "pfc");
        c.pfc_enabled = jp.value("enabled", true);
        c.pfc_pause_threshold = jp.value("pause_threshold_bytes", c.pfc_pause_threshold);
        c.pfc_resume_fraction = get_num(jp, "resume_fraction", c.pfc_resume_fraction);
    }
    if (c.pfc_pause_threshold <= 0) fail(origin, "pfc.pause_threshold_bytes must be positive");
    if (!(c.pfc_resume_fraction > 0 && c.pfc_resume_fraction <= 1))
        fail(origin, "pfc.resume_fraction must be in (0, 1]");

    c.int_refresh_ns = j.value("int_refresh_ns", c.int_refresh_ns);
    if (c.int_refresh_ns < 0) fail(origin, "int_refresh_ns must be >= 0");

    if (j.contains("workload")) {
        const json& jw = j["workload"];
        check_keys(jw, {"kind", "flows", "cdf", "load", "duration_ns"}, origin, "workload");
        std::string wk = jw.value("kind", "script");
        if (wk == "script") c.workload_kind = ScenarioConfig::WorkloadKind::Script;
        else if (wk == "poisson") c.workload_kind = ScenarioConfig::WorkloadKind::Poisson;
        else fail(origin, "workload.kind must be script or poisson");
        if (jw.contains("flows")) {
            for (const json& jf : jw["flows"]) {
                check_keys(jf, {"src", "dst", "size_bytes", "start_ns", "stop_ns", "src_port",
                                "dst_port"},
                           origin, "workload.flows[]");
                FlowSpec fs;
                fs.src = jf.at("src").get<std::string>();
                fs.dst = jf.at("dst").get<std::string>();
                fs.size_bytes = jf.at("size_bytes").get<std::int64_t>();
                fs.start = jf.value("start_ns", SimTime{0});
                fs.stop_at = jf.value("stop_ns", SimTime{-1});
                fs.src_port = jf.value("src_port", 0);
                fs.dst_port = jf.value("dst_port", 0);
                c.script.push_back(std::move(fs));
            }
        }
        c.cdf_path = jw.value("cdf", "");
        c.load = get_num(jw, "load", c.load);
        c.workload_duration = jw.value("duration_ns", SimTime{0});
        if (c.workload_kind == ScenarioConfig::WorkloadKind::Poisson) {
            if (c.cdf_path.empty()) fail(origin, "poisson workload requires a cdf path");
            if (!std::filesystem::exists(c.cdf_path)) {
                // Relative CDF paths also resolve against the config's directory.
                std::filesystem::path rel =
                    std::filesystem::path(origin).parent_path() / c.cdf_path;
                if (std::filesystem::exists(rel)) c.cdf_path = rel.string();
                else fail(origin, "CDF file does not exist: " + c.cdf_path);
            }
            if (!(c.load > 0 && c.load < 1)) fail(origin, "workload.load must be in (0, 1)");
        } else {
            c.script = script_flows(std::move(c.script));
        }
    }

    if (j.contains("metrics")) {
        const json& jm = j["metrics"];
        check_keys(jm, {"queue_sample_ns", "rate_sample_ns", "util_window_ns", "window_trace",
                        "size_buckets_bytes"},
                   origin, "metrics");
        c.queue_sample_ns = jm.value("queue_sample_ns", c.queue_sample_ns);
        c.rate_sample_ns = jm.value("rate_sample_ns", c.rate_sample_ns);
        c.util_window_ns = jm.value("util_window_ns", c.util_window_ns);
        c.window_trace = jm.value("window_trace", c.window_trace);
        if (jm.contains("size_buckets_bytes"))
            c.size_buckets = jm["size_buckets_bytes"].get<std::vector<std::int64_t>>();
    }
    return c;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

Topology ScenarioConfig::build_topology() const {
    switch (topo_kind) {
        case TopoKind::Dumbbell: return Topology::build_dumbbell(switches, senders, link);
        case TopoKind::Chain: return Topology::build_chain(hosts_per_switch, link);
        case TopoKind::Tree: return Topology::build_tree(hosts_per_switch, switch_links, link);
        case TopoKind::FatTree: return Topology::build_fattree(fattree_k, link);
    }
    throw ConfigError("bad topology kind");
}

std::string ScenarioConfig::dump_json() const {
    ordered_json j;
    j["name"] = name;
    j["seed"] = seed;
    j["end_time_ns"] = end_time;
    ordered_json jt;
    switch (topo_kind) {
        case TopoKind::Dumbbell:
            jt["kind"] = "dumbbell";
            jt["switches"] = switches;
            jt["senders"] = senders;
            break;
        case TopoKind::Chain:
            jt["kind"] = "chain";
            jt["hosts_per_switch"] = hosts_per_switch;
            break;
        case TopoKind::Tree: {
            jt["kind"] = "tree";
            jt["hosts_per_switch"] = hosts_per_switch;
            ordered_json jl = ordered_json::array();
            for (auto [a, b] : switch_links) jl.push_back({a, b});
            jt["switch_links"] = jl;
            break;
        }
        case TopoKind::FatTree:
            jt["kind"] = "fattree";
            jt["k"] = fattree_k;
            break;
    }
    jt["link"] = {{"rate_bps", link.rate_bps},
                  {"propagation_delay_ns", link.propagation_delay_ns}};
    j["topology"] = jt;
    j["cc"] = {{"mode", cc_mode_name(cc_mode)},
               {"eta", eta},
               {"alpha", alpha},
               {"beta", beta},
               {"w_ai_bytes", w_ai_bytes},
               {"max_stage", max_stage},
               {"ack_batch", ack_batch},
               {"lhcs_bandwidth_source",
                lhcs_bw == LhcsBandwidthSource::LastHop ? "last_hop" : "first_entry"}};
    j["pfc"] = {{"enabled", pfc_enabled},
                {"pause_threshold_bytes", pfc_pause_threshold},
                {"resume_fraction", pfc_resume_fraction}};
    j["int_refresh_ns"] = int_refresh_ns;
    ordered_json jw;
    if (workload_kind == WorkloadKind::Script) {
        jw["kind"] = "script";
        jw["flows"] = ordered_json::array();
        for (const auto& fs : script) {
            ordered_json jf;
            jf["src"] = fs.src;
            jf["dst"] = fs.dst;
            jf["size_bytes"] = fs.size_bytes;
            jf["start_ns"] = fs.start;
            if (fs.stop_at >= 0) jf["stop_ns"] = fs.stop_at;
            if (fs.src_port) jf["src_port"] = fs.src_port;
            if (fs.dst_port) jf["dst_port"] = fs.dst_port;
            jw["flows"].push_back(jf);
        }
    } else {
        jw["kind"] = "poisson";
        jw["cdf"] = cdf_path;
        jw["load"] = load;
        jw["duration_ns"] = workload_duration;
    }
    j["workload"] = jw;
    j["metrics"] = {{"queue_sample_ns", queue_sample_ns},
                    {"rate_sample_ns", rate_sample_ns},
                    {"util_window_ns", util_window_ns},
                    {"window_trace", window_trace},
                    {"size_buckets_bytes", size_buckets}};
    return j.dump(2) + "\n";
}

std::string apply_override(const std::string& json_text, const std::string& key,
                           const std::string& value) {
    json j = json::parse(json_text);
    json* cur = &j;
    std::istringstream is(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(is, part, '.')) parts.push_back(part);
    if (parts.empty()) throw ConfigError("empty override key");
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) cur = &(*cur)[parts[i]];
    json v;
    try {
        v = json::parse(value);
    } catch (const json::parse_error&) {
        v = value; // bare strings (e.g. --set cc.mode=hpcc)
    }
    (*cur)[parts.back()] = v;
    return j.dump(2);
}

} // namespace fnccsim
