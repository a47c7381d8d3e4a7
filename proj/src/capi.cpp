#include "fnccsim.h"

#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

#include "config.hpp"
#include "scenario.hpp"

using namespace fnccsim;

struct fnccsim_sim {
    std::string config_text;     // JSON text, mutated by overrides
    std::string origin;          // for error messages
    bool config_ok = false;
    bool ran = false;
    std::unique_ptr<Scenario> scenario;
    std::uint64_t events = 0;
    std::string last_error;
    std::string scratch; // backing store for returned strings

    fnccsim_status validate() {
        try {
            ScenarioConfig cfg = parse_config_text(config_text, origin);
            (void)cfg;
            config_ok = true;
            last_error.clear();
            return FNCC_OK;
        } catch (const std::exception& e) {
            config_ok = false;
            last_error = e.what();
            return FNCC_ERR_CONFIG;
        }
    }
};

extern "C" {

const char* fnccsim_version(void) { return "1.0.0"; }

fnccsim_sim* fnccsim_create_from_string(const char* config_json) {
    auto* sim = new (std::nothrow) fnccsim_sim;
    if (!sim) return nullptr;
    sim->origin = "<string>";
    if (!config_json) {
        sim->last_error = "null config string";
        return sim;
    }
    sim->config_text = config_json;
    sim->validate();
    return sim;
}

fnccsim_sim* fnccsim_create_from_file(const char* config_path) {
    auto* sim = new (std::nothrow) fnccsim_sim;
    if (!sim) return nullptr;
    if (!config_path) {
        sim->last_error = "null config path";
        return sim;
    }
    sim->origin = config_path;
    try {
        ScenarioConfig cfg = parse_config_file(config_path);
        sim->config_text = cfg.dump_json();
        sim->config_ok = true;
    } catch (const std::exception& e) {
        sim->last_error = e.what();
    }
    return sim;
}

void fnccsim_destroy(fnccsim_sim* sim) { delete sim; }

fnccsim_status fnccsim_ready(const fnccsim_sim* sim) {
    if (!sim) return FNCC_ERR_ARG;
    return sim->config_ok ? FNCC_OK : FNCC_ERR_CONFIG;
}

fnccsim_status fnccsim_set(fnccsim_sim* sim, const char* key, const char* value) {
    if (!sim) return FNCC_ERR_ARG;
    if (!key || !value) {
        sim->last_error = "null key or value";
        return FNCC_ERR_ARG;
    }
    if (sim->ran) {
        sim->last_error = "cannot override after run";
        return FNCC_ERR_STATE;
    }
    if (!sim->config_ok) return FNCC_ERR_CONFIG;
    try {
        std::string updated = apply_override(sim->config_text, key, value);
        ScenarioConfig cfg = parse_config_text(updated, sim->origin);
        (void)cfg;
        sim->config_text = std::move(updated);
        return FNCC_OK;
    } catch (const std::exception& e) {
        sim->last_error = e.what();
        return FNCC_ERR_CONFIG;
    }
}

fnccsim_status fnccsim_run(fnccsim_sim* sim) {
    if (!sim) return FNCC_ERR_ARG;
    if (!sim->config_ok) return FNCC_ERR_CONFIG;
    if (sim->ran) {
        sim->last_error = "simulation already ran";
        return FNCC_ERR_STATE;
    }
    try {
        ScenarioConfig cfg = parse_config_text(sim->config_text, sim->origin);
        sim->scenario = std::make_unique<Scenario>(std::move(cfg));
        auto summary = sim->scenario->run();
        sim->events = summary.events_processed;
        sim->ran = true;
        return FNCC_OK;
    } catch (const ConfigError& e) {
        sim->last_error = e.what();
        return FNCC_ERR_CONFIG;
    } catch (const std::exception& e) {
        sim->last_error = e.what();
        return FNCC_ERR_RUNTIME;
    }
}

fnccsim_status fnccsim_write_outputs(fnccsim_sim* sim, const char* out_dir) {
    if (!sim) return FNCC_ERR_ARG;
    if (!out_dir) {
        sim->last_error = "null output directory";
        return FNCC_ERR_ARG;
    }
    if (!sim->ran) {
        sim->last_error = "run the simulation before writing outputs";
        return FNCC_ERR_STATE;
    }
    try {
        sim->scenario->write_outputs(out_dir);
        return FNCC_OK;
    } catch (const std::exception& e) {
        sim->last_error = e.what();
        return FNCC_ERR_IO;
    }
}

const char* fnccsim_summary_json(fnccsim_sim* sim) {
    if (!sim || !sim->ran) return nullptr;
    sim->scratch = sim->scenario->summary_json();
    return sim->scratch.c_str();
}

const char* fnccsim_resolved_config_json(fnccsim_sim* sim) {
    if (!sim || !sim->config_ok) return nullptr;
    try {
        sim->scratch = parse_config_text(sim->config_text, sim->origin).dump_json();
    } catch (const std::exception& e) {
        sim->last_error = e.what();
        return nullptr;
    }
    return sim->scratch.c_str();
}

const char* fnccsim_last_error(const fnccsim_sim* sim) {
    if (!sim) return "null handle";
    return sim->last_error.c_str();
}

fnccsim_status fnccsim_flows_completed(fnccsim_sim* sim, uint64_t* out) {
    if (!sim || !out) return FNCC_ERR_ARG;
    if (!sim->ran) return FNCC_ERR_STATE;
    *out = sim->scenario->metrics().flows().size();
    return FNCC_OK;
}

fnccsim_status fnccsim_events_processed(fnccsim_sim* sim, uint64_t* out) {
    if (!sim || !out) return FNCC_ERR_ARG;
    if (!sim->ran) return FNCC_ERR_STATE;
    *out = sim->events;
    return FNCC_OK;
}

} // extern "C"
