// Command-line front end; talks to the simulator only through the C API.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fnccsim.h"

namespace fs = std::filesystem;

namespace {

std::string default_out_root() {
    if (const char* env = std::getenv("SIM_OUT")) return env;
    return "out";
}

// Preset search order: explicit env override, the working directory, then
// alongside the installed binary.
std::vector<fs::path> preset_dirs(const char* argv0) {
    std::vector<fs::path> dirs;
    if (const char* env = std::getenv("FNCCSIM_PRESETS")) dirs.emplace_back(env);
    dirs.emplace_back("presets");
    std::error_code ec;
    fs::path exe = fs::read_symlink("/proc/self/exe", ec);
    if (ec && argv0) exe = fs::absolute(argv0, ec);
    if (!exe.empty()) {
        dirs.push_back(exe.parent_path() / "presets");
        dirs.push_back(exe.parent_path().parent_path() / "presets");
    }
    return dirs;
}

std::string resolve_config(const std::string& arg, const char* argv0) {
    if (fs::exists(arg)) return arg;
    for (const auto& dir : preset_dirs(argv0)) {
        fs::path p = dir / (arg + ".json");
        if (fs::exists(p)) return p.string();
        p = dir / arg;
        if (fs::exists(p)) return p.string();
    }
    return arg; // let the library report the IO error
}

int fail(fnccsim_sim* sim, const char* what) {
    std::fprintf(stderr, "error: %s: %s\n", what, fnccsim_last_error(sim));
    fnccsim_destroy(sim);
    return 1;
}

fnccsim_sim* make_sim(const std::string& config, const std::vector<std::string>& sets,
                      std::string* err) {
    fnccsim_sim* sim = fnccsim_create_from_file(config.c_str());
    if (!sim) {
        *err = "out of memory";
        return nullptr;
    }
    if (fnccsim_ready(sim) != FNCC_OK) {
        *err = fnccsim_last_error(sim);
        fnccsim_destroy(sim);
        return nullptr;
    }
    for (const auto& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            *err = "--set expects key=value, got '" + s + "'";
            fnccsim_destroy(sim);
            return nullptr;
        }
        if (fnccsim_set(sim, s.substr(0, eq).c_str(), s.substr(eq + 1).c_str()) != FNCC_OK) {
            *err = fnccsim_last_error(sim);
            fnccsim_destroy(sim);
            return nullptr;
        }
    }
    return sim;
}

int cmd_run(const std::string& config, std::string out_dir,
            const std::vector<std::string>& sets, const char* argv0) {
    std::string err;
    fnccsim_sim* sim = make_sim(resolve_config(config, argv0), sets, &err);
    if (!sim) {
        std::fprintf(stderr, "error: %s\n", err.c_str());
        return 1;
    }
    if (out_dir.empty()) {
        out_dir = (fs::path(default_out_root()) / fs::path(config).stem()).string();
    }
    if (fnccsim_run(sim) != FNCC_OK) return fail(sim, "run failed");
    if (fnccsim_write_outputs(sim, out_dir.c_str()) != FNCC_OK)
        return fail(sim, "writing outputs failed");
    std::printf("%s", fnccsim_summary_json(sim));
    std::fprintf(stderr, "outputs written to %s\n", out_dir.c_str());
    fnccsim_destroy(sim);
    return 0;
}

int cmd_sweep(const std::string& config, const std::string& axis,
              const std::vector<std::string>& values, std::string out_dir,
              const std::vector<std::string>& sets, const char* argv0) {
    if (out_dir.empty()) {
        out_dir = (fs::path(default_out_root()) /
                   (fs::path(config).stem().string() + "_sweep")).string();
    }
    std::string resolved = resolve_config(config, argv0);
    struct Result {
        std::string value, dir, summary, error;
        bool ok = false;
    };
    std::vector<Result> results(values.size());
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < values.size(); ++i) {
        threads.emplace_back([&, i] {
            Result& r = results[i];
            r.value = values[i];
            r.dir = (fs::path(out_dir) / (axis + "=" + values[i])).string();
            std::vector<std::string> all = sets;
            all.push_back(axis + "=" + values[i]);
            std::string err;
            fnccsim_sim* sim = make_sim(resolved, all, &err);
            if (!sim) {
                r.error = err;
                return;
            }
            if (fnccsim_run(sim) != FNCC_OK ||
                fnccsim_write_outputs(sim, r.dir.c_str()) != FNCC_OK) {
                r.error = fnccsim_last_error(sim);
                fnccsim_destroy(sim);
                return;
            }
            r.summary = fnccsim_summary_json(sim);
            r.ok = true;
            fnccsim_destroy(sim);
        });
    }
    for (auto& t : threads) t.join();

    nlohmann::ordered_json cmp;
    cmp["axis"] = axis;
    cmp["runs"] = nlohmann::ordered_json::array();
    bool all_ok = true;
    for (const auto& r : results) {
        nlohmann::ordered_json jr;
        jr["value"] = r.value;
        jr["out_dir"] = r.dir;
        if (r.ok) {
            jr["summary"] = nlohmann::ordered_json::parse(r.summary);
        } else {
            jr["error"] = r.error;
            all_ok = false;
            std::fprintf(stderr, "error: %s=%s: %s\n", axis.c_str(), r.value.c_str(),
                         r.error.c_str());
        }
        cmp["runs"].push_back(jr);
    }
    fs::create_directories(out_dir);
    std::string cmp_text = cmp.dump(2) + "\n";
    std::ofstream((fs::path(out_dir) / "comparison.json").string(), std::ios::binary) << cmp_text;
    std::printf("%s", cmp_text.c_str());
    std::fprintf(stderr, "sweep outputs written to %s\n", out_dir.c_str());
    return all_ok ? 0 : 1;
}

int cmd_presets_list(const char* argv0) {
    std::vector<std::string> names;
    for (const auto& dir : preset_dirs(argv0)) {
        std::error_code ec;
        if (!fs::is_directory(dir, ec)) continue;
        for (const auto& e : fs::directory_iterator(dir, ec)) {
            if (e.path().extension() == ".json") {
                std::string n = e.path().stem().string();
                if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
            }
        }
        if (!names.empty()) break; // first populated directory wins
    }
    std::sort(names.begin(), names.end());
    for (const auto& n : names) std::printf("%s\n", n.c_str());
    if (names.empty()) {
        std::fprintf(stderr, "no presets found (set FNCCSIM_PRESETS or run from the repo root)\n");
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("fnccsim ") + fnccsim_version() +
                 " - fabric congestion-control simulator"};
    app.require_subcommand(1);

    std::string config, out_dir, axis;
    std::vector<std::string> sets, values;

    auto* run = app.add_subcommand("run", "Run one scenario");
    run->add_option("config", config, "Config file or preset name")->required();
    run->add_option("-o,--out", out_dir, "Output directory (default: $SIM_OUT/<name>)");
    run->add_option("--set", sets, "Override, dotted key=value (repeatable)");

    auto* sweep = app.add_subcommand("sweep", "Run one scenario across parameter values");
    sweep->add_option("config", config, "Config file or preset name")->required();
    sweep->add_option("--axis", axis, "Dotted config key to sweep")->required();
    sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
    sweep->add_option("-o,--out", out_dir, "Output directory root");
    sweep->add_option("--set", sets, "Fixed override applied to every run (repeatable)");

    auto* presets = app.add_subcommand("presets", "Preset management");
    presets->require_subcommand(1);
    presets->add_subcommand("list", "List available presets");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config, out_dir, sets, argv[0]);
    if (sweep->parsed()) return cmd_sweep(config, axis, values, out_dir, sets, argv[0]);
    return cmd_presets_list(argv[0]);
}
