#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "frislab/sweep.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void report(const frislab::SweepResult& result) {
    for (const auto& p : result.points) {
        std::cout << "snr " << p.snr_db << " dB";
        if (p.frames > 0)
            std::cout << "  ber " << p.ber_sim << "  (" << p.bit_errors << " errors / "
                      << p.frames << " frames, " << p.wall_time_s << " s)";
        if (p.ber_analytic) std::cout << "  bound " << *p.ber_analytic;
        std::cout << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FRIS index-modulation link-level simulator and BER bound toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, preset_name;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "output CSV path")->required();
        cmd->add_option("--seed", seed, "override the sweep seed")
            ->each([&seed_set](const std::string&) { seed_set = true; });
        cmd->add_option("--workers", workers, "worker thread count (0 = all cores)");
    };

    CLI::App* run = app.add_subcommand("run", "run a Monte Carlo sweep from a config file");
    run->add_option("--config", config_path, "sweep configuration file")->required();
    add_common(run);

    CLI::App* preset = app.add_subcommand("preset", "run a named figure preset");
    preset->add_option("name", preset_name, "preset name (see `frislab presets`)")->required();
    add_common(preset);

    CLI::App* analytic =
        app.add_subcommand("analytic", "evaluate the analytical union bound only");
    analytic->add_option("--config", config_path, "sweep configuration file")->required();
    analytic->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* presets = app.add_subcommand("presets", "list available presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets->parsed()) {
            for (const auto& p : frislab::list_presets())
                std::cout << p.name << "  -  " << p.description << '\n';
            return 0;
        }

        frislab::SweepSpec spec;
        if (preset->parsed())
            spec = frislab::find_preset(preset_name).spec;
        else
            spec = frislab::parse_config(read_file(config_path));
        if (seed_set) spec.seed = seed;
        if (workers >= 0) spec.workers = workers;

        frislab::SweepResult result;
        if (analytic->parsed())
            result = frislab::analytic_only(spec);
        else
            result = frislab::run_sweep(spec);
        frislab::write_csv(result, out_path);
        report(result);
        std::cout << "wrote " << out_path << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
