#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rislab/config.hpp"
#include "rislab/rislab.hpp"

using namespace rislab;

namespace {

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file.open(path);
        if (!file) throw std::runtime_error("cannot write " + path);
        os = &file;
    }
};

void write_bound_csv(std::ostream& out, const BoundConfig& cfg, const std::string& mode) {
    out << "mode,K,N,P_dbm,target,m_min,a_star,value,feasible,clamped\n";
    std::vector<double> powers = cfg.P_dbm;
    if (powers.empty()) powers.push_back(watts_to_dbm(cfg.scenario.P));
    for (double p : powers) {
        SymmetricScenario s = cfg.scenario;
        s.P = dbm_to_watts(p);
        BoundResult r;
        if (mode == "distributed") r = min_elements_distributed(s, cfg.target, cfg.grid);
        else if (cfg.implicit) r = min_elements_centralized_implicit(s, cfg.target);
        else r = min_elements_centralized(s, cfg.target, cfg.grid);
        out << mode << (cfg.implicit && mode == "centralized" ? "-implicit" : "") << ',' << s.K << ',' << s.N << ','
            << format_value(p) << ',' << format_value(cfg.target) << ',';
        if (r.feasible) out << r.m_min << ',' << format_value(r.a_star) << ',' << format_value(r.value);
        else out << ",,";
        out << ',' << (r.feasible ? 1 : 0) << ',' << (r.clamped ? 1 : 0) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS interference-network simulator"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Monte-Carlo run of a preset or JSON scenario");
    std::string scenario_name;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    unsigned parallel = 1;
    run_cmd->add_option("--scenario", scenario_name, "preset name or path to a JSON file")->required();
    run_cmd->add_option("--trials", trials, "number of trials");
    run_cmd->add_option("--seed", seed, "master seed");
    run_cmd->add_option("--out", out_path, "CSV output (default stdout)");
    run_cmd->add_option("--parallel", parallel, "worker threads (0 = all cores)");

    auto* bound_cmd = app.add_subcommand("bound", "Minimum number of elements from the analytic bound");
    std::string mode = "centralized";
    std::string bound_config;
    std::optional<double> target;
    bool implicit = false;
    std::string bound_out;
    bound_cmd->add_option("--mode", mode, "centralized or distributed")
        ->check(CLI::IsMember({"centralized", "distributed"}));
    bound_cmd->add_option("--config", bound_config, "JSON bound configuration")->required()->check(CLI::ExistingFile);
    bound_cmd->add_option("--target", target, "SINR (centralized) or score (distributed) target");
    bound_cmd->add_flag("--implicit", implicit, "centralized bound with M- = M+ = M");
    bound_cmd->add_option("--out", bound_out, "CSV output (default stdout)");

    app.add_subcommand("presets", "List the named scenarios");

    auto* sweep_cmd = app.add_subcommand("sweep-placement", "Required M versus surface position");
    std::string sweep_preset = "fig-placement";
    double sweep_target = 4.0;
    std::string sweep_out;
    PlacementOptions popt;
    std::vector<std::string> sweep_methods{"filled", "sr"};
    std::optional<std::uint64_t> sweep_seed;
    sweep_cmd->add_option("--preset", sweep_preset, "preset or JSON scenario with one central arm");
    sweep_cmd->add_option("--target", sweep_target, "mean sum-rate target in bits/s/Hz");
    sweep_cmd->add_option("--x0", popt.x0, "surface x positions");
    sweep_cmd->add_option("--methods", sweep_methods, "optimizers to compare");
    sweep_cmd->add_option("--m-min", popt.m_lo, "smallest even M");
    sweep_cmd->add_option("--m-max", popt.m_hi, "largest even M");
    sweep_cmd->add_option("--trials", popt.trials, "trials per evaluated M");
    sweep_cmd->add_option("--seed", sweep_seed, "master seed");
    sweep_cmd->add_option("--parallel", popt.threads, "worker threads (0 = all cores)");
    sweep_cmd->add_option("--out", sweep_out, "CSV output (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            Scenario sc = load_scenario(scenario_name);
            if (trials) sc.trials = *trials;
            if (seed) sc.seed = *seed;
            const auto rows = run(sc, {parallel, true});
            Output out(out_path);
            write_csv(*out.os, rows);
        } else if (bound_cmd->parsed()) {
            BoundConfig cfg = bound_from_json(read_json_file(bound_config));
            if (target) cfg.target = *target;
            if (implicit) cfg.implicit = true;
            Output out(bound_out);
            write_bound_csv(*out.os, cfg, mode);
        } else if (app.got_subcommand("presets")) {
            for (const auto& name : preset_names()) {
                const Scenario s = preset(name);
                std::printf("%-30s K=%d N=%d arms=%zu trials=%d\n", name.c_str(), s.K, s.N, s.arms.size(), s.trials);
            }
        } else if (sweep_cmd->parsed()) {
            Scenario base = load_scenario(sweep_preset);
            if (sweep_seed) base.seed = *sweep_seed;
            popt.methods.clear();
            for (const auto& m : sweep_methods) popt.methods.push_back(parse_method(m));
            const auto rows = placement_sweep(base, sweep_target, popt);
            Output out(sweep_out);
            write_placement_csv(*out.os, rows);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
