#include <chrono>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "simlink/geometry.hpp"
#include "simlink/snc.hpp"
#include "simlink/sweep.hpp"

namespace {

using namespace simlink;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir = "results";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario config file (JSON)");
    cmd->add_option("--set", args.overrides, "override: field=value (repeatable)");
    cmd->add_option("--seed", args.seed, "base RNG seed")->each([&](const std::string&) {
        args.seed_set = true;
    });
    cmd->add_option("--out", args.out_dir, "output directory");
}

LinkScenario resolve_scenario(const CommonArgs& args) {
    LinkScenario sc =
        args.config_path.empty() ? default_scenario() : load_config(args.config_path);
    for (const auto& o : args.overrides) set_field(sc, o);
    if (args.seed_set) sc.rng_seed = args.seed;
    const auto errs = validate(sc);
    if (!errs.empty()) {
        for (const auto& e : errs) std::cerr << "config error: " << e.message << '\n';
        throw CLI::RuntimeError(2);
    }
    for (const auto& w : validate_warnings(sc))
        std::cerr << "config warning: " << w.message << '\n';
    return sc;
}

void emit(const std::string& dir, const std::string& table_name, const std::string& table,
          const LinkScenario& sc, const std::string& command, double wall) {
    write_file(dir, table_name, table);
    write_file(dir, "manifest.json", manifest_json(sc, command, sc.rng_seed, wall));
    write_file(dir, "effective_config.json", to_config_text(sc));
    std::cout << "wrote " << dir << "/" << table_name << '\n';
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stod(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIM link simulator: phase optimization and delay bounds"};
    app.require_subcommand(1);

    // rate-sweep
    auto* sweep_cmd = app.add_subcommand("rate-sweep", "BCD vs AO over one parameter axis");
    CommonArgs sweep_args;
    add_common(sweep_cmd, sweep_args);
    std::string sweep_param = "num_streams";
    std::string sweep_values = "1,2,3,4,5";
    int reps = 5, iters = 20, workers = 1;
    bool paper_scale = false;
    sweep_cmd->add_option("--param", sweep_param, "swept parameter (num_streams|atoms|layers|...)");
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values");
    sweep_cmd->add_option("--reps", reps, "replications per value");
    sweep_cmd->add_option("--iters", iters, "optimizer iterations");
    sweep_cmd->add_option("--workers", workers, "parallel workers");
    sweep_cmd->add_flag("--paper-scale", paper_scale, "raise reps/iters toward paper settings");

    // delay-surface
    auto* surface_cmd = app.add_subcommand("delay-surface", "D-bar over (T, l_d) grids");
    CommonArgs surface_args;
    add_common(surface_cmd, surface_args);
    std::string t_grid_arg = "0.55,0.6,0.65,0.7,0.75,0.8,0.9,1.0,1.2,1.5";
    std::string ld_grid_arg;  // default built below
    surface_cmd->add_option("--t-grid", t_grid_arg, "total-delay thresholds, s");
    surface_cmd->add_option("--ld-grid", ld_grid_arg, "packet means, bits");

    // delay-tail
    auto* tail_cmd = app.add_subcommand("delay-tail", "analytic vs simulated queue tail");
    CommonArgs tail_args;
    add_common(tail_cmd, tail_args);
    double tail_rate = 25.92;
    long departures = 100000;
    tail_cmd->add_option("--rate", tail_rate, "fixed v_data, bits/s/Hz");
    tail_cmd->add_option("--departures", departures, "simulated departures");

    // single-run
    auto* single_cmd = app.add_subcommand("single-run", "one BCD and one AO run, full traces");
    CommonArgs single_args;
    add_common(single_cmd, single_args);
    int single_iters = 20;
    single_cmd->add_option("--iters", single_iters, "optimizer iterations");

    CLI11_PARSE(app, argc, argv);
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    try {
        if (sweep_cmd->parsed()) {
            SweepSpec spec;
            spec.base = resolve_scenario(sweep_args);
            spec.param = sweep_param;
            spec.values = parse_values(sweep_values);
            spec.replications = paper_scale ? 10 : reps;
            spec.max_iterations = paper_scale ? 50 : iters;
            spec.workers = workers;
            const SweepResult result = run_sweep(spec);
            emit(sweep_args.out_dir, "rate_sweep.csv", sweep_table(result), spec.base,
                 "rate-sweep --param " + sweep_param, result.wall_seconds);
        } else if (surface_cmd->parsed()) {
            const LinkScenario sc = resolve_scenario(surface_args);
            std::vector<double> ld_grid;
            if (ld_grid_arg.empty())
                for (double ld = 2e7; ld <= 2e8 + 1; ld += 1e7) ld_grid.push_back(ld);
            else
                ld_grid = parse_values(ld_grid_arg);
            const std::map<int, double> rates{{1, 25.92}, {3, 40.96}, {5, 54.55}};
            const auto cells = delay_surface(sc, rates, parse_values(t_grid_arg), ld_grid);
            emit(surface_args.out_dir, "delay_surface.csv", surface_table(cells), sc,
                 "delay-surface", elapsed());
        } else if (tail_cmd->parsed()) {
            const LinkScenario sc = resolve_scenario(tail_args);
            std::vector<double> grid;
            for (double t = 0.0; t <= 0.5 + 1e-12; t += 0.02) grid.push_back(t);
            const std::string table = tail_table(sc, tail_rate, grid, departures, sc.rng_seed);
            emit(tail_args.out_dir, "delay_tail.csv", table, sc, "delay-tail", elapsed());
        } else if (single_cmd->parsed()) {
            const LinkScenario sc = resolve_scenario(single_args);
            const BcdTrace bcd = bcd_optimize(sc, single_iters, sc.rng_seed);
            const BcdTrace ao = ao_baseline(sc, single_iters, sc.rng_seed);
            write_file(single_args.out_dir, "bcd_trace.csv", trace_table(bcd));
            write_file(single_args.out_dir, "ao_trace.csv", trace_table(ao));
            write_file(single_args.out_dir, "manifest.json",
                       manifest_json(sc, "single-run", sc.rng_seed, elapsed()));
            write_file(single_args.out_dir, "effective_config.json", to_config_text(sc));
            std::cout << "bcd final rate " << bcd.final_rate << " bps/Hz, ao final rate "
                      << ao.final_rate << " bps/Hz, D2 " << bcd.d2 << " s\n";
        }
    } catch (const CLI::RuntimeError& e) {
        return e.get_exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
