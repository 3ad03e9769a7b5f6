#pragma once

#include <map>
#include <string>
#include <vector>

#include "simlink/optimizer.hpp"
#include "simlink/scenario.hpp"

namespace simlink {

/// One experiment axis. "atoms" sets M=N, "layers" sets L=K; any other
/// name is applied through the config field registry.
struct SweepSpec {
    std::string param;
    std::vector<double> values;
    int replications = 5;
    int max_iterations = 20;
    int workers = 1;
    LinkScenario base;
};

struct SweepRow {
    double value = 0.0;
    int replication = 0;
    std::string algorithm;  // "bcd" | "ao"
    std::uint64_t seed = 0;
    double final_rate = 0.0;
    double mean_rate = 0.0;  // over iterations
    double final_td = 0.0;
    double final_regret = 0.0;
    std::string status;  // "ok" or the failure message
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;  // ordered by (value, replication, algorithm)
    double wall_seconds = 0.0;
};

LinkScenario apply_sweep_value(const LinkScenario& base, const std::string& param,
                               double value);

/// Deterministic given (config, seed): per-cell seeds derive from
/// (base seed, value index, replication index), independent of worker count.
SweepResult run_sweep(const SweepSpec& spec);

std::string sweep_table(const SweepResult& r);

/// D-bar(T, l_d) for fixed per-stream rates on a (T, l_d) grid.
struct SurfaceCell {
    int streams = 0;
    double rate = 0.0;
    double total_delay = 0.0;
    double packet_mean = 0.0;
    double bound_raw = 0.0;
    double bound = 0.0;
    double t_b = 0.0;
    double t_d = 0.0;
    bool feasible = true;  // T > D2
};

std::vector<SurfaceCell> delay_surface(const LinkScenario& base,
                                       const std::map<int, double>& rate_per_streams,
                                       const std::vector<double>& total_grid,
                                       const std::vector<double>& packet_grid);

std::string surface_table(const std::vector<SurfaceCell>& cells);

/// Analytic queueing bound next to the simulated tail on a t_b grid.
std::string tail_table(const LinkScenario& sc, double v_data,
                       const std::vector<double>& tb_grid, long departures,
                       std::uint64_t seed);

/// Manifest records everything needed to reproduce a result file:
/// effective config, hash, seeds, tool version, wall time.
std::string manifest_json(const LinkScenario& base, const std::string& command,
                          std::uint64_t base_seed, double wall_seconds);

/// Writes content to dir/name; surfaces I/O failures with path context.
void write_file(const std::string& dir, const std::string& name,
                const std::string& content);

inline constexpr const char* kToolVersion = "simlink 0.1.0";

}  // namespace simlink
