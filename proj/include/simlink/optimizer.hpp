#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "simlink/channel.hpp"
#include "simlink/sdp.hpp"

namespace simlink {

/// One layer's view of H = left * Diag(v) * right, where v holds the phase
/// coefficients of the layer under optimization.
struct LayerSubproblem {
    int layer = 0;  // 1-based
    Side side = Side::Tx;
    MatC left;   // S x a, cascade from this layer's output to the receiver
    MatC right;  // a x S, cascade from the transmitter into this layer
    int a = 0;   // atoms in the layer
};

/// Splits the cascade around layer (p, side); the reconstruction
/// left * Diag(coeffs) * right must match assemble_h to 1e-6 or the
/// convention is broken and this throws.
LayerSubproblem factorize_layer(int p, Side side, const PhaseConfig& phases,
                                const ChannelState& state);

/// Lifted per-stream costs: Lambda_s chosen so that for every unimodular v,
/// ||v^H Lambda_s|| = ||left.row(s) * Diag(v) * right||.
std::vector<MatC> lift_costs(const LayerSubproblem& sub);

/// sum_s ||left.row(s) * Diag(v) * right||^2 evaluated directly.
double cascade_gain(const VecC& v, const LayerSubproblem& sub);

/// Padded (a+1)^2 cost matrices for the unit-diagonal SDP.
SdpProblem lifted_sdp(const std::vector<MatC>& lambdas);

/// Rank-one recovery: eigen-decompose V, sample candidates, de-rotate by
/// the auxiliary coordinate, project to unit modulus, keep the best scoring
/// candidate (default score: the lifted objective). The returned vector is
/// the layer coefficient vector.
VecC gaussian_randomize(const SdpSolution& solution, const std::vector<MatC>& lambdas,
                        int draws, std::uint64_t seed,
                        const std::function<double(const VecC&)>& score = {});

struct ClosedFormTd {
    double t_d = 0.0;
    bool boundary = false;  // rho S l_d >= v B: gradient non-negative everywhere
};

/// argmin over t_d >= 0 of e^{-(vB/(S l)) t_d} + rho t_d.
ClosedFormTd closed_form_td(double v_data, const LinkScenario& sc);

/// P1 objective at (v_data, t_d) with t_b from the scenario.
double regret(double v_data, double t_d, const LinkScenario& sc);

struct IterationRecord {
    int iteration = 0;
    double v_data = 0.0;           // accepted
    double v_data_proposed = 0.0;  // best pre-acceptance value this sweep
    double t_d = 0.0;
    double total_delay = 0.0;  // T = D2 + t_b + t_d
    double regret = 0.0;
    int layers_accepted = 0;
    int layers_failed = 0;  // solver non-convergence, sweep continued
};

struct BcdTrace {
    std::vector<IterationRecord> records;
    PhaseConfig final_phases;
    double final_rate = 0.0;
    double final_td = 0.0;
    double d2 = 0.0;
};

/// Algorithm: per iteration sweep TX layers 1..L then RX layers 1..K, each
/// via factorize -> lift -> SDP -> randomization, accepting a layer update
/// only if v_data does not decrease; then the closed-form t_d update.
BcdTrace bcd_optimize(const LinkScenario& sc, int max_iterations, std::uint64_t seed);

/// Reference heuristic: cyclic per-atom update over a fixed 16-point phase
/// grid, maximizing v_data with everything else held fixed.
BcdTrace ao_baseline(const LinkScenario& sc, int max_iterations, std::uint64_t seed);

/// Trace file: one row per iteration.
std::string trace_table(const BcdTrace& trace);

}  // namespace simlink
