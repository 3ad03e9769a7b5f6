#pragma once

#include <functional>
#include <vector>

#include "simlink/scenario.hpp"

namespace simlink {

/// Non-negative non-increasing tail bound f(x) >= P{X > x}.
using TailFn = std::function<double(double)>;

/// (t_b, t_d, D2, T) split; T = D2 + t_b + t_d holds exactly.
struct DelayBudget {
    double t_b = 0.0;
    double t_d = 0.0;
    double d2 = 0.0;
    double total() const { return d2 + t_b + t_d; }
};

double service_curve(double v_data, double bandwidth, double t);

/// (vB - delta l)/(vB l); throws std::domain_error when unstable.
double optimal_mu(double v_data, double bandwidth, double arrival_rate,
                  double packet_mean);

/// exp(-((vB - delta l)/l) t_b)
double queueing_bound(double t_b, const LinkScenario& sc, double v_data);

/// exp(-(vB/(S l)) t_d)
double propagation_bound(double t_d, const LinkScenario& sc, double v_data);

/// inf over 0 <= tau <= x of f(tau) + g(x - tau), on a uniform grid.
double minplus_convolve(const TailFn& f, const TailFn& g, double x, int grid = 2048);

/// Closed form for e^{-a tau} (x) e^{-c (x-tau)}: interior stationary point
/// when feasible, else the better boundary.
double minplus_two_exponentials(double a, double c, double x);

struct DelayBound {
    double raw = 0.0;      // may exceed 1 for small T
    double clamped = 0.0;  // min(raw, 1)
    DelayBudget split;
};

/// Theorem-level composition: inf over t_b + t_d = T - D2 of
/// queueing_bound(t_b) + propagation_bound(t_d). Throws when T <= D2
/// or the queue is unstable.
DelayBound total_delay_bound(double total_threshold, const LinkScenario& sc,
                             double v_data, double d2);

/// Empirical waiting-time tail of the fluid FIFO queue: Poisson(delta_d)
/// arrivals, Exp(packet_mean) sizes, drained at v_data*B bits/s.
struct QueueTail {
    std::vector<double> grid;          // t_b values
    std::vector<double> tail;          // P-hat{D1 > t_b}
    std::vector<double> ci_halfwidth;  // binomial normal-approx half-widths
    double mean_wait = 0.0;
    long departures = 0;
};

QueueTail simulate_queue(const LinkScenario& sc, double v_data, long departures,
                         std::uint64_t seed, const std::vector<double>& tb_grid);

}  // namespace simlink
