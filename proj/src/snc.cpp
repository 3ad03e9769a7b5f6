#include "simlink/snc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "simlink/rng.hpp"

namespace simlink {

double service_curve(double v_data, double bandwidth, double t) {
    if (t < 0.0) throw std::domain_error("service curve needs t >= 0");
    return v_data * bandwidth * t;
}

double optimal_mu(double v_data, double bandwidth, double arrival_rate,
                  double packet_mean) {
    const double vb = v_data * bandwidth;
    const double load = arrival_rate * packet_mean;
    if (!(vb > load)) throw std::domain_error("unstable queue: v_data*B <= delta_d*l_d");
    return (vb - load) / (vb * packet_mean);
}

double queueing_bound(double t_b, const LinkScenario& sc, double v_data) {
    if (t_b < 0.0) throw std::domain_error("t_b must be >= 0");
    const double vb = v_data * sc.bandwidth;
    const double load = sc.arrival_rate * sc.packet_mean;
    if (!(vb > load)) throw std::domain_error("unstable queue: v_data*B <= delta_d*l_d");
    return std::exp(-((vb - load) / sc.packet_mean) * t_b);
}

double propagation_bound(double t_d, const LinkScenario& sc, double v_data) {
    if (t_d < 0.0) throw std::domain_error("t_d must be >= 0");
    return std::exp(-(v_data * sc.bandwidth / (sc.num_streams * sc.packet_mean)) * t_d);
}

double minplus_convolve(const TailFn& f, const TailFn& g, double x, int grid) {
    if (grid < 1) throw std::invalid_argument("empty grid");
    if (x < 0.0) throw std::domain_error("x must be >= 0");
    // Closed interval: the tau = 0 split keeps the discrete operation
    // commutative and associative, and a min over more splits is still a
    // valid bound.
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        const double tau = x * static_cast<double>(i) / grid;
        best = std::min(best, f(tau) + g(x - tau));
    }
    return best;
}

double minplus_two_exponentials(double a, double c, double x) {
    // Stationarity of e^{-a t} + e^{-c (x - t)}: a e^{-a t} = c e^{-c (x-t)}.
    auto value = [&](double t) { return std::exp(-a * t) + std::exp(-c * (x - t)); };
    double best = std::min(value(0.0), value(x));
    if (a > 0.0 && c > 0.0) {
        const double t = (c * x + std::log(a / c)) / (a + c);
        if (t > 0.0 && t < x) best = std::min(best, value(t));
    }
    return best;
}

DelayBound total_delay_bound(double total_threshold, const LinkScenario& sc,
                             double v_data, double d2) {
    if (!(total_threshold > d2)) throw std::domain_error("T must exceed D2");
    const double budget = total_threshold - d2;
    const double vb = v_data * sc.bandwidth;
    const double load = sc.arrival_rate * sc.packet_mean;
    if (!(vb > load)) throw std::domain_error("unstable queue: v_data*B <= delta_d*l_d");
    const double a = (vb - load) / sc.packet_mean;          // queueing exponent
    const double c = vb / (sc.num_streams * sc.packet_mean);  // propagation exponent

    auto value = [&](double tb) {
        return std::exp(-a * tb) + std::exp(-c * (budget - tb));
    };
    double tb = value(0.0) <= value(budget) ? 0.0 : budget;
    if (a > 0.0 && c > 0.0) {
        const double t = (c * budget + std::log(a / c)) / (a + c);
        if (t > 0.0 && t < budget && value(t) < value(tb)) tb = t;
    }

    DelayBound out;
    out.split.t_b = tb;
    out.split.t_d = budget - tb;
    out.split.d2 = d2;
    out.raw = value(tb);
    out.clamped = std::min(out.raw, 1.0);
    return out;
}

QueueTail simulate_queue(const LinkScenario& sc, double v_data, long departures,
                         std::uint64_t seed, const std::vector<double>& tb_grid) {
    const double rate_bits = v_data * sc.bandwidth;
    const double load = sc.arrival_rate * sc.packet_mean;
    if (!(rate_bits > load)) throw std::domain_error("unstable queue");
    if (sc.arrival_rate == 0.0) {
        QueueTail t;
        t.grid = tb_grid;
        t.tail.assign(tb_grid.size(), 0.0);
        t.ci_halfwidth.assign(tb_grid.size(), 0.0);
        t.departures = 0;
        return t;
    }

    auto eng = make_engine(seed, 0x71756575 /* "queu" */);
    std::exponential_distribution<double> interarrival(sc.arrival_rate);
    std::exponential_distribution<double> size(1.0 / sc.packet_mean);

    // Fluid FIFO: waiting time before service starts follows the Lindley
    // recursion W_{n+1} = max(0, W_n + S_n - A_n) with S_n = bits/rate.
    QueueTail t;
    t.grid = tb_grid;
    std::vector<long> exceed(tb_grid.size(), 0);
    double wait = 0.0;
    double sum_wait = 0.0;
    for (long n = 0; n < departures; ++n) {
        sum_wait += wait;
        for (std::size_t i = 0; i < tb_grid.size(); ++i)
            if (wait > tb_grid[i]) ++exceed[i];
        const double service = size(eng) / rate_bits;
        const double gap = interarrival(eng);
        wait = std::max(0.0, wait + service - gap);
    }
    t.departures = departures;
    t.mean_wait = sum_wait / static_cast<double>(departures);
    t.tail.resize(tb_grid.size());
    t.ci_halfwidth.resize(tb_grid.size());
    for (std::size_t i = 0; i < tb_grid.size(); ++i) {
        const double p = static_cast<double>(exceed[i]) / static_cast<double>(departures);
        t.tail[i] = p;
        t.ci_halfwidth[i] = std::sqrt(p * (1.0 - p) / static_cast<double>(departures));
    }
    return t;
}

}  // namespace simlink
