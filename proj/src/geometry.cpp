#include "simlink/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace simlink {

AtomIndex atom_index(int m, int per_row) {
    if (per_row < 1 || m < 1 || m > per_row * per_row)
        throw std::out_of_range("atom index out of range");
    const int row = (m + per_row - 1) / per_row;  // ceil(m / per_row)
    const int col = (m - 1) % per_row + 1;
    return {m, row, col, per_row};
}

namespace {

struct SideGeom {
    double pitch;
    double gap;
    int per_row;
    int atoms;
};

SideGeom side_geom(const LinkScenario& sc, Side side) {
    if (side == Side::Tx)
        return {sc.atom_pitch_tx, sc.layer_gap_tx(), sc.grid_cols_tx(), sc.atoms_tx};
    return {sc.atom_pitch_rx, sc.layer_gap_rx(), sc.grid_cols_rx(), sc.atoms_rx};
}

}  // namespace

double source_to_layer_distance(int s, const AtomIndex& idx, const LinkScenario& sc,
                                Side side) {
    if (s < 1 || s > sc.num_streams) throw std::out_of_range("stream index out of range");
    const auto g = side_geom(sc, side);
    const double a = (idx.row - (g.per_row + 1) / 2.0) * g.pitch -
                     (s - (sc.num_streams + 1) / 2.0) * sc.wavelength / 2.0;
    const double b = (idx.col - (g.per_row + 1) / 2.0) * g.pitch;
    return std::sqrt(a * a + b * b + g.gap * g.gap);
}

double inplane_spacing(const AtomIndex& a, const AtomIndex& b, double pitch) {
    const double dz = a.row - b.row;
    const double dx = a.col - b.col;
    return pitch * std::sqrt(dz * dz + dx * dx);
}

double interlayer_distance(const AtomIndex& a, const AtomIndex& b,
                           const LinkScenario& sc, Side side) {
    const auto g = side_geom(sc, side);
    const double r = inplane_spacing(a, b, g.pitch);
    return std::sqrt(r * r + g.gap * g.gap);
}

GeometryReport build_geometry(const LinkScenario& sc) {
    GeometryReport rep;
    const int S = sc.num_streams;
    const int M = sc.atoms_tx;
    const int N = sc.atoms_rx;

    rep.gap_tx = sc.layer_gap_tx();
    rep.gap_rx = sc.layer_gap_rx();

    rep.source_tx.resize(S, M);
    for (int s = 1; s <= S; ++s)
        for (int m = 1; m <= M; ++m)
            rep.source_tx(s - 1, m - 1) =
                source_to_layer_distance(s, atom_index(m, sc.grid_cols_tx()), sc, Side::Tx);

    rep.source_rx.resize(N, S);
    for (int n = 1; n <= N; ++n)
        for (int s = 1; s <= S; ++s)
            rep.source_rx(n - 1, s - 1) =
                source_to_layer_distance(s, atom_index(n, sc.grid_cols_rx()), sc, Side::Rx);

    rep.inplane_tx.resize(M, M);
    rep.interlayer_tx.resize(M, M);
    for (int m = 1; m <= M; ++m)
        for (int m2 = 1; m2 <= M; ++m2) {
            const auto a = atom_index(m, sc.grid_cols_tx());
            const auto b = atom_index(m2, sc.grid_cols_tx());
            rep.inplane_tx(m - 1, m2 - 1) = inplane_spacing(a, b, sc.atom_pitch_tx);
            rep.interlayer_tx(m - 1, m2 - 1) = interlayer_distance(a, b, sc, Side::Tx);
        }

    rep.inplane_rx.resize(N, N);
    rep.interlayer_rx.resize(N, N);
    for (int n = 1; n <= N; ++n)
        for (int n2 = 1; n2 <= N; ++n2) {
            const auto a = atom_index(n, sc.grid_cols_rx());
            const auto b = atom_index(n2, sc.grid_cols_rx());
            rep.inplane_rx(n - 1, n2 - 1) = inplane_spacing(a, b, sc.atom_pitch_rx);
            rep.interlayer_rx(n - 1, n2 - 1) = interlayer_distance(a, b, sc, Side::Rx);
        }

    rep.d2 = transmission_delay(sc);
    return rep;
}

namespace {

// One side of the D2 path: source leg plus (layers-1) interlayer hops.
double side_path_length(const LinkScenario& sc, Side side, int layers) {
    const auto g = side_geom(sc, side);
    // Source leg: max over streams and atoms (worst path) or, for the
    // aligned variant, max over streams of the closest facing atom.
    double leg = 0.0;
    for (int s = 1; s <= sc.num_streams; ++s) {
        double best = sc.d2_worst_path ? 0.0 : std::numeric_limits<double>::infinity();
        for (int m = 1; m <= g.atoms; ++m) {
            const double d =
                source_to_layer_distance(s, atom_index(m, g.per_row), sc, side);
            best = sc.d2_worst_path ? std::max(best, d) : std::min(best, d);
        }
        leg = std::max(leg, best);
    }
    // Per-hop distance: corner-to-corner (upper bound) or vertically aligned.
    double hop = g.gap;
    if (sc.d2_worst_path) {
        const double span = (g.per_row - 1) * g.pitch;
        const double r_max = std::sqrt(2.0) * span;
        hop = std::sqrt(r_max * r_max + g.gap * g.gap);
    }
    return leg + (layers - 1) * hop;
}

}  // namespace

double transmission_delay(const LinkScenario& sc) {
    const double tx = side_path_length(sc, Side::Tx, sc.layers_tx);
    const double rx = side_path_length(sc, Side::Rx, sc.layers_rx);
    return tx / sc.wave_speed_tx + rx / sc.wave_speed_rx;
}

std::string geometry_table(const GeometryReport& g) {
    std::ostringstream out;
    out.precision(17);
    out << "side\trow_index\tcol_index\tinplane_r\tinterlayer_d\n";
    for (int i = 0; i < g.inplane_tx.rows(); ++i)
        for (int j = 0; j < g.inplane_tx.cols(); ++j)
            out << "tx\t" << i + 1 << '\t' << j + 1 << '\t' << g.inplane_tx(i, j) << '\t'
                << g.interlayer_tx(i, j) << '\n';
    for (int i = 0; i < g.inplane_rx.rows(); ++i)
        for (int j = 0; j < g.inplane_rx.cols(); ++j)
            out << "rx\t" << i + 1 << '\t' << j + 1 << '\t' << g.inplane_rx(i, j) << '\t'
                << g.interlayer_rx(i, j) << '\n';
    return out.str();
}

}  // namespace simlink
