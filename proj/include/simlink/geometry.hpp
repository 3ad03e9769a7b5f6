#pragma once

#include <Eigen/Dense>
#include <string>

#include "simlink/scenario.hpp"

namespace simlink {

enum class Side { Tx, Rx };

/// 1-based flat index mapped onto a square meta-atom grid.
/// row = ceil(m / per_row), col = ((m-1) mod per_row) + 1.
struct AtomIndex {
    int flat;     // m
    int row;      // m_z
    int col;      // m_x
    int per_row;  // m_max^r
};

AtomIndex atom_index(int m, int per_row);

/// Distance from the s-th stream port to an atom of the facing layer:
/// sqrt(a^2 + b^2 + gap^2), where a carries the stream offset along z
/// (half-wavelength port spacing) and b the in-plane column offset.
double source_to_layer_distance(int s, const AtomIndex& idx, const LinkScenario& sc,
                                Side side);

/// In-plane spacing r_{m,m'} between two atoms on one layer.
double inplane_spacing(const AtomIndex& a, const AtomIndex& b, double pitch);

/// Distance between atoms on adjacent layers: sqrt(r^2 + gap^2).
double interlayer_distance(const AtomIndex& a, const AtomIndex& b,
                           const LinkScenario& sc, Side side);

/// All pairwise distances for one SIM stack pair, plus the deterministic
/// transmission-delay constant D2. Pure function of the scenario.
struct GeometryReport {
    Eigen::MatrixXd source_tx;      // S x M, d_{s,TX}
    Eigen::MatrixXd source_rx;      // N x S, d_{RX,s}
    Eigen::MatrixXd inplane_tx;     // M x M, r_{m,m'} on a TX layer
    Eigen::MatrixXd inplane_rx;     // N x N
    Eigen::MatrixXd interlayer_tx;  // M x M, per-hop distances
    Eigen::MatrixXd interlayer_rx;  // N x N
    double gap_tx = 0.0;            // d_t
    double gap_rx = 0.0;            // d_r
    double d2 = 0.0;                // s
};

GeometryReport build_geometry(const LinkScenario& sc);

/// Worst-case (or aligned, per sc.d2_worst_path) end-to-end transmission
/// delay through both stacks. Independent of phase configuration.
double transmission_delay(const LinkScenario& sc);

/// One row per atom pair, tab-separated, for offline inspection.
std::string geometry_table(const GeometryReport& g);

}  // namespace simlink
