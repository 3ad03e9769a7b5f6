#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "simlink/geometry.hpp"
#include "simlink/scenario.hpp"

namespace simlink {

using Complex = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

/// Per-atom phase shifts, radians in (0, 2pi].
struct PhaseConfig {
    Eigen::MatrixXd tx;  // L x M, theta_m^l
    Eigen::MatrixXd rx;  // K x N, xi_n^k

    VecC tx_coeffs(int layer) const;  // diag entries e^{j theta}, layer 1-based
    VecC rx_coeffs(int layer) const;
};

PhaseConfig uniform_random_phases(const LinkScenario& sc, std::uint64_t seed);

/// Wraps any angle into (0, 2pi].
double wrap_phase(double theta);

/// Rayleigh-Sommerfeld-style gain between atoms on adjacent layers:
/// (C cos(chi)/d) (1/(2 pi d) - j/lambda) e^{j 2 pi d / lambda}.
Complex diffraction_coefficient(double d, double cos_chi, double area, double lambda);

/// Everything the phase optimizer treats as constant: diffraction matrices,
/// correlation, one fading draw, and the composite gain.
struct ChannelState {
    MatC w_in;                // M x S, source -> TX layer 1
    std::vector<MatC> w_hop;  // L-1 entries, M x M, layer l-1 -> l
    std::vector<MatC> u_hop;  // K-1 entries, N x N
    MatC u_out;               // S x N, RX layer K -> streams
    Eigen::MatrixXd r_tx;     // M x M spatial correlation
    Eigen::MatrixXd r_rx;     // N x N
    MatC g_bar;               // N x M Rician draw
    MatC g;                   // N x M composite R^{1/2} Gbar R^{1/2}
    double gamma = 0.0;       // linear channel gain
    double corr_clip = 0.0;   // largest negative eigenvalue clipped to 0
};

void build_coefficient_matrices(const LinkScenario& sc, const GeometryReport& geo,
                                ChannelState& state);

/// R entries are sinc(2 r / lambda) with sinc(x) = sin(pi x)/(pi x).
void spatial_correlation(const LinkScenario& sc, const GeometryReport& geo,
                         Eigen::MatrixXd& r_tx, Eigen::MatrixXd& r_rx);

double path_loss_db(double d, const LinkScenario& sc);

/// Draws Gbar = sqrt(gamma)(sqrt(k/(1+k)) h_LoS + sqrt(1/(1+k)) h_NLoS) and
/// forms the correlated composite. Deterministic given the seed.
void draw_fading(const LinkScenario& sc, const GeometryReport& geo,
                 std::uint64_t seed, ChannelState& state);

/// build_coefficient_matrices + spatial_correlation + draw_fading.
ChannelState build_channel(const LinkScenario& sc, const GeometryReport& geo,
                           std::uint64_t seed);

MatC assemble_tx_cascade(const PhaseConfig& phases, const ChannelState& st);  // X, M x S
MatC assemble_rx_cascade(const PhaseConfig& phases, const ChannelState& st);  // Y, S x N
MatC assemble_h(const PhaseConfig& phases, const ChannelState& st);           // S x S

/// log2 det(I + H Z H^H / (N0 B)) with Z = (P/S) I. Spectral efficiency.
double achievable_rate(const MatC& h, const LinkScenario& sc);

/// Text export with dimensions, layer labels and the config hash.
std::string matrix_dump(const MatC& m, const std::string& label, std::uint64_t cfg_hash);

}  // namespace simlink
