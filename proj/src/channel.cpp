#include "simlink/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "simlink/rng.hpp"

namespace simlink {

namespace {
constexpr double kPi = std::numbers::pi;
const Complex kJ{0.0, 1.0};
}  // namespace

double wrap_phase(double theta) {
    double t = std::fmod(theta, 2.0 * kPi);
    if (t <= 0.0) t += 2.0 * kPi;
    return t;
}

VecC PhaseConfig::tx_coeffs(int layer) const {
    VecC v(tx.cols());
    for (Eigen::Index m = 0; m < tx.cols(); ++m) v(m) = std::exp(kJ * tx(layer - 1, m));
    return v;
}

VecC PhaseConfig::rx_coeffs(int layer) const {
    VecC v(rx.cols());
    for (Eigen::Index n = 0; n < rx.cols(); ++n) v(n) = std::exp(kJ * rx(layer - 1, n));
    return v;
}

PhaseConfig uniform_random_phases(const LinkScenario& sc, std::uint64_t seed) {
    PhaseConfig p;
    p.tx.resize(sc.layers_tx, sc.atoms_tx);
    p.rx.resize(sc.layers_rx, sc.atoms_rx);
    auto eng = make_engine(seed, 0x70686173 /* "phas" */);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    for (int l = 0; l < sc.layers_tx; ++l)
        for (int m = 0; m < sc.atoms_tx; ++m) p.tx(l, m) = wrap_phase(u(eng));
    for (int k = 0; k < sc.layers_rx; ++k)
        for (int n = 0; n < sc.atoms_rx; ++n) p.rx(k, n) = wrap_phase(u(eng));
    return p;
}

Complex diffraction_coefficient(double d, double cos_chi, double area, double lambda) {
    if (!(d > 0.0)) throw std::domain_error("degenerate geometry: d <= 0");
    const Complex radial = Complex(1.0 / (2.0 * kPi * d), -1.0 / lambda);
    return (area * cos_chi / d) * radial * std::exp(kJ * (2.0 * kPi * d / lambda));
}

void build_coefficient_matrices(const LinkScenario& sc, const GeometryReport& geo,
                                ChannelState& st) {
    const int S = sc.num_streams, M = sc.atoms_tx, N = sc.atoms_rx;
    const double dt = geo.gap_tx, dr = geo.gap_rx;

    st.w_in.resize(M, S);
    for (int m = 0; m < M; ++m)
        for (int s = 0; s < S; ++s) {
            const double d = geo.source_tx(s, m);
            st.w_in(m, s) = diffraction_coefficient(d, dt / d, sc.atom_area_tx, sc.wavelength);
        }

    st.w_hop.assign(static_cast<std::size_t>(std::max(0, sc.layers_tx - 1)), MatC());
    for (auto& w : st.w_hop) {
        w.resize(M, M);
        for (int m = 0; m < M; ++m)
            for (int m2 = 0; m2 < M; ++m2) {
                const double d = geo.interlayer_tx(m, m2);
                w(m, m2) = diffraction_coefficient(d, dt / d, sc.atom_area_tx, sc.wavelength);
            }
    }

    st.u_hop.assign(static_cast<std::size_t>(std::max(0, sc.layers_rx - 1)), MatC());
    for (auto& u : st.u_hop) {
        u.resize(N, N);
        for (int n = 0; n < N; ++n)
            for (int n2 = 0; n2 < N; ++n2) {
                const double d = geo.interlayer_rx(n, n2);
                u(n, n2) = diffraction_coefficient(d, dr / d, sc.atom_area_rx, sc.wavelength);
            }
    }

    st.u_out.resize(S, N);
    for (int s = 0; s < S; ++s)
        for (int n = 0; n < N; ++n) {
            const double d = geo.source_rx(n, s);
            st.u_out(s, n) = diffraction_coefficient(d, dr / d, sc.atom_area_rx, sc.wavelength);
        }
}

namespace {

double normalized_sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

}  // namespace

void spatial_correlation(const LinkScenario& sc, const GeometryReport& geo,
                         Eigen::MatrixXd& r_tx, Eigen::MatrixXd& r_rx) {
    r_tx = geo.inplane_tx.unaryExpr(
        [&](double r) { return normalized_sinc(2.0 * r / sc.wavelength); });
    r_rx = geo.inplane_rx.unaryExpr(
        [&](double r) { return normalized_sinc(2.0 * r / sc.wavelength); });
}

double path_loss_db(double d, const LinkScenario& sc) {
    if (!(d > 0.0)) throw std::domain_error("path loss needs d > 0");
    const double pl0 = sc.ref_pathloss_db
                           ? *sc.ref_pathloss_db
                           : 20.0 * std::log10(4.0 * kPi * sc.ref_distance / sc.wavelength);
    return pl0 + 10.0 * sc.pathloss_exponent * std::log10(d / sc.ref_distance);
}

namespace {

// PSD square root with negative eigenvalues (sinc numerical noise) clipped.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& r, double& clip) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) < 0.0) {
            clip = std::max(clip, -ev(i));
            ev(i) = 0.0;
        }
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

MatC los_matrix(const LinkScenario& sc, const GeometryReport& geo) {
    const int M = sc.atoms_tx, N = sc.atoms_rx;
    if (sc.los_mode == "ones") return MatC::Ones(N, M);
    // Steering mode: unit-modulus phases from exact distances between the
    // facing output/input layers, planar arrays separated by link_distance.
    MatC h(N, M);
    const int mc = sc.grid_cols_tx(), nc = sc.grid_cols_rx();
    for (int n = 1; n <= N; ++n)
        for (int m = 1; m <= M; ++m) {
            const auto ia = atom_index(m, mc);
            const auto ib = atom_index(n, nc);
            const double zx = (ia.row - (mc + 1) / 2.0) * sc.atom_pitch_tx -
                              (ib.row - (nc + 1) / 2.0) * sc.atom_pitch_rx;
            const double xx = (ia.col - (mc + 1) / 2.0) * sc.atom_pitch_tx -
                              (ib.col - (nc + 1) / 2.0) * sc.atom_pitch_rx;
            const double d =
                std::sqrt(zx * zx + xx * xx + sc.link_distance * sc.link_distance);
            h(n - 1, m - 1) = std::exp(-kJ * (2.0 * kPi * d / sc.wavelength));
        }
    return h;
}

}  // namespace

void draw_fading(const LinkScenario& sc, const GeometryReport& geo, std::uint64_t seed,
                 ChannelState& st) {
    const int M = sc.atoms_tx, N = sc.atoms_rx;
    st.gamma = std::pow(10.0, -path_loss_db(sc.link_distance, sc) / 10.0);

    const double los_w = std::sqrt(sc.rician / (1.0 + sc.rician));
    const double nlos_w = std::sqrt(1.0 / (1.0 + sc.rician));

    MatC nlos(N, M);
    // Per-entry engines keyed by (seed, flat index) so draws are identical
    // regardless of the caller's threading.
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m) {
            auto eng = make_engine(seed, 0x666164 /* "fad" */, static_cast<std::uint64_t>(n) * M + m);
            nlos(n, m) = complex_gaussian(eng);
        }

    st.g_bar = std::sqrt(st.gamma) * (los_w * los_matrix(sc, geo) + nlos_w * nlos);

    st.corr_clip = 0.0;
    const Eigen::MatrixXd rt_half = psd_sqrt(st.r_tx, st.corr_clip);
    const Eigen::MatrixXd rr_half = psd_sqrt(st.r_rx, st.corr_clip);
    st.g = rr_half.cast<Complex>() * st.g_bar * rt_half.cast<Complex>();
}

ChannelState build_channel(const LinkScenario& sc, const GeometryReport& geo,
                           std::uint64_t seed) {
    ChannelState st;
    build_coefficient_matrices(sc, geo, st);
    spatial_correlation(sc, geo, st.r_tx, st.r_rx);
    draw_fading(sc, geo, seed, st);
    return st;
}

MatC assemble_tx_cascade(const PhaseConfig& phases, const ChannelState& st) {
    MatC x = phases.tx_coeffs(1).asDiagonal() * st.w_in;
    for (std::size_t l = 0; l < st.w_hop.size(); ++l)
        x = phases.tx_coeffs(static_cast<int>(l) + 2).asDiagonal() * (st.w_hop[l] * x);
    return x;
}

MatC assemble_rx_cascade(const PhaseConfig& phases, const ChannelState& st) {
    // Physical layer order: the signal meets RX layer 1 first; the S x N
    // output map is applied last.
    const int K = static_cast<int>(st.u_hop.size()) + 1;
    MatC y = MatC(phases.rx_coeffs(1).asDiagonal());
    for (int k = 2; k <= K; ++k)
        y = phases.rx_coeffs(k).asDiagonal() * (st.u_hop[k - 2] * y);
    return st.u_out * y;
}

MatC assemble_h(const PhaseConfig& phases, const ChannelState& st) {
    return assemble_rx_cascade(phases, st) * st.g * assemble_tx_cascade(phases, st);
}

double achievable_rate(const MatC& h, const LinkScenario& sc) {
    if (!h.allFinite()) throw std::domain_error("non-finite channel matrix");
    const int S = static_cast<int>(h.rows());
    const double c = (sc.tx_power / sc.num_streams) / (sc.noise_psd * sc.bandwidth);
    const MatC a = MatC::Identity(S, S) + c * h * h.adjoint();
    // A is Hermitian positive definite; log det via Cholesky.
    Eigen::LLT<MatC> llt(a);
    double logdet = 0.0;
    for (int i = 0; i < S; ++i) logdet += 2.0 * std::log(std::abs(llt.matrixL()(i, i)));
    return logdet / std::log(2.0);
}

std::string matrix_dump(const MatC& m, const std::string& label, std::uint64_t cfg_hash) {
    std::ostringstream out;
    out.precision(17);
    out << "# label=" << label << " rows=" << m.rows() << " cols=" << m.cols()
        << " config_hash=" << std::hex << cfg_hash << std::dec << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << '\t';
            out << m(i, j).real() << (m(i, j).imag() < 0 ? "" : "+") << m(i, j).imag() << 'j';
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace simlink
