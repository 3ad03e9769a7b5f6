#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "simlink/channel.hpp"
#include "simlink/rng.hpp"

using namespace simlink;

namespace {
constexpr double kPi = std::numbers::pi;

LinkScenario small(int streams, int layers, int atoms) {
    LinkScenario sc = default_scenario();
    sc.num_streams = streams;
    sc.layers_tx = sc.layers_rx = layers;
    sc.atoms_tx = sc.atoms_rx = atoms;
    return sc;
}

PhaseConfig identity_phases(const LinkScenario& sc) {
    PhaseConfig p;
    p.tx = Eigen::MatrixXd::Constant(sc.layers_tx, sc.atoms_tx, 2.0 * kPi);
    p.rx = Eigen::MatrixXd::Constant(sc.layers_rx, sc.atoms_rx, 2.0 * kPi);
    return p;
}

}  // namespace

TEST_CASE("diffraction coefficient modulus identity") {
    const double lambda = 0.0214;
    const double d = lambda / (2.0 * kPi);
    const double area = lambda * lambda;
    const Complex w = diffraction_coefficient(d, 1.0, area, lambda);
    const double expect =
        (area / d) * std::sqrt(1.0 / std::pow(2.0 * kPi * d, 2) + 1.0 / (lambda * lambda));
    CHECK(std::abs(w) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("diffraction coefficient against a long-double re-evaluation") {
    const double d = 0.0333, area = 0.01, lambda = 0.0214;
    const Complex w = diffraction_coefficient(d, 1.0, area, lambda);
    // independent arithmetic path at extended precision
    const long double ld = d, larea = area, llam = lambda;
    const long double mag = larea / ld;
    const long double re_r = 1.0L / (2.0L * std::numbers::pi_v<long double> * ld);
    const long double im_r = -1.0L / llam;
    const long double phase = 2.0L * std::numbers::pi_v<long double> * ld / llam;
    const long double cp = std::cos(phase), sp = std::sin(phase);
    const long double re = mag * (re_r * cp - im_r * sp);
    const long double im = mag * (re_r * sp + im_r * cp);
    CHECK(w.real() == doctest::Approx(static_cast<double>(re)).epsilon(1e-14));
    CHECK(w.imag() == doctest::Approx(static_cast<double>(im)).epsilon(1e-14));
}

TEST_CASE("diffraction magnitude decreases with distance") {
    double prev = 1e300;
    for (double d = 0.01; d < 0.2; d *= 2.0) {
        const double mag = std::abs(diffraction_coefficient(d, 0.7, 0.01, 0.0214));
        CHECK(mag < prev);
        prev = mag;
    }
    CHECK_THROWS_AS(diffraction_coefficient(0.0, 1.0, 0.01, 0.0214), std::domain_error);
}

TEST_CASE("spatial correlation hits the sinc landmarks") {
    LinkScenario sc = small(1, 2, 4);
    sc.wavelength = 0.0214;
    sc.atom_pitch_tx = sc.wavelength / 2.0;  // adjacent atoms at the sinc zero
    const GeometryReport geo = build_geometry(sc);
    Eigen::MatrixXd rt, rr;
    spatial_correlation(sc, geo, rt, rr);
    CHECK(rt(0, 0) == 1.0);
    CHECK(rt(0, 1) == doctest::Approx(0.0).epsilon(1e-12));  // r = lambda/2
    CHECK((rt - rt.transpose()).norm() == 0.0);

    sc.atom_pitch_tx = sc.wavelength / 4.0;  // sinc(0.5) = 2/pi
    const GeometryReport geo2 = build_geometry(sc);
    spatial_correlation(sc, geo2, rt, rr);
    CHECK(rt(0, 1) == doctest::Approx(2.0 / kPi).epsilon(1e-12));
}

TEST_CASE("path loss: reference point, decade law, table override") {
    LinkScenario sc = default_scenario();
    sc.ref_pathloss_db.reset();
    const double pl0 = 20.0 * std::log10(4.0 * kPi * sc.ref_distance / sc.wavelength);
    CHECK(path_loss_db(sc.ref_distance, sc) == doctest::Approx(pl0).epsilon(1e-12));

    sc.pathloss_exponent = 2.0;
    CHECK(path_loss_db(10.0 * sc.ref_distance, sc) ==
          doctest::Approx(pl0 + 20.0).epsilon(1e-12));

    sc.ref_pathloss_db = 80.0;
    CHECK(path_loss_db(sc.ref_distance, sc) == doctest::Approx(80.0).epsilon(1e-12));
    CHECK_THROWS_AS(path_loss_db(0.0, sc), std::domain_error);
}

TEST_CASE("coefficient matrices match an entry-by-entry reimplementation") {
    const LinkScenario sc = small(2, 2, 4);
    const GeometryReport geo = build_geometry(sc);
    ChannelState st;
    build_coefficient_matrices(sc, geo, st);

    for (int m = 0; m < 4; ++m)
        for (int s = 0; s < 2; ++s) {
            const double d = geo.source_tx(s, m);
            const Complex expect = (sc.atom_area_tx * (geo.gap_tx / d) / d) *
                                   Complex(1.0 / (2.0 * kPi * d), -1.0 / sc.wavelength) *
                                   std::exp(Complex(0.0, 2.0 * kPi * d / sc.wavelength));
            CHECK(std::abs(st.w_in(m, s) - expect) <= 1e-15 * std::abs(expect));
        }
    REQUIRE(st.w_hop.size() == 1);
    for (int m = 0; m < 4; ++m) {
        // aligned pair dominates its row: minimal d and maximal cos(chi)
        double diag = std::abs(st.w_hop[0](m, m));
        for (int m2 = 0; m2 < 4; ++m2)
            CHECK(diag >= std::abs(st.w_hop[0](m, m2)) - 1e-18);
    }
}

TEST_CASE("fading: huge kappa collapses to the deterministic LoS part") {
    LinkScenario sc = small(1, 1, 4);
    sc.rician = 1e12;
    const GeometryReport geo = build_geometry(sc);
    const ChannelState st = build_channel(sc, geo, 7);
    // with all-ones LoS the deterministic part has |entry| = sqrt(gamma)
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(st.g_bar(i, j) - std::sqrt(st.gamma)) <=
                  1e-5 * std::sqrt(st.gamma));
}

TEST_CASE("fading: pure NLoS mean is zero and second moment is gamma") {
    LinkScenario sc = small(1, 1, 4);
    sc.rician = 0.0;
    const GeometryReport geo = build_geometry(sc);
    ChannelState st;
    build_coefficient_matrices(sc, geo, st);
    spatial_correlation(sc, geo, st.r_tx, st.r_rx);

    const int draws = 100000;
    Complex mean = 0.0;
    double second = 0.0;
    long count = 0;
    for (int d = 0; d < draws / 100; ++d) {
        draw_fading(sc, geo, 1000 + d, st);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                mean += st.g_bar(i, j);
                second += std::norm(st.g_bar(i, j));
                ++count;
            }
    }
    mean /= static_cast<double>(count);
    second /= static_cast<double>(count);
    const double gamma = st.gamma;
    const double sigma = std::sqrt(gamma / count);  // per complex dimension scale
    CHECK(std::abs(mean) <= 4.0 * sigma);
    CHECK(second == doctest::Approx(gamma).epsilon(0.02));
}

TEST_CASE("fading draws are bit-identical for equal seeds") {
    const LinkScenario sc = small(2, 2, 9);
    const GeometryReport geo = build_geometry(sc);
    const ChannelState a = build_channel(sc, geo, 42);
    const ChannelState b = build_channel(sc, geo, 42);
    CHECK((a.g - b.g).norm() == 0.0);
    const ChannelState c = build_channel(sc, geo, 43);
    CHECK((a.g - c.g).norm() > 0.0);
}

TEST_CASE("identity phases collapse the cascade to plain products") {
    const LinkScenario sc = small(2, 1, 4);
    const GeometryReport geo = build_geometry(sc);
    const ChannelState st = build_channel(sc, geo, 3);
    const PhaseConfig p = identity_phases(sc);
    const MatC h = assemble_h(p, st);
    const MatC expect = st.u_out * st.g * st.w_in;
    CHECK((h - expect).norm() <= 1e-12 * expect.norm());
}

TEST_CASE("common TX phase offset leaves |det H| unchanged") {
    const LinkScenario sc = small(2, 2, 4);
    const GeometryReport geo = build_geometry(sc);
    const ChannelState st = build_channel(sc, geo, 5);
    PhaseConfig p = uniform_random_phases(sc, 11);
    const double det0 = std::abs(assemble_h(p, st).determinant());
    for (int l = 0; l < sc.layers_tx; ++l)
        for (int m = 0; m < sc.atoms_tx; ++m) p.tx(l, m) = wrap_phase(p.tx(l, m) + 0.573);
    const double det1 = std::abs(assemble_h(p, st).determinant());
    CHECK(det1 == doctest::Approx(det0).epsilon(1e-9));
}

TEST_CASE("scalar link: H equals the hand product") {
    const LinkScenario sc = small(1, 1, 1);
    const GeometryReport geo = build_geometry(sc);
    const ChannelState st = build_channel(sc, geo, 9);
    PhaseConfig p = uniform_random_phases(sc, 13);
    const Complex expect = st.u_out(0, 0) * std::exp(Complex(0, p.rx(0, 0))) * st.g(0, 0) *
                           std::exp(Complex(0, p.tx(0, 0))) * st.w_in(0, 0);
    CHECK(std::abs(assemble_h(p, st)(0, 0) - expect) <= 1e-12 * std::abs(expect));
}

TEST_CASE("achievable rate landmarks") {
    LinkScenario sc = default_scenario();
    sc.num_streams = 1;
    MatC h = MatC::Zero(1, 1);
    CHECK(achievable_rate(h, sc) == doctest::Approx(0.0));

    // |h|^2 P / (N0 B) = 1  ->  1 bit/s/Hz
    h(0, 0) = std::sqrt(sc.noise_psd * sc.bandwidth / sc.tx_power);
    CHECK(achievable_rate(h, sc) == doctest::Approx(1.0).epsilon(1e-9));

    sc.num_streams = 2;
    sc.tx_power = 2.0 * sc.noise_psd * sc.bandwidth;  // P/(N0 B) = 2, c = 1
    CHECK(achievable_rate(MatC::Identity(2, 2), sc) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("rate is unitary-invariant and monotone in power") {
    LinkScenario sc = default_scenario();
    sc.num_streams = 3;
    auto eng = make_engine(17, 0);
    MatC h(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) h(i, j) = complex_gaussian(eng) * 1e-6;

    const double base = achievable_rate(h, sc);
    MatC m(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = complex_gaussian(eng);
    const MatC q = Eigen::HouseholderQR<MatC>(m).householderQ();
    CHECK(achievable_rate(q * h, sc) == doctest::Approx(base).epsilon(1e-9));

    double prev = 0.0;
    for (double p = 1e-3; p <= 1.0; p *= 10.0) {
        sc.tx_power = p;
        const double r = achievable_rate(h, sc);
        CHECK(r >= prev);
        prev = r;
    }
}

TEST_CASE("matrix dump carries dimensions and hash") {
    const LinkScenario sc = default_scenario();
    MatC h = MatC::Ones(2, 3);
    const std::string dump = matrix_dump(h, "H", config_hash(sc));
    CHECK(dump.find("rows=2") != std::string::npos);
    CHECK(dump.find("cols=3") != std::string::npos);
    CHECK(dump.find("label=H") != std::string::npos);
}
