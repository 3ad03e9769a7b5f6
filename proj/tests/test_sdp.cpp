#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "simlink/rng.hpp"
#include "simlink/sdp.hpp"

using namespace simlink;

namespace {

SdpProblem random_problem(int dim, int terms, std::uint64_t seed) {
    SdpProblem p;
    p.dim = dim;
    auto eng = make_engine(seed, 0);
    for (int s = 0; s < terms; ++s) {
        SdpMat a(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) a(i, j) = complex_gaussian(eng);
        p.costs.push_back(a * a.adjoint());  // Hermitian PSD
    }
    return p;
}

// Exhaustive rank-one search over a phase grid; valid lower bound on the SDP
// optimum (rank-one V = v v^H is feasible).
double grid_rank_one(const SdpMat& c, int points) {
    const int dim = static_cast<int>(c.rows());
    const double step = 2.0 * std::numbers::pi / points;
    double best = -1e300;
    std::vector<int> idx(dim - 1, 0);
    const long total = static_cast<long>(std::pow(points, dim - 1));
    Eigen::VectorXcd v(dim);
    v(dim - 1) = 1.0;  // global phase fixed
    for (long k = 0; k < total; ++k) {
        long rem = k;
        for (int i = 0; i < dim - 1; ++i) {
            v(i) = std::exp(std::complex<double>(0.0, step * (rem % points)));
            rem /= points;
        }
        best = std::max(best, (v.adjoint() * c * v).real()(0, 0));
    }
    return best;
}

}  // namespace

TEST_CASE("dimension one is trivially V = 1") {
    SdpProblem p;
    p.dim = 1;
    p.costs.push_back(SdpMat::Constant(1, 1, 3.0));
    const SdpSolution s = solve(p);
    CHECK(s.v(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.objective == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(s.converged);
}

TEST_CASE("2x2 all-ones cost: optimum is aligned phases, objective 4") {
    SdpProblem p;
    p.dim = 2;
    p.costs.push_back(SdpMat::Ones(2, 2));
    const SdpSolution s = solve(p);
    // V = [[1, e^{j phi}],[e^{-j phi},1]] gives 2 + 2 cos(phi), max 4
    CHECK(s.objective == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(std::abs(s.v(0, 1)) == doctest::Approx(1.0).epsilon(1e-8));
    const CertificateReport cert = check_certificate(p, s);
    CHECK(cert.diag_residual <= 1e-9);
    CHECK(cert.psd_residual <= 1e-9);
}

TEST_CASE("SDP relaxation dominates the best rank-one grid point") {
    const SdpProblem p = random_problem(4, 2, 314);
    const SdpSolution s = solve(p);
    const double grid = grid_rank_one(p.aggregate(), 24);
    CHECK(s.objective >= grid - 1e-6 * std::abs(grid));
}

TEST_CASE("certificate residuals are tiny at the solution and catch tampering") {
    const SdpProblem p = random_problem(6, 3, 2718);
    const SdpSolution s = solve(p);
    CertificateReport cert = check_certificate(p, s);
    CHECK(cert.diag_residual <= 1e-8);
    CHECK(cert.psd_residual <= 1e-8);
    CHECK(cert.dual_residual <= 1e-8);
    CHECK(cert.objective_recomputed == doctest::Approx(s.objective).epsilon(1e-9));
    CHECK(cert.gap >= -1e-8);
    CHECK(cert.gap <= 1e-3 * std::abs(s.objective) + 1e-8);

    SdpSolution bad = s;
    bad.v(2, 2) = 1.1;
    cert = check_certificate(p, bad);
    CHECK(cert.diag_residual == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("objective scales linearly with the cost") {
    const SdpProblem p = random_problem(5, 1, 7);
    SdpProblem scaled = p;
    scaled.costs[0] *= 4.0;
    const double a = solve(p).objective;
    const double b = solve(scaled).objective;
    CHECK(b == doctest::Approx(4.0 * a).epsilon(1e-6));
}

TEST_CASE("low-rank and projected-gradient paths agree") {
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
        const SdpProblem p = random_problem(6, 2, seed);
        const SdpSolution a = solve(p);
        const SdpSolution b = solve_projected(p);
        const double scale = std::max(std::abs(a.objective), 1.0);
        CHECK(std::abs(a.objective - b.objective) <= 1e-3 * scale);
        const CertificateReport ca = check_certificate(p, a);
        const CertificateReport cb = check_certificate(p, b);
        CHECK(cb.diag_residual <= 1e-6);
        CHECK(cb.psd_residual <= 1e-6);
        CHECK(ca.gap <= 1e-3 * scale + 1e-8);
    }
}

TEST_CASE("real embedding preserves traces") {
    const SdpProblem p = random_problem(4, 1, 42);
    const SdpSolution s = solve(p);
    const SdpMat c = p.aggregate();
    const Eigen::MatrixXd ec = real_embedding(c);
    const Eigen::MatrixXd ev = real_embedding(s.v);
    const double lhs = (c * s.v).trace().real();
    const double rhs = 0.5 * (ec * ev).trace();
    CHECK(rhs == doctest::Approx(lhs).epsilon(1e-10));
    // embedding of a Hermitian matrix is symmetric
    CHECK((ec - ec.transpose()).norm() <= 1e-12 * ec.norm());
}

TEST_CASE("non-Hermitian cost is rejected") {
    SdpProblem p;
    p.dim = 2;
    SdpMat bad(2, 2);
    bad << 1.0, std::complex<double>(1.0, 1.0), std::complex<double>(2.0, 0.0), 1.0;
    p.costs.push_back(bad);
    CHECK_THROWS(solve(p));
}

TEST_CASE("solver is deterministic") {
    const SdpProblem p = random_problem(5, 2, 777);
    const SdpSolution a = solve(p);
    const SdpSolution b = solve(p);
    CHECK((a.v - b.v).norm() == 0.0);
    CHECK(a.objective == b.objective);
}

TEST_CASE("dump mentions dimension and objective") {
    const SdpProblem p = random_problem(3, 1, 5);
    const SdpSolution s = solve(p);
    const std::string d = sdp_dump(p, s);
    CHECK(d.find("dim 3") != std::string::npos);
    CHECK(d.find("objective") != std::string::npos);
}
