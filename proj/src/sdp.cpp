#include "simlink/sdp.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace simlink {

SdpMat SdpProblem::aggregate() const {
    SdpMat c = SdpMat::Zero(dim, dim);
    for (const auto& r : costs) c += r;
    return c;
}

namespace {

void require_hermitian(const SdpMat& c) {
    const double scale = std::max(1.0, c.norm());
    if ((c - c.adjoint()).norm() > 1e-10 * scale)
        throw std::invalid_argument("SDP cost matrix is not Hermitian");
}

double objective_of(const SdpProblem& p, const SdpMat& v) {
    double obj = 0.0;
    for (const auto& r : p.costs) obj += (r * v).trace().real();
    return obj;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts) {
    const int n = problem.dim;
    const SdpMat c = problem.aggregate();
    require_hermitian(c);

    if (n == 1) {
        SdpSolution s;
        s.v = SdpMat::Ones(1, 1);
        s.objective = objective_of(problem, s.v);
        s.converged = true;
        return s;
    }

    int r = opts.factor_rank;
    if (r <= 0) r = static_cast<int>(std::ceil(std::sqrt(2.0 * n))) + 1;

    // Deterministic start: fixed-seed random factor, rows normalized.
    std::mt19937_64 eng(0x5d5f0c3a2b19ULL ^ static_cast<std::uint64_t>(n));
    std::normal_distribution<double> g(0.0, 1.0);
    SdpMat f(n, r);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < r; ++k) f(i, k) = std::complex<double>(g(eng), g(eng));
        f.row(i).normalize();
    }

    // Row-by-row exact maximization of tr(C F F^H): with all other rows
    // fixed the optimum for row a is the normalized off-diagonal gradient.
    double obj = (f.adjoint() * c * f).trace().real();
    int sweep = 0;
    bool converged = false;
    for (; sweep < opts.max_iter; ++sweep) {
        for (int a = 0; a < n; ++a) {
            Eigen::RowVectorXcd grad = c.row(a) * f - c(a, a) * f.row(a);
            const double norm = grad.norm();
            if (norm > 1e-300) f.row(a) = grad / norm;
        }
        const double next = (f.adjoint() * c * f).trace().real();
        if (next - obj <= 1e-13 * std::max(1.0, std::abs(next))) {
            obj = next;
            converged = true;
            break;
        }
        obj = next;
    }

    SdpSolution s;
    s.v = f * f.adjoint();
    for (int a = 0; a < n; ++a) s.v(a, a) = 1.0;  // exact unit diagonal
    s.objective = objective_of(problem, s.v);
    s.iterations = sweep + 1;
    s.converged = converged;
    const auto cert = check_certificate(problem, s);
    s.certificate = cert.gap;
    return s;
}

SdpSolution solve_projected(const SdpProblem& problem, const SdpOptions& opts) {
    const int n = problem.dim;
    const SdpMat c = problem.aggregate();
    require_hermitian(c);

    Eigen::SelfAdjointEigenSolver<SdpMat> esc(c);
    const double lip = std::max(1e-12, esc.eigenvalues().cwiseAbs().maxCoeff());
    const double step = 2.0 / lip;

    auto psd_project = [](const SdpMat& x) {
        const SdpMat h = 0.5 * (x + x.adjoint());
        Eigen::SelfAdjointEigenSolver<SdpMat> es(h);
        const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        return SdpMat(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
    };

    // Dykstra's alternating projections onto {PSD} and {diag = 1}. A fixed
    // point of v -> P(v + step C) satisfies the variational inequality
    // <C, u - v> <= 0 for all feasible u, i.e. is a maximizer.
    auto project_elliptope = [&](const SdpMat& x) {
        SdpMat z = x;
        SdpMat p = SdpMat::Zero(n, n), q = SdpMat::Zero(n, n);
        for (int k = 0; k < 500; ++k) {
            const SdpMat y = psd_project(z + p);
            p = z + p - y;
            const SdpMat w = y + q;
            z = w;
            z.diagonal().setOnes();
            q = w - z;
            if ((y - z).norm() <= 1e-13 * std::max(1.0, z.norm())) break;
        }
        z.diagonal().setOnes();
        return z;
    };

    SdpMat v = SdpMat::Identity(n, n);
    double obj = objective_of(problem, v);
    int it = 0;
    bool converged = false;
    for (; it < opts.max_iter; ++it) {
        const SdpMat next = project_elliptope(v + step * c);
        const double next_obj = objective_of(problem, next);
        if (it > 3 && next_obj - obj <= 1e-12 * std::max(1.0, std::abs(next_obj)) &&
            (next - v).norm() <= 1e-8 * std::max(1.0, v.norm())) {
            v = next;
            obj = next_obj;
            converged = true;
            break;
        }
        v = next;
        obj = next_obj;
    }

    SdpSolution s;
    s.v = v;
    s.objective = obj;
    s.iterations = it + 1;
    s.converged = converged;
    const auto cert = check_certificate(problem, s);
    s.certificate = cert.gap;
    return s;
}

CertificateReport check_certificate(const SdpProblem& problem, const SdpSolution& sol) {
    CertificateReport rep;
    const SdpMat c = problem.aggregate();
    const int n = problem.dim;

    rep.objective_recomputed = objective_of(problem, sol.v);
    rep.diag_residual = (sol.v.diagonal().array() - 1.0).abs().maxCoeff();

    Eigen::SelfAdjointEigenSolver<SdpMat> esv(sol.v);
    rep.psd_residual = std::max(0.0, -esv.eigenvalues().minCoeff());

    // Complementary-slackness dual guess y_a = Re[(C V)_aa]; a uniform shift
    // by the most negative eigenvalue of Diag(y) - C makes it dual feasible,
    // so sum(y) + n*shift - objective is a genuine gap bound.
    Eigen::VectorXd y = (c * sol.v).diagonal().real();
    SdpMat s_dual = SdpMat(y.cast<std::complex<double>>().asDiagonal()) - c;
    Eigen::SelfAdjointEigenSolver<SdpMat> ess(s_dual);
    const double shift = std::max(0.0, -ess.eigenvalues().minCoeff());
    rep.dual_residual = shift;
    rep.gap = y.sum() + n * shift - rep.objective_recomputed;
    return rep;
}

Eigen::MatrixXd real_embedding(const SdpMat& c) {
    const int n = static_cast<int>(c.rows());
    Eigen::MatrixXd e(2 * n, 2 * n);
    e.topLeftCorner(n, n) = c.real();
    e.topRightCorner(n, n) = -c.imag();
    e.bottomLeftCorner(n, n) = c.imag();
    e.bottomRightCorner(n, n) = c.real();
    return e;
}

std::string sdp_dump(const SdpProblem& p, const SdpSolution& s) {
    std::ostringstream out;
    out.precision(17);
    out << "dim " << p.dim << "\ncosts " << p.costs.size() << "\nobjective "
        << s.objective << "\ncertificate " << s.certificate << "\niterations "
        << s.iterations << "\nconverged " << s.converged << "\nV\n";
    for (Eigen::Index i = 0; i < s.v.rows(); ++i) {
        for (Eigen::Index j = 0; j < s.v.cols(); ++j)
            out << s.v(i, j).real() << ' ' << s.v(i, j).imag() << '\t';
        out << '\n';
    }
    return out.str();
}

}  // namespace simlink
