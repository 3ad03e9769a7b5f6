#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace simlink {

using SdpMat = Eigen::MatrixXcd;

/// maximize sum_s tr(R_s V)  s.t.  V_aa = 1, V >= 0 (PSD), V Hermitian.
/// Each R_s is Hermitian PSD; the problem only ever has the unit-diagonal
/// structure the phase lifting produces.
struct SdpProblem {
    std::vector<SdpMat> costs;  // R_s, each dim x dim
    int dim = 0;                // a + 1

    SdpMat aggregate() const;  // C = sum_s R_s
};

struct SdpSolution {
    SdpMat v;                  // Hermitian PSD, unit diagonal
    double objective = 0.0;    // sum_s tr(R_s V)
    double certificate = 0.0;  // dual gap bound (absolute)
    int iterations = 0;
    bool converged = false;
};

struct SdpOptions {
    double feasibility_tol = 1e-6;
    double gap_tol = 1e-4;  // relative
    int max_iter = 20000;
    int factor_rank = 0;  // 0 = ceil(sqrt(2 dim)) + 1
};

/// Low-rank factorized ascent (V = F F^H, rows of F on the unit sphere,
/// row-by-row exact maximization). Monotone in the objective.
SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts = {});

/// Independent full-matrix path: projected gradient in V with alternating
/// projection onto {Hermitian PSD, unit diagonal}. Cross-checks solve().
SdpSolution solve_projected(const SdpProblem& problem, const SdpOptions& opts = {});

struct CertificateReport {
    double diag_residual = 0.0;     // max |V_aa - 1|
    double psd_residual = 0.0;      // max(0, -lambda_min(V))
    double dual_residual = 0.0;     // max(0, -lambda_min(Diag(y) - C))
    double gap = 0.0;               // sum y - objective, after dual repair
    double objective_recomputed = 0.0;
};

CertificateReport check_certificate(const SdpProblem& problem, const SdpSolution& sol);

/// Real embedding [[Re C, -Im C], [Im C, Re C]] for differential testing:
/// tr(C V) = 0.5 tr(embed(C) embed(V)).
Eigen::MatrixXd real_embedding(const SdpMat& c);

/// Problem/solution dump (dimension, matrices, certificate) for debugging.
std::string sdp_dump(const SdpProblem& p, const SdpSolution& s);

}  // namespace simlink
