#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "elastica/common.hpp"

namespace elastica {

// Underdetermined residual system F(x) = 0 with a caller-supplied right
// inverse of the differential. All callables must be pure.
struct NKProblem {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residual;
    // differential(x, u) = DF(x)[u]
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> differential;
    // right_inverse(x, w) with differential(x, right_inverse(x, w)) == w
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> right_inverse;
    // Optional norms (Euclidean when absent) and retraction (affine when absent).
    std::function<double(const Eigen::VectorXd&)> domain_norm;
    std::function<double(const Eigen::VectorXd&)> range_norm;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> retract;
    std::uint64_t probe_seed = 2026;
};

struct NKCertificate {
    bool admissible = false;
    double r = 0;
    double r_minus = 0;
};

struct NKReport {
    Index iterations = 0;
    std::vector<double> residual_norms;  // per iterate, starting at x0
    std::vector<double> step_norms;      // per accepted step
    // Empirical surrogates for the certificate constants: lambda is the first
    // full step norm, mu a sampled right-inverse bound, nu a sampled Lipschitz
    // constant of the differential along the first step.
    double lambda = 0;
    double mu = 0;
    double nu = 0;
    NKCertificate cert;
    double error_estimate = std::numeric_limits<double>::quiet_NaN();
};

struct NKFailure : NonConvergence {
    NKReport report;
    NKFailure(const std::string& message, NKReport rep)
        : NonConvergence(message), report(std::move(rep)) {}
};

// admissible iff 2*lambda*mu*nu < 1 strictly; r = 1/(mu*nu) and
// r_minus = 2*lambda/(1 + sqrt(1 - 2*lambda*mu*nu)) <= 2*lambda.
NKCertificate nk_certificate(double lambda, double mu, double nu);

// Damped Newton iteration using the right inverse; the right-inverse contract
// is probed with random range directions at x0 before iterating.
std::pair<Eigen::VectorXd, NKReport> nk_solve(const NKProblem& prob, Eigen::VectorXd x0,
                                              double tol, Index max_iter);

}  // namespace elastica
