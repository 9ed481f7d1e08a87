#include "elastica/newton.hpp"

#include <cmath>
#include <random>

namespace elastica {

NKCertificate nk_certificate(double lambda, double mu, double nu) {
    if (lambda < 0 || mu < 0 || nu < 0)
        throw InvalidArgument("certificate constants must be nonnegative");
    NKCertificate c;
    const double q = 2.0 * lambda * mu * nu;
    c.admissible = q < 1.0;
    c.r = (mu * nu > 0) ? 1.0 / (mu * nu) : std::numeric_limits<double>::infinity();
    c.r_minus = c.admissible ? 2.0 * lambda / (1.0 + std::sqrt(1.0 - q))
                             : std::numeric_limits<double>::quiet_NaN();
    return c;
}

namespace {

double euclid(const Eigen::VectorXd& v) { return v.norm(); }

// Error bound (r / 2^n) (r_minus / r)^(2^n), evaluated in log space.
double kantorovich_estimate(const NKCertificate& c, Index n) {
    if (!c.admissible || !std::isfinite(c.r)) return std::numeric_limits<double>::quiet_NaN();
    if (c.r_minus <= 0) return 0.0;
    const double p = std::pow(2.0, static_cast<double>(std::min<Index>(n, 60)));
    const double lg = std::log(c.r) - static_cast<double>(n) * std::log(2.0) +
                      p * (std::log(c.r_minus) - std::log(c.r));
    return std::exp(lg);
}

}  // namespace

std::pair<Eigen::VectorXd, NKReport> nk_solve(const NKProblem& prob, Eigen::VectorXd x0,
                                              double tol, Index max_iter) {
    if (!prob.residual || !prob.differential || !prob.right_inverse)
        throw InvalidArgument("problem must supply residual, differential, and right inverse");
    if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
    auto dnorm = prob.domain_norm ? prob.domain_norm : euclid;
    auto rnorm = prob.range_norm ? prob.range_norm : euclid;
    auto retract = prob.retract
                       ? prob.retract
                       : [](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
                             return Eigen::VectorXd(x + u);
                         };

    NKReport rep;
    Eigen::VectorXd x = std::move(x0);
    Eigen::VectorXd res = prob.residual(x);
    if (!res.allFinite()) throw InvalidArgument("residual at the starting point is not finite");
    double rn = rnorm(res);
    rep.residual_norms.push_back(rn);

    // Probe the right-inverse contract at x0 and record a sampled bound mu.
    std::mt19937_64 rng(prob.probe_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    if (res.size() > 0) {
        for (int probe = 0; probe < 5; ++probe) {
            Eigen::VectorXd w(res.size());
            for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = gauss(rng);
            const double wn = rnorm(w);
            if (!(wn > 0)) continue;
            w /= wn;
            Eigen::VectorXd u = prob.right_inverse(x, w);
            if (!u.allFinite())
                throw ContractViolation("right inverse produced a non-finite tangent");
            Eigen::VectorXd back = prob.differential(x, u);
            const double err = rnorm(back - w);
            if (!(err <= 1e-8))
                throw ContractViolation("differential of the right inverse deviates from the "
                                        "identity beyond 1e-8");
            rep.mu = std::max(rep.mu, dnorm(u));
        }
    }

    for (Index it = 0; it < max_iter; ++it) {
        if (rn <= tol) {
            rep.cert = nk_certificate(rep.lambda, rep.mu, rep.nu);
            rep.error_estimate = kantorovich_estimate(rep.cert, rep.iterations);
            return {x, rep};
        }
        Eigen::VectorXd step = -prob.right_inverse(x, res);
        if (!step.allFinite()) throw NKFailure("right inverse failed along the iteration", rep);
        const double sn = dnorm(step);
        rep.step_norms.push_back(sn);

        // Damping: halve when the full step inflates the residual tenfold.
        double t = 1.0;
        Eigen::VectorXd xt, rt;
        double rtn = std::numeric_limits<double>::infinity();
        for (int halvings = 0; halvings <= 8; ++halvings) {
            xt = retract(x, t * step);
            rt = prob.residual(xt);
            rtn = rt.allFinite() ? rnorm(rt) : std::numeric_limits<double>::infinity();
            if (rtn <= 10.0 * rn) break;
            t *= 0.5;
        }
        if (!std::isfinite(rtn)) throw NKFailure("residual became non-finite under damping", rep);

        if (it == 0) {
            rep.lambda = sn;
            // Lipschitz sample of the differential across the first step.
            const double gap = dnorm(xt - x);
            if (gap > 0) {
                for (int probe = 0; probe < 3; ++probe) {
                    Eigen::VectorXd v(x.size());
                    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
                    const double vn = dnorm(v);
                    if (!(vn > 0)) continue;
                    v /= vn;
                    Eigen::VectorXd d1 = prob.differential(x, v);
                    Eigen::VectorXd d2 = prob.differential(xt, v);
                    rep.nu = std::max(rep.nu, rnorm(d2 - d1) / gap);
                }
            }
        }

        x = std::move(xt);
        res = std::move(rt);
        rn = rtn;
        rep.residual_norms.push_back(rn);
        rep.iterations = it + 1;
    }
    if (rn <= tol) {
        rep.cert = nk_certificate(rep.lambda, rep.mu, rep.nu);
        rep.error_estimate = kantorovich_estimate(rep.cert, rep.iterations);
        return {x, rep};
    }
    throw NKFailure("newton iteration did not reach the residual target", rep);
}

}  // namespace elastica
