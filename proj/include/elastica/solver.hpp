#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "elastica/polygon.hpp"
#include "elastica/transfer.hpp"

namespace elastica {

// One line of the optimization trace, streamed to the caller's hook.
struct SolveTraceRow {
    int iteration = 0;
    double energy = 0;
    double projected_gradient = 0;
    double feasibility = 0;
    double step = 0;
};

struct SolveOptions {
    int max_iterations = 2000;
    double kkt_tol = 1e-8;
    double armijo_c = 1e-4;
    double backtrack_factor = 0.5;
    int max_backtracks = 40;
    double initial_step = 1.0;
    double barrier = 1e-3;  // reject steps with a turning angle >= pi - barrier
    double feasibility_tol = 1e-10;
    int multistart = 4;
    std::uint64_t seed = 2026;
    double prior_K2 = 100.0;  // regularity filter for delta-minimizer sets
    std::function<void(const SolveTraceRow&)> trace;
};

// Multipliers of the clamped problem plus the stationarity diagnostics.
// mu01 and mu11 lie in the orthogonal complements of the end tangents.
struct KKTReport {
    std::vector<double> lambda;  // per-edge strain multipliers
    Vec mu00, mu10;              // endpoint position multipliers
    Vec mu01, mu11;              // endpoint tangent multipliers
    double projected_gradient = 0;
    double energy = 0;
    double feasibility = 0;
    double kkt_residual = 0;
    int iterations = 0;
    bool converged = false;
};

struct MinimizerSet {
    std::vector<Polygon> members;
    std::vector<double> energies;
    double delta = 0;
    double best_energy = 0;
    int failed_starts = 0;
};

struct RegularityReport {
    double w2inf = 0;
    double tv3 = 0;
    double w3inf = 0;
    double almost_uniform_defect = 0;
};

// Deterministic feasible starting polygon: endpoint-clamped cubic with the
// tangent magnitude tuned to the prescribed length, arclength-sampled, then
// restored onto the constraint set.
Polygon initial_guess(const BoundaryData& bd, const Partition& T);

// Feasible-set descent: projected gradient directions through the constraint
// right inverse, backtracking line search on the bending energy, restoration
// as the retraction after every trial step.
std::pair<Polygon, KKTReport> minimize(const Polygon& P0, const BoundaryData& bd,
                                       const SolveOptions& opts = {});

KKTReport lagrange_multipliers(const Polygon& P, const BoundaryData& bd);

MinimizerSet delta_minimizer_set(const BoundaryData& bd, const Partition& T, double delta,
                                 const SolveOptions& opts = {});

RegularityReport regularity_report(const Polygon& P);

}  // namespace elastica
