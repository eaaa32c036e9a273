#pragma once

// Generic rate-distortion engine: fixed-slope alternating minimization,
// slope-sweep curve tracing, target-distortion bisection, and equal-slope
// aggregation of weighted branch problems.

#include <vector>

#include "srdf/prob.hpp"
#include "srdf/rd_instance.hpp"

namespace srdf {

struct RdPoint {
    double lambda = 0.0;   // slope in bits per unit distortion; +inf for the floor point
    double delta = 0.0;    // achieved expected distortion
    double rate = 0.0;     // achieved mutual information, bits
    std::vector<Kernel> kernels;  // witness; one entry per branch (single entry for plain sweeps)
    int iterations = 0;
    bool converged = true;
};

struct RdCurve {
    std::vector<RdPoint> points;  // sorted by delta ascending, deduplicated
    double delta_min = 0.0;
    double delta_max = 0.0;
};

// Minimize I + lambda * E[rho] by alternating reproduction-marginal and
// kernel updates; stops when the objective decreases by less than tol.
// lambda = 0 returns the zero-rate point at the distortion ceiling exactly.
// Forbidden pairs carry zero kernel mass at every step; entries below 1e-15
// are flushed to exact zeros on exit.
RdPoint ba_fixed_slope(const RdInstance& inst, double lambda, double tol, int max_iter);

// The exact distortion-floor endpoint: restricts each source row to its
// minimizing reproductions and minimizes mutual information over that
// support. lambda is reported as +inf.
RdPoint min_distortion_point(const RdInstance& inst, double tol, int max_iter);

// Geometric slope ladder on [lo, hi] with n points, ascending.
std::vector<double> geometric_schedule(double lo, double hi, int n);

// One point per scheduled slope plus the exact floor and ceiling endpoints,
// deduplicated by delta within 1e-9.
RdCurve sweep(const RdInstance& inst, const std::vector<double>& schedule, double tol,
              int max_iter, int threads = 1);

struct RateAtResult {
    double rate = 0.0;
    // One part for a direct hit, two (weight, point) parts when the target
    // falls across a plateau and is met by time-sharing.
    std::vector<std::pair<double, RdPoint>> mix;
};

// Inverts the parametric sweep by bisection on the slope. Throws
// infeasible_distortion_error below the floor.
RateAtResult rate_at_distortion(const RdInstance& inst, double target_delta, double tol,
                                double ba_tol = 1e-10, int max_iter = 5000);

// Solves every branch at a common slope and aggregates distortion and rate
// with the branch weights; exact for convex branch curves.
RdCurve branch_sweep(const std::vector<std::pair<double, RdInstance>>& branches,
                     const std::vector<double>& schedule, double tol, int max_iter,
                     int threads = 1);

// Evaluation helpers used by witness-replay checks.
double expected_distortion(const RdInstance& inst, const Kernel& w);
double kernel_rate(const RdInstance& inst, const Kernel& w);

}  // namespace srdf
