#pragma once

// Sampling rate-distortion curves per sampler class: fixed-set, independent
// random sampling (convex envelope over fixed sets), memoryless random
// sampling with informed decoder (exhaustive point-mass search plus branch
// aggregation), and the uninformed-decoder upper bound.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srdf/distortion.hpp"
#include "srdf/envelope.hpp"
#include "srdf/rd_solver.hpp"
#include "srdf/samplers.hpp"

namespace srdf {

struct SolverOptions {
    double lambda_min = 1e-3;
    double lambda_max = 64.0;
    int lambda_points = 256;
    double tol = 1e-10;
    int max_iter = 20000;
    int grid = 201;
    std::uint64_t cap = 1'000'000;
    int threads = 1;
    std::uint64_t seed = 0;

    std::vector<double> schedule() const { return geometric_schedule(lambda_min, lambda_max, lambda_points); }
};

struct SamplerInfo {
    std::int64_t id = -1;  // dense index used as witness tag on curve points
    std::string label;
    std::uint64_t encoding = 0;               // point-mass encoding when applicable
    std::optional<SubsetIndex> subset;        // fixed-set witness
    std::optional<PointMassSampler> sampler;  // point-mass witness
};

struct WitnessPart {
    double weight = 1.0;
    double lambda = 0.0;
    std::vector<Kernel> kernels;  // one per branch of the sampler's decomposition
};

struct VertexWitness {
    std::int64_t sampler_id = -1;
    double delta = 0.0;
    double rate = 0.0;
    std::vector<WitnessPart> parts;
};

struct Diagnostics {
    std::size_t ba_runs = 0;
    long long iterations = 0;
    std::size_t nonconverged = 0;
    std::uint64_t enumerated = 0;  // sampler maps considered
    std::size_t solved = 0;        // distinct problems actually swept
    bool refine_improved = false;
    double refine_gain = 0.0;
};

struct SrdfResult {
    PiecewiseLinearCurve curve;
    DeltaRange delta_range;
    std::vector<SamplerInfo> samplers;
    std::vector<PiecewiseLinearCurve> sampler_curves;  // indexed by sampler id
    std::vector<std::vector<std::pair<double, RdInstance>>> sampler_instances;
    std::vector<VertexWitness> vertex_witnesses;  // indexed by CurvePoint::payload
    double delta_offset = 0.0;  // added to replayed branch distortions
    Diagnostics diag;

    double value(double delta) const { return curve.eval(delta); }
    std::string witness_label(std::int64_t id) const;
    // Recompute (delta, rate) of a stored witness from its kernels.
    std::pair<double, double> replay(std::int64_t payload) const;
};

// Probability-of-error table over matching source/reproduction alphabets.
DistortionTable probability_of_error_table(const JointPmf& pmf);

std::vector<double> linspace(double lo, double hi, int n);

SrdfResult fixed_set_srdf(const JointPmf& pmf, const DistortionTable& d, const SubsetIndex& subset,
                          const SolverOptions& opts);

// Probability-of-error reduction: codes the sampled coordinates against the
// posterior-weighted error measure, with the distortion threshold shifted by
// the irreducible estimation error of the unsampled coordinates.
SrdfResult pe_fixed_set_srdf(const JointPmf& pmf, const SubsetIndex& subset,
                             const SolverOptions& opts);

// Most probable completion of the unsampled coordinates given an observed
// reproduction of the sampled ones (lexicographic tie-break).
std::size_t map_estimator(const JointPmf& pmf, const SubsetIndex& subset, std::size_t y_subset_flat);

SrdfResult irs_srdf(const JointPmf& pmf, const DistortionTable& d, std::size_t k,
                    const SolverOptions& opts);

SrdfResult mrs_informed_srdf(const JointPmf& pmf, const DistortionTable& d, std::size_t k,
                             const SolverOptions& opts);

// (raw pointwise minimum over samplers, its convex envelope). The raw bound
// may be non-convex; the envelope is reported separately as a possibly loose
// further bound obtained by time-sharing.
std::pair<SrdfResult, SrdfResult> mrs_uninformed_bound(const JointPmf& pmf,
                                                       const DistortionTable& d, std::size_t k,
                                                       const SolverOptions& opts);

// Alternating minimization over stochastic sampler rows and reproduction
// kernel at each slope, seeded from the best deterministic sampler. Any
// improvement beyond 1e-6 over the deterministic bound is flagged in the
// diagnostics rather than suppressed.
SrdfResult mrs_uninformed_randomized_refine(const JointPmf& pmf, const DistortionTable& d,
                                            std::size_t k, const SolverOptions& opts);

}  // namespace srdf
