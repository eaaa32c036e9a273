#pragma once

// Distortion-side constructions: posterior-averaged ("modified") distortion
// for a sampled subset, per-sample maximum posterior maps, distortion-range
// extremes for each sampler class, and the decomposition of a deterministic
// sampler into per-subset branch problems.

#include <optional>
#include <utility>
#include <vector>

#include "srdf/prob.hpp"
#include "srdf/rd_instance.hpp"
#include "srdf/samplers.hpp"

namespace srdf {

// Per observed value x_A: the largest posterior probability of the unobserved
// coordinates, with its attaining value (lexicographic smallest on ties).
struct AlphaMap {
    std::vector<double> alpha;          // indexed by flat x_A
    std::vector<std::size_t> witness;   // flat x_{A^c} attaining the maximum
    double expected_alpha = 0.0;        // E[alpha(X_A)]
};

struct DeltaRange {
    double delta_min = 0.0;
    double delta_max = 0.0;
    std::optional<PointMassSampler> min_witness;
    std::optional<PointMassSampler> max_witness;
};

// rho_A(x_A, y) = E[d(X, y) | X_A = x_A]; an entry is forbidden when any
// positive-posterior completion of x_A hits a forbidden pair of d.
// Throws if some x_A has every reproduction forbidden.
DistortionTable modified_distortion(const JointPmf& pmf, const DistortionTable& d,
                                    const SubsetIndex& subset);

AlphaMap alpha_map(const JointPmf& pmf, const SubsetIndex& subset);

// Distortion range of the fixed-set problem for subset A.
DeltaRange fixed_set_extremes(const JointPmf& pmf, const DistortionTable& d,
                              const SubsetIndex& subset);

// Probability-of-error specialization: floor 1 - E[alpha], ceiling
// 1 - max P(x). Requires matching source/reproduction alphabets.
DeltaRange pe_extremes(const JointPmf& pmf, const SubsetIndex& subset);

// Smallest fixed-set floor over all k-subsets, with the attaining subset
// recorded as a constant sampler witness.
DeltaRange irs_delta_min(const JointPmf& pmf, const DistortionTable& d, std::size_t k);

// Distortion range achievable by source-dependent deterministic sampling,
// found by exhaustive search over all point-mass samplers. Throws
// cap_exceeded_error when |A_k|^|X| > cap.
DeltaRange mrs_extremes(const JointPmf& pmf, const DistortionTable& d, std::size_t k,
                        std::uint64_t cap);

// One rate-distortion problem per subset the sampler can emit, weighted by
// the probability of emitting it. Branch sources and distortions condition on
// the sampling event itself. Zero-probability subsets are dropped.
std::vector<std::pair<double, RdInstance>> sampler_branch_problems(const JointPmf& pmf,
                                                                   const DistortionTable& d,
                                                                   const SubsetFamily& family,
                                                                   const PointMassSampler& h);

// The uninformed-decoder reduction: a single source over atoms (subset, x_A)
// in family-then-value order, with posterior-expected distortion per atom.
RdInstance composite_distortion(const JointPmf& pmf, const DistortionTable& d,
                                const SubsetFamily& family, const PointMassSampler& h);

// Atom labels ("(A{..}, x_A)") aligned with composite_distortion ordering.
std::vector<std::string> composite_atom_labels(const JointPmf& pmf, const SubsetFamily& family);

}  // namespace srdf
