#pragma once

// Independent verification tools: exhaustive grid-kernel rate-distortion
// evaluation, seeded Monte Carlo distortion estimates, and algebraic identity
// checks. Deliberately avoids the solver and envelope code paths it is used
// to validate.

#include <cstdint>
#include <utility>
#include <vector>

#include "srdf/distortion.hpp"
#include "srdf/envelope.hpp"
#include "srdf/prob.hpp"
#include "srdf/rd_instance.hpp"
#include "srdf/samplers.hpp"

namespace srdf {
namespace oracle {

// Enumerates every row-stochastic kernel whose entries are multiples of 1/q
// (rows restricted to admissible reproductions), records the smallest mutual
// information achieving E[rho] <= delta for each grid delta, and returns the
// lower convex envelope of that staircase sampled at the grid.
//
// The search space has prod_z C(q + n_adm(z) - 1, n_adm(z) - 1) kernels;
// counts above max_kernels throw cap_exceeded_error.
std::vector<CurvePoint> brute_force_rate(const RdInstance& inst, const std::vector<double>& grid,
                                         int q, std::uint64_t max_kernels = 10'000'000,
                                         int threads = 1);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
};

// Draws n iid source values, samples a subset via the sampler, reproduces via
// the matching branch kernel (rows indexed by the sampled coordinates), and
// averages the distortion. Fully reproducible from the seed.
McEstimate mc_expected_distortion(const JointPmf& pmf, const DistortionTable& d,
                                  const SubsetFamily& family, const RandomizedSampler& sampler,
                                  const std::vector<Kernel>& branch_kernels, std::size_t n,
                                  std::uint64_t seed);
McEstimate mc_expected_distortion(const JointPmf& pmf, const DistortionTable& d,
                                  const SubsetFamily& family, const PointMassSampler& sampler,
                                  const std::vector<Kernel>& branch_kernels, std::size_t n,
                                  std::uint64_t seed);

// Residual of the error-probability decomposition for a coding kernel on the
// sampled coordinates completed by the most probable unsampled value:
// |E_Q[d] - (1 - E[alpha] + E[alpha 1{X_A != Y_A}])|.
double decomposition_identity_check(const JointPmf& pmf, const SubsetIndex& subset,
                                    const Kernel& kernel);

// Checks that the per-source-value sampler choice in the slope-lambda
// Lagrangian is vertex-optimal (the objective is linear in each sampler row).
// A strictly convex penalty added to the rows (negative control) breaks the
// property and must make the check fail.
bool lagrangian_vertex_check(std::size_t m, std::size_t k,
                             const std::vector<std::size_t>& component_sizes,
                             const std::vector<std::size_t>& repro_sizes, double lambda,
                             std::uint64_t seed, int trials, double convex_penalty = 0.0);

// Deterministic uniform double in [0,1) from a seeded 64-bit generator.
double uniform_double(std::uint64_t& state);
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace oracle
}  // namespace srdf
