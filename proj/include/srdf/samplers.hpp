#pragma once

// Sampler machinery: the family of k-sized component subsets, deterministic
// point-mass samplers mapping each source value to a subset, and their
// exhaustive enumeration in mixed-radix order.

#include <cstdint>
#include <vector>

#include "srdf/prob.hpp"

namespace srdf {

// All k-sized subsets of {0..m-1} in lexicographic order.
struct SubsetFamily {
    std::size_t m = 0;
    std::size_t k = 0;
    std::vector<SubsetIndex> sets;

    static SubsetFamily all_k_subsets(std::size_t m, std::size_t k);
    std::size_t size() const { return sets.size(); }
    std::size_t index_of(const SubsetIndex& a) const;
};

// Deterministic sampler: assigns one subset of the family to every source
// value. `assign[x]` is the family index chosen at flat source index x.
// The encoding is the little-endian base-|family| integer of the digit
// string (assign[0], assign[1], ...), which fixes the enumeration order.
struct PointMassSampler {
    std::size_t k = 0;
    std::vector<std::uint32_t> assign;

    std::uint64_t encoding(const SubsetFamily& family) const;
    bool constant() const;
};

// Sampler with stochastic rows: P(subset | source value).
struct RandomizedSampler {
    Kernel rows;  // from = |source alphabet|, to = |family|
};

// Exact count |family|^source_size, saturating at cap+1 when it overflows.
std::uint64_t point_mass_sampler_count(std::size_t source_size, const SubsetFamily& family,
                                       std::uint64_t cap);

// All maps from source values to family subsets, in encoding order.
// Throws cap_exceeded_error when the count exceeds cap.
std::vector<PointMassSampler> enumerate_point_mass_samplers(std::size_t source_size,
                                                            const SubsetFamily& family,
                                                            std::uint64_t cap);

PointMassSampler constant_sampler(std::size_t source_size, const SubsetFamily& family,
                                  std::size_t family_index);

}  // namespace srdf
