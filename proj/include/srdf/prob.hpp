#pragma once

// Finite-alphabet probability primitives: joint pmfs over product alphabets,
// marginalization, conditioning, and information measures (log base 2).
//
// Tensor layout is row-major over the component order fixed at construction:
// for components with sizes (n_0, ..., n_{m-1}), the flat index of symbol
// tuple (i_0, ..., i_{m-1}) is ((i_0 * n_1 + i_1) * n_2 + i_2) ...

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "srdf/errors.hpp"

namespace srdf {

struct ComponentAlphabet {
    std::string name;
    std::vector<std::string> symbols;  // distinct, order fixed at construction

    std::size_t size() const { return symbols.size(); }
};

// Sorted set of component indices (0-based) identifying a subset of the
// components of a product alphabet.
class SubsetIndex {
public:
    SubsetIndex() = default;
    explicit SubsetIndex(std::vector<std::size_t> members);

    const std::vector<std::size_t>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(std::size_t i) const;

    // Members of {0..m-1} not in this subset, in increasing order.
    SubsetIndex complement(std::size_t m) const;

    bool operator==(const SubsetIndex& o) const { return members_ == o.members_; }
    bool operator<(const SubsetIndex& o) const { return members_ < o.members_; }

private:
    std::vector<std::size_t> members_;
};

// Full joint distribution over a product of component alphabets.
//
// Entries must be nonnegative; the total mass is renormalized when
// |sum - 1| <= 1e-9 and rejected otherwise. Zero entries are rejected unless
// allow_partial_support is set (intermediate objects such as conditional
// branch sources may carry zeros).
class JointPmf {
public:
    JointPmf(std::vector<ComponentAlphabet> components, std::vector<double> probs,
             bool allow_partial_support = false);

    std::size_t num_components() const { return components_.size(); }
    const std::vector<ComponentAlphabet>& components() const { return components_; }
    const ComponentAlphabet& component(std::size_t i) const { return components_[i]; }
    std::size_t dim(std::size_t i) const { return components_[i].size(); }
    std::size_t size() const { return probs_.size(); }

    double prob(std::size_t flat) const { return probs_[flat]; }
    const std::vector<double>& probs() const { return probs_; }
    bool full_support() const { return full_support_; }

    std::size_t flatten(std::span<const std::size_t> digits) const;
    std::vector<std::size_t> unflatten(std::size_t flat) const;

private:
    std::vector<ComponentAlphabet> components_;
    std::vector<double> probs_;
    bool full_support_ = false;
};

// Row-stochastic matrix: conditional pmf over `to` given `from`.
// Rows are renormalized under the same 1e-9 policy as JointPmf.
struct Kernel {
    std::size_t from = 0;
    std::size_t to = 0;
    std::vector<double> p;  // row-major, from x to

    Kernel() = default;
    Kernel(std::size_t from_, std::size_t to_, std::vector<double> p_);

    // all-zero workspace whose rows a solver fills in before use
    static Kernel zeros(std::size_t from_, std::size_t to_);

    double operator()(std::size_t i, std::size_t j) const { return p[i * to + j]; }
    double& at(std::size_t i, std::size_t j) { return p[i * to + j]; }
    std::span<const double> row(std::size_t i) const { return {p.data() + i * to, to}; }

    void renormalize_rows();
};

// Precomputed index arithmetic splitting a product alphabet into a subset and
// its complement: full_flat = subset_offset[a] + complement_offset[c].
class SplitIndexer {
public:
    SplitIndexer(const std::vector<std::size_t>& dims, const SubsetIndex& subset);

    std::size_t subset_size() const { return subset_size_; }
    std::size_t complement_size() const { return complement_size_; }
    std::size_t fuse(std::size_t subset_flat, std::size_t complement_flat) const {
        return subset_offset_[subset_flat] + complement_offset_[complement_flat];
    }

private:
    std::size_t subset_size_ = 1;
    std::size_t complement_size_ = 1;
    std::vector<std::size_t> subset_offset_;
    std::vector<std::size_t> complement_offset_;
};

std::vector<std::size_t> pmf_dims(const JointPmf& pmf);

// P restricted to the given components (complement summed out).
JointPmf marginal(const JointPmf& pmf, const SubsetIndex& subset);

// Kernel rows indexed by the `given` product alphabet, columns by `target`.
// Throws if a conditioning row has zero probability.
Kernel conditional(const JointPmf& pmf, const SubsetIndex& target, const SubsetIndex& given);

double entropy(std::span<const double> pmf);
double entropy(const JointPmf& pmf);

// h(p) = -p log2 p - (1-p) log2 (1-p); throws outside [0,1].
double binary_entropy(double p);

// I(Z ^ Y) for a joint factored as source pmf x kernel, in bits.
double mutual_information(std::span<const double> source, const Kernel& w);

// Weighted sum of per-branch mutual informations, weights a pmf.
double conditional_mutual_information(
    std::span<const double> weights,
    const std::vector<std::pair<std::vector<double>, Kernel>>& branches);

}  // namespace srdf
