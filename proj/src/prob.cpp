#include "srdf/prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace srdf {

namespace {

constexpr double kMassTol = 1e-9;

double xlog2x(double x) {
    return x > 0.0 ? x * std::log2(x) : 0.0;
}

}  // namespace

SubsetIndex::SubsetIndex(std::vector<std::size_t> members) : members_(std::move(members)) {
    for (std::size_t i = 1; i < members_.size(); ++i) {
        if (members_[i] <= members_[i - 1]) {
            throw std::invalid_argument("SubsetIndex: members must be strictly increasing");
        }
    }
}

bool SubsetIndex::contains(std::size_t i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
}

SubsetIndex SubsetIndex::complement(std::size_t m) const {
    if (!members_.empty() && members_.back() >= m) {
        throw std::invalid_argument("SubsetIndex: member out of range for complement");
    }
    std::vector<std::size_t> rest;
    rest.reserve(m - members_.size());
    for (std::size_t i = 0; i < m; ++i) {
        if (!contains(i)) rest.push_back(i);
    }
    return SubsetIndex(std::move(rest));
}

JointPmf::JointPmf(std::vector<ComponentAlphabet> components, std::vector<double> probs,
                   bool allow_partial_support)
    : components_(std::move(components)), probs_(std::move(probs)) {
    std::size_t expected = 1;
    for (const auto& c : components_) {
        if (c.symbols.empty()) throw std::invalid_argument("JointPmf: empty alphabet");
        std::set<std::string> uniq(c.symbols.begin(), c.symbols.end());
        if (uniq.size() != c.symbols.size()) {
            throw std::invalid_argument("JointPmf: duplicate symbols in alphabet '" + c.name + "'");
        }
        expected *= c.symbols.size();
    }
    if (probs_.size() != expected) {
        throw std::invalid_argument("JointPmf: probability array length does not match alphabet product");
    }
    double sum = 0.0;
    for (double v : probs_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("JointPmf: entries must be finite and nonnegative");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kMassTol) {
        throw std::invalid_argument("JointPmf: mass " + std::to_string(sum) + " not within 1e-9 of 1");
    }
    for (double& v : probs_) v /= sum;
    full_support_ = std::all_of(probs_.begin(), probs_.end(), [](double v) { return v > 0.0; });
    if (!full_support_ && !allow_partial_support) {
        throw std::invalid_argument("JointPmf: zero entries require allow_partial_support");
    }
}

std::size_t JointPmf::flatten(std::span<const std::size_t> digits) const {
    if (digits.size() != components_.size()) {
        throw std::invalid_argument("JointPmf::flatten: wrong number of digits");
    }
    std::size_t flat = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] >= dim(i)) throw std::invalid_argument("JointPmf::flatten: digit out of range");
        flat = flat * dim(i) + digits[i];
    }
    return flat;
}

std::vector<std::size_t> JointPmf::unflatten(std::size_t flat) const {
    std::vector<std::size_t> digits(components_.size());
    for (std::size_t i = components_.size(); i-- > 0;) {
        digits[i] = flat % dim(i);
        flat /= dim(i);
    }
    return digits;
}

Kernel::Kernel(std::size_t from_, std::size_t to_, std::vector<double> p_)
    : from(from_), to(to_), p(std::move(p_)) {
    if (p.size() != from * to) throw std::invalid_argument("Kernel: size mismatch");
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("Kernel: entries must be finite and nonnegative");
        }
    }
    for (std::size_t i = 0; i < from; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < to; ++j) sum += p[i * to + j];
        if (std::abs(sum - 1.0) > kMassTol) {
            throw std::invalid_argument("Kernel: row " + std::to_string(i) + " mass not within 1e-9 of 1");
        }
        for (std::size_t j = 0; j < to; ++j) p[i * to + j] /= sum;
    }
}

Kernel Kernel::zeros(std::size_t from_, std::size_t to_) {
    Kernel k;
    k.from = from_;
    k.to = to_;
    k.p.assign(from_ * to_, 0.0);
    return k;
}

void Kernel::renormalize_rows() {
    for (std::size_t i = 0; i < from; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < to; ++j) sum += p[i * to + j];
        if (sum <= 0.0) throw std::runtime_error("Kernel: cannot renormalize an all-zero row");
        for (std::size_t j = 0; j < to; ++j) p[i * to + j] /= sum;
    }
}

SplitIndexer::SplitIndexer(const std::vector<std::size_t>& dims, const SubsetIndex& subset) {
    const std::size_t m = dims.size();
    for (std::size_t i : subset.members()) {
        if (i >= m) throw std::invalid_argument("SplitIndexer: subset member out of range");
    }
    std::vector<std::size_t> stride(m, 1);
    for (std::size_t i = m; i-- > 1;) stride[i - 1] = stride[i] * dims[i];

    std::vector<std::size_t> sub, rest;
    for (std::size_t i = 0; i < m; ++i) {
        (subset.contains(i) ? sub : rest).push_back(i);
    }

    auto build = [&](const std::vector<std::size_t>& comps, std::size_t& total,
                     std::vector<std::size_t>& offsets) {
        total = 1;
        for (std::size_t c : comps) total *= dims[c];
        offsets.assign(total, 0);
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rem = flat, off = 0;
            for (std::size_t i = comps.size(); i-- > 0;) {
                off += (rem % dims[comps[i]]) * stride[comps[i]];
                rem /= dims[comps[i]];
            }
            offsets[flat] = off;
        }
    };
    build(sub, subset_size_, subset_offset_);
    build(rest, complement_size_, complement_offset_);
}

std::vector<std::size_t> pmf_dims(const JointPmf& pmf) {
    std::vector<std::size_t> dims(pmf.num_components());
    for (std::size_t i = 0; i < dims.size(); ++i) dims[i] = pmf.dim(i);
    return dims;
}

JointPmf marginal(const JointPmf& pmf, const SubsetIndex& subset) {
    for (std::size_t i : subset.members()) {
        if (i >= pmf.num_components()) {
            throw std::invalid_argument("marginal: component index out of range");
        }
    }
    SplitIndexer idx(pmf_dims(pmf), subset);
    std::vector<double> out(idx.subset_size(), 0.0);
    for (std::size_t a = 0; a < idx.subset_size(); ++a) {
        double sum = 0.0;
        for (std::size_t c = 0; c < idx.complement_size(); ++c) {
            sum += pmf.prob(idx.fuse(a, c));
        }
        out[a] = sum;
    }
    std::vector<ComponentAlphabet> comps;
    comps.reserve(subset.size());
    for (std::size_t i : subset.members()) comps.push_back(pmf.component(i));
    return JointPmf(std::move(comps), std::move(out), /*allow_partial_support=*/true);
}

Kernel conditional(const JointPmf& pmf, const SubsetIndex& target, const SubsetIndex& given) {
    for (std::size_t i : target.members()) {
        if (given.contains(i)) throw std::invalid_argument("conditional: target and given overlap");
    }
    if (target.empty()) throw std::invalid_argument("conditional: empty target");

    const auto dims = pmf_dims(pmf);
    // Union of target and given, marginalizing everything else out first.
    std::vector<std::size_t> joined = given.members();
    joined.insert(joined.end(), target.members().begin(), target.members().end());
    std::sort(joined.begin(), joined.end());
    SubsetIndex both(joined);
    JointPmf joint = marginal(pmf, both);

    // Positions of the original components inside `both`.
    auto position_in = [&](const SubsetIndex& sub) {
        std::vector<std::size_t> pos;
        for (std::size_t c : sub.members()) {
            auto it = std::lower_bound(joined.begin(), joined.end(), c);
            pos.push_back(static_cast<std::size_t>(it - joined.begin()));
        }
        return SubsetIndex(pos);
    };
    SubsetIndex given_pos = position_in(given);
    SplitIndexer idx(pmf_dims(joint), given_pos);

    const std::size_t rows = idx.subset_size();
    const std::size_t cols = idx.complement_size();
    std::vector<double> k(rows * cols, 0.0);
    for (std::size_t g = 0; g < rows; ++g) {
        double mass = 0.0;
        for (std::size_t t = 0; t < cols; ++t) mass += joint.prob(idx.fuse(g, t));
        if (mass <= 0.0) {
            throw std::invalid_argument("conditional: zero-probability conditioning row");
        }
        for (std::size_t t = 0; t < cols; ++t) k[g * cols + t] = joint.prob(idx.fuse(g, t)) / mass;
    }
    return Kernel(rows, cols, std::move(k));
}

double entropy(std::span<const double> pmf) {
    double h = 0.0;
    for (double v : pmf) h -= xlog2x(v);
    return h;
}

double entropy(const JointPmf& pmf) {
    return entropy(std::span<const double>(pmf.probs()));
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("binary_entropy: argument outside [0,1]");
    }
    return -xlog2x(p) - xlog2x(1.0 - p);
}

double mutual_information(std::span<const double> source, const Kernel& w) {
    if (source.size() != w.from) {
        throw std::invalid_argument("mutual_information: source size does not match kernel rows");
    }
    std::vector<double> q(w.to, 0.0);
    for (std::size_t z = 0; z < w.from; ++z) {
        for (std::size_t y = 0; y < w.to; ++y) q[y] += source[z] * w(z, y);
    }
    double info = 0.0;
    for (std::size_t z = 0; z < w.from; ++z) {
        if (source[z] <= 0.0) continue;
        for (std::size_t y = 0; y < w.to; ++y) {
            double wy = w(z, y);
            if (wy > 0.0) info += source[z] * wy * std::log2(wy / q[y]);
        }
    }
    return std::max(info, 0.0);
}

double conditional_mutual_information(
    std::span<const double> weights,
    const std::vector<std::pair<std::vector<double>, Kernel>>& branches) {
    if (weights.size() != branches.size()) {
        throw std::invalid_argument("conditional_mutual_information: one branch required per weight");
    }
    double sum = 0.0;
    for (double v : weights) {
        if (!(v >= 0.0)) throw std::invalid_argument("conditional_mutual_information: negative weight");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kMassTol) {
        throw std::invalid_argument("conditional_mutual_information: weights must sum to 1");
    }
    double info = 0.0;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        info += (weights[i] / sum) *
                mutual_information(std::span<const double>(branches[i].first), branches[i].second);
    }
    return info;
}

}  // namespace srdf
