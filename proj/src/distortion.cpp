#include "srdf/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace srdf {

DistortionTable::DistortionTable(std::size_t source_size, std::size_t repro_size,
                                 std::vector<double> values, std::vector<std::uint8_t> forbidden)
    : source_size_(source_size),
      repro_size_(repro_size),
      values_(std::move(values)),
      forbidden_(std::move(forbidden)) {
    if (values_.size() != source_size_ * repro_size_) {
        throw std::invalid_argument("DistortionTable: value array size mismatch");
    }
    if (forbidden_.empty()) forbidden_.assign(values_.size(), 0);
    if (forbidden_.size() != values_.size()) {
        throw std::invalid_argument("DistortionTable: forbidden mask size mismatch");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (forbidden_[i]) {
            values_[i] = 0.0;  // forbidden entries carry no numeric value
            continue;
        }
        if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
            throw std::invalid_argument("DistortionTable: values must be finite and nonnegative");
        }
    }
    for (std::size_t z = 0; z < source_size_; ++z) {
        bool any = false;
        for (std::size_t y = 0; y < repro_size_ && !any; ++y) any = !is_forbidden(z, y);
        if (!any) {
            throw std::invalid_argument("DistortionTable: source symbol " + std::to_string(z) +
                                        " has no admissible reproduction");
        }
    }
}

bool DistortionTable::any_forbidden() const {
    return std::any_of(forbidden_.begin(), forbidden_.end(), [](std::uint8_t f) { return f != 0; });
}

double DistortionTable::row_min(std::size_t z) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < repro_size_; ++y) {
        if (!is_forbidden(z, y)) best = std::min(best, at(z, y));
    }
    if (!std::isfinite(best)) {
        throw std::invalid_argument("DistortionTable: row has no admissible reproduction");
    }
    return best;
}

void RdInstance::validate() const {
    if (source.size() != rho.source_size()) {
        throw std::invalid_argument("RdInstance: source size does not match distortion table");
    }
    double sum = 0.0;
    for (double v : source) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("RdInstance: source entries must be nonnegative");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("RdInstance: source mass not within 1e-9 of 1");
    }
    for (std::size_t z = 0; z < source.size(); ++z) {
        if (source[z] <= 0.0) continue;
        bool any = false;
        for (std::size_t y = 0; y < rho.repro_size() && !any; ++y) any = !rho.is_forbidden(z, y);
        if (!any) {
            throw std::invalid_argument("RdInstance: positive-probability symbol lacks admissible y");
        }
    }
}

double RdInstance::delta_min() const {
    double acc = 0.0;
    for (std::size_t z = 0; z < source.size(); ++z) {
        if (source[z] > 0.0) acc += source[z] * rho.row_min(z);
    }
    return acc;
}

double RdInstance::delta_max(std::size_t* argmin_y) const {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_y = 0;
    for (std::size_t y = 0; y < rho.repro_size(); ++y) {
        bool ok = true;
        double e = 0.0;
        for (std::size_t z = 0; z < source.size(); ++z) {
            if (source[z] <= 0.0) continue;
            if (rho.is_forbidden(z, y)) {
                ok = false;
                break;
            }
            e += source[z] * rho.at(z, y);
        }
        if (ok && e < best) {
            best = e;
            best_y = y;
        }
    }
    if (!std::isfinite(best)) {
        throw std::invalid_argument("RdInstance: no reproduction admissible for every source symbol");
    }
    if (argmin_y) *argmin_y = best_y;
    return best;
}

DistortionTable modified_distortion(const JointPmf& pmf, const DistortionTable& d,
                                    const SubsetIndex& subset) {
    if (subset.empty()) throw std::invalid_argument("modified_distortion: empty subset");
    if (d.source_size() != pmf.size()) {
        throw std::invalid_argument("modified_distortion: distortion table does not match pmf");
    }
    SplitIndexer idx(pmf_dims(pmf), subset);
    const std::size_t na = idx.subset_size();
    const std::size_t nc = idx.complement_size();
    const std::size_t ny = d.repro_size();

    JointPmf pa = marginal(pmf, subset);
    std::vector<double> values(na * ny, 0.0);
    std::vector<std::uint8_t> forbidden(na * ny, 0);
    for (std::size_t a = 0; a < na; ++a) {
        const double mass = pa.prob(a);
        if (mass <= 0.0) continue;  // unreachable for full-support sources
        for (std::size_t y = 0; y < ny; ++y) {
            double acc = 0.0;
            bool forb = false;
            for (std::size_t c = 0; c < nc; ++c) {
                const double post = pmf.prob(idx.fuse(a, c)) / mass;
                if (post <= 0.0) continue;
                const std::size_t x = idx.fuse(a, c);
                if (d.is_forbidden(x, y)) {
                    forb = true;
                    break;
                }
                acc += post * d.at(x, y);
            }
            values[a * ny + y] = forb ? 0.0 : acc;
            forbidden[a * ny + y] = forb ? 1 : 0;
        }
    }
    return DistortionTable(na, ny, std::move(values), std::move(forbidden));
}

AlphaMap alpha_map(const JointPmf& pmf, const SubsetIndex& subset) {
    if (subset.empty() || subset.size() >= pmf.num_components()) {
        throw std::invalid_argument("alpha_map: subset must be proper and nonempty");
    }
    SplitIndexer idx(pmf_dims(pmf), subset);
    const std::size_t na = idx.subset_size();
    const std::size_t nc = idx.complement_size();
    JointPmf pa = marginal(pmf, subset);

    AlphaMap out;
    out.alpha.assign(na, 0.0);
    out.witness.assign(na, 0);
    for (std::size_t a = 0; a < na; ++a) {
        const double mass = pa.prob(a);
        double best = -1.0;
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < nc; ++c) {
            const double post = mass > 0.0 ? pmf.prob(idx.fuse(a, c)) / mass : 0.0;
            if (post > best) {
                best = post;
                best_c = c;
            }
        }
        out.alpha[a] = best;
        out.witness[a] = best_c;
        out.expected_alpha += mass * best;
    }
    return out;
}

DeltaRange fixed_set_extremes(const JointPmf& pmf, const DistortionTable& d,
                              const SubsetIndex& subset) {
    RdInstance inst{marginal(pmf, subset).probs(), modified_distortion(pmf, d, subset)};
    DeltaRange r;
    r.delta_min = inst.delta_min();
    r.delta_max = inst.delta_max();
    return r;
}

DeltaRange pe_extremes(const JointPmf& pmf, const SubsetIndex& subset) {
    DeltaRange r;
    if (subset.size() >= pmf.num_components()) {
        r.delta_min = 0.0;
    } else {
        r.delta_min = 1.0 - alpha_map(pmf, subset).expected_alpha;
    }
    double pmax = 0.0;
    for (double v : pmf.probs()) pmax = std::max(pmax, v);
    r.delta_max = 1.0 - pmax;
    return r;
}

DeltaRange irs_delta_min(const JointPmf& pmf, const DistortionTable& d, std::size_t k) {
    SubsetFamily family = SubsetFamily::all_k_subsets(pmf.num_components(), k);
    DeltaRange best;
    best.delta_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < family.size(); ++i) {
        DeltaRange r = fixed_set_extremes(pmf, d, family.sets[i]);
        if (r.delta_min < best.delta_min) {
            best.delta_min = r.delta_min;
            best.min_witness = constant_sampler(pmf.size(), family, i);
        }
        best.delta_max = r.delta_max;  // common ceiling across subsets
    }
    return best;
}

DeltaRange mrs_extremes(const JointPmf& pmf, const DistortionTable& d, std::size_t k,
                        std::uint64_t cap) {
    SubsetFamily family = SubsetFamily::all_k_subsets(pmf.num_components(), k);
    auto samplers = enumerate_point_mass_samplers(pmf.size(), family, cap);

    DeltaRange best;
    best.delta_min = std::numeric_limits<double>::infinity();
    best.delta_max = std::numeric_limits<double>::infinity();
    for (const auto& h : samplers) {
        auto branches = sampler_branch_problems(pmf, d, family, h);
        double dmin = 0.0;
        double dmax = 0.0;
        for (const auto& [w, inst] : branches) {
            dmin += w * inst.delta_min();
            dmax += w * inst.delta_max();
        }
        if (dmin < best.delta_min) {
            best.delta_min = dmin;
            best.min_witness = h;
        }
        if (dmax < best.delta_max) {
            best.delta_max = dmax;
            best.max_witness = h;
        }
    }
    return best;
}

std::vector<std::pair<double, RdInstance>> sampler_branch_problems(const JointPmf& pmf,
                                                                   const DistortionTable& d,
                                                                   const SubsetFamily& family,
                                                                   const PointMassSampler& h) {
    if (h.assign.size() != pmf.size()) {
        throw std::invalid_argument("sampler_branch_problems: sampler not total on the source");
    }
    const std::size_t ny = d.repro_size();
    std::vector<std::pair<double, RdInstance>> out;
    for (std::size_t ai = 0; ai < family.size(); ++ai) {
        const SubsetIndex& a = family.sets[ai];
        SplitIndexer idx(pmf_dims(pmf), a);
        const std::size_t na = idx.subset_size();
        const std::size_t nc = idx.complement_size();

        // joint mass of {sampler emits A, X_A = x_A}
        std::vector<double> joint(na, 0.0);
        double weight = 0.0;
        for (std::size_t xa = 0; xa < na; ++xa) {
            for (std::size_t c = 0; c < nc; ++c) {
                const std::size_t x = idx.fuse(xa, c);
                if (h.assign[x] == ai) joint[xa] += pmf.prob(x);
            }
            weight += joint[xa];
        }
        if (weight <= 0.0) continue;

        std::vector<double> values(na * ny, 0.0);
        std::vector<std::uint8_t> forbidden(na * ny, 0);
        for (std::size_t xa = 0; xa < na; ++xa) {
            if (joint[xa] <= 0.0) continue;
            for (std::size_t y = 0; y < ny; ++y) {
                double acc = 0.0;
                bool forb = false;
                for (std::size_t c = 0; c < nc; ++c) {
                    const std::size_t x = idx.fuse(xa, c);
                    if (h.assign[x] != ai) continue;
                    const double post = pmf.prob(x) / joint[xa];
                    if (post <= 0.0) continue;
                    if (d.is_forbidden(x, y)) {
                        forb = true;
                        break;
                    }
                    acc += post * d.at(x, y);
                }
                values[xa * ny + y] = forb ? 0.0 : acc;
                forbidden[xa * ny + y] = forb ? 1 : 0;
            }
        }
        std::vector<double> source(na);
        for (std::size_t xa = 0; xa < na; ++xa) source[xa] = joint[xa] / weight;
        RdInstance inst{std::move(source), DistortionTable(na, ny, std::move(values), std::move(forbidden))};
        inst.validate();
        out.emplace_back(weight, std::move(inst));
    }
    return out;
}

RdInstance composite_distortion(const JointPmf& pmf, const DistortionTable& d,
                                const SubsetFamily& family, const PointMassSampler& h) {
    if (h.assign.size() != pmf.size()) {
        throw std::invalid_argument("composite_distortion: sampler not total on the source");
    }
    const std::size_t ny = d.repro_size();

    std::size_t natoms = 0;
    std::vector<SplitIndexer> idxs;
    idxs.reserve(family.size());
    for (const auto& a : family.sets) {
        idxs.emplace_back(pmf_dims(pmf), a);
        natoms += idxs.back().subset_size();
    }

    std::vector<double> source(natoms, 0.0);
    std::vector<double> values(natoms * ny, 0.0);
    std::vector<std::uint8_t> forbidden(natoms * ny, 0);
    std::size_t atom = 0;
    for (std::size_t ai = 0; ai < family.size(); ++ai) {
        const SplitIndexer& idx = idxs[ai];
        for (std::size_t xa = 0; xa < idx.subset_size(); ++xa, ++atom) {
            double mass = 0.0;
            for (std::size_t c = 0; c < idx.complement_size(); ++c) {
                const std::size_t x = idx.fuse(xa, c);
                if (h.assign[x] == ai) mass += pmf.prob(x);
            }
            source[atom] = mass;
            if (mass <= 0.0) continue;
            for (std::size_t y = 0; y < ny; ++y) {
                double acc = 0.0;
                bool forb = false;
                for (std::size_t c = 0; c < idx.complement_size(); ++c) {
                    const std::size_t x = idx.fuse(xa, c);
                    if (h.assign[x] != ai) continue;
                    if (d.is_forbidden(x, y)) {
                        forb = true;
                        break;
                    }
                    acc += (pmf.prob(x) / mass) * d.at(x, y);
                }
                values[atom * ny + y] = forb ? 0.0 : acc;
                forbidden[atom * ny + y] = forb ? 1 : 0;
            }
        }
    }
    RdInstance inst{std::move(source), DistortionTable(natoms, ny, std::move(values), std::move(forbidden))};
    inst.validate();
    return inst;
}

std::vector<std::string> composite_atom_labels(const JointPmf& pmf, const SubsetFamily& family) {
    std::vector<std::string> labels;
    for (const auto& a : family.sets) {
        SplitIndexer idx(pmf_dims(pmf), a);
        std::string prefix = "(A{";
        for (std::size_t j = 0; j < a.members().size(); ++j) {
            if (j) prefix += ",";
            prefix += pmf.component(a.members()[j]).name;
        }
        prefix += "},";
        for (std::size_t xa = 0; xa < idx.subset_size(); ++xa) {
            // decode xa against the subset's component sizes
            std::vector<std::size_t> sizes;
            for (std::size_t c : a.members()) sizes.push_back(pmf.dim(c));
            std::string sym;
            std::size_t rem = xa;
            std::vector<std::size_t> digits(sizes.size());
            for (std::size_t i = sizes.size(); i-- > 0;) {
                digits[i] = rem % sizes[i];
                rem /= sizes[i];
            }
            for (std::size_t i = 0; i < digits.size(); ++i) {
                sym += pmf.component(a.members()[i]).symbols[digits[i]];
            }
            labels.push_back(prefix + sym + ")");
        }
    }
    return labels;
}

}  // namespace srdf
