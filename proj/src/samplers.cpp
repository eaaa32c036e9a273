#include "srdf/samplers.hpp"

#include <algorithm>
#include <stdexcept>

namespace srdf {

SubsetFamily SubsetFamily::all_k_subsets(std::size_t m, std::size_t k) {
    if (k == 0 || k > m) throw std::invalid_argument("SubsetFamily: need 1 <= k <= m");
    SubsetFamily fam;
    fam.m = m;
    fam.k = k;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        fam.sets.emplace_back(cur);
        // next combination in lexicographic order
        std::size_t i = k;
        while (i-- > 0) {
            if (cur[i] != i + m - k) break;
            if (i == 0) return fam;
        }
        if (cur[i] == i + m - k) return fam;
        ++cur[i];
        for (std::size_t j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
}

std::size_t SubsetFamily::index_of(const SubsetIndex& a) const {
    auto it = std::find(sets.begin(), sets.end(), a);
    if (it == sets.end()) throw std::invalid_argument("SubsetFamily: subset not in family");
    return static_cast<std::size_t>(it - sets.begin());
}

std::uint64_t PointMassSampler::encoding(const SubsetFamily& family) const {
    std::uint64_t code = 0;
    std::uint64_t base = family.size();
    for (std::size_t j = assign.size(); j-- > 0;) {
        code = code * base + assign[j];
    }
    return code;
}

bool PointMassSampler::constant() const {
    for (std::size_t i = 1; i < assign.size(); ++i) {
        if (assign[i] != assign[0]) return false;
    }
    return true;
}

std::uint64_t point_mass_sampler_count(std::size_t source_size, const SubsetFamily& family,
                                       std::uint64_t cap) {
    unsigned __int128 count = 1;
    for (std::size_t i = 0; i < source_size; ++i) {
        count *= family.size();
        if (count > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(count);
}

std::vector<PointMassSampler> enumerate_point_mass_samplers(std::size_t source_size,
                                                            const SubsetFamily& family,
                                                            std::uint64_t cap) {
    const std::uint64_t count = point_mass_sampler_count(source_size, family, cap);
    if (count > cap) {
        throw cap_exceeded_error(
            "enumerate_point_mass_samplers: |A_k|^|X| exceeds cap " + std::to_string(cap) +
            "; raise the cap to enumerate this sampler space");
    }
    std::vector<PointMassSampler> out;
    out.reserve(count);
    PointMassSampler h;
    h.k = family.k;
    h.assign.assign(source_size, 0);
    const std::uint32_t base = static_cast<std::uint32_t>(family.size());
    for (std::uint64_t code = 0; code < count; ++code) {
        out.push_back(h);
        // increment the little-endian digit string
        for (std::size_t j = 0; j < source_size; ++j) {
            if (++h.assign[j] < base) break;
            h.assign[j] = 0;
        }
    }
    return out;
}

PointMassSampler constant_sampler(std::size_t source_size, const SubsetFamily& family,
                                  std::size_t family_index) {
    if (family_index >= family.size()) throw std::invalid_argument("constant_sampler: bad index");
    PointMassSampler h;
    h.k = family.k;
    h.assign.assign(source_size, static_cast<std::uint32_t>(family_index));
    return h;
}

}  // namespace srdf
