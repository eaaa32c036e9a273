#pragma once

// A generic "remote" rate-distortion problem: source pmf over a finite set,
// finite reproduction set, and a per-pair distortion table with an optional
// forbidden mask (pairs the optimizer must assign zero probability).

#include <cstdint>
#include <vector>

#include "srdf/errors.hpp"

namespace srdf {

class DistortionTable {
public:
    DistortionTable() = default;
    DistortionTable(std::size_t source_size, std::size_t repro_size, std::vector<double> values,
                    std::vector<std::uint8_t> forbidden);

    std::size_t source_size() const { return source_size_; }
    std::size_t repro_size() const { return repro_size_; }
    double at(std::size_t z, std::size_t y) const { return values_[z * repro_size_ + y]; }
    bool is_forbidden(std::size_t z, std::size_t y) const {
        return forbidden_[z * repro_size_ + y] != 0;
    }
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::uint8_t>& forbidden() const { return forbidden_; }
    bool any_forbidden() const;

    // Smallest admissible value in a source row; throws if none exists.
    double row_min(std::size_t z) const;

private:
    std::size_t source_size_ = 0;
    std::size_t repro_size_ = 0;
    std::vector<double> values_;
    std::vector<std::uint8_t> forbidden_;
};

struct RdInstance {
    std::vector<double> source;  // pmf over the source set; zeros allowed
    DistortionTable rho;

    void validate() const;  // mass within 1e-9 of 1, admissible y per positive z

    // floor = E[min admissible rho(Z, .)]
    double delta_min() const;
    // ceiling = min over y admissible for every positive-probability z of E[rho(Z, y)];
    // also reports that minimizing y. Throws if no admissible y exists.
    double delta_max(std::size_t* argmin_y = nullptr) const;
};

}  // namespace srdf
