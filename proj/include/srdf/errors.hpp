#pragma once

#include <stdexcept>
#include <string>

namespace srdf {

// Thrown when an exhaustive enumeration would exceed its configured cap.
struct cap_exceeded_error : std::runtime_error {
    explicit cap_exceeded_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a distortion target lies below the feasible floor of a problem.
struct infeasible_distortion_error : std::domain_error {
    explicit infeasible_distortion_error(const std::string& what) : std::domain_error(what) {}
};

}  // namespace srdf
