#pragma once

// Curve emission: CSV (header `delta,rate,lambda,witness`) and JSON rows with
// run metadata. All floating-point output uses 9 significant digits, and the
// assembly is deterministic, so repeated runs are byte-identical.

#include <string>
#include <vector>

#include "srdf/srdf.hpp"

namespace srdf {

struct CurveRow {
    double delta = 0.0;
    double rate = 0.0;
    double lambda = 0.0;     // local slope magnitude of the segment at delta
    std::string witness;     // sampler label, or "a:w+b:w" for a time-share
};

struct CurveEmission {
    std::string name;
    std::vector<CurveRow> rows;  // deltas strictly increasing
};

// Samples the result's curve on an n-point uniform grid over its range.
CurveEmission tabulate_curve(const SrdfResult& result, const std::string& name, int grid_points);

std::string to_csv(const CurveEmission& emission);
std::string to_json(const CurveEmission& emission, const std::string& spec_hash_hex,
                    std::uint64_t seed, const std::string& tool_version);

// Writes content to path; throws std::runtime_error on I/O failure.
void write_file(const std::string& path, const std::string& content);

std::string format_sig9(double v);

}  // namespace srdf
