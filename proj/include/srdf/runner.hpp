#pragma once

// Command orchestration shared by the CLI and the acceptance suite: builds
// the requested curves, writes per-curve CSV/JSON files plus a run report,
// and maps failures to process exit codes.

#include <map>
#include <string>
#include <vector>

#include "srdf/problem_spec.hpp"
#include "srdf/srdf.hpp"

namespace srdf {

inline constexpr const char* kToolVersion = "0.1.0";

// exit codes: 0 ok, 1 validation error, 2 solver non-convergence,
// 3 enumeration cap exceeded, 4 I/O failure
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitNonConvergence = 2,
    kExitCapExceeded = 3,
    kExitIo = 4,
};

struct RunOutput {
    std::map<std::string, SrdfResult> curves;  // by emission name
    std::vector<std::string> files;
    std::string report_path;
    int exit_code = kExitOk;
    std::string message;
};

struct RunConfig {
    std::string out_dir = "out";
    std::string format = "csv";  // csv | json
    bool write_files = true;
};

// Reproduces the bundled two-bit erasure/flip instance: both fixed-set
// curves and their random-sampling envelope.
RunOutput run_example1(const ProblemSpec& spec, const RunConfig& cfg);

// Reproduces the bundled crossover instance: informed memoryless sampling,
// both fixed-set curves, their envelope, and the uninformed-decoder bound
// (raw and convexified).
RunOutput run_example2(const ProblemSpec& spec, const RunConfig& cfg);

RunOutput run_fixed_set(const ProblemSpec& spec, const SubsetIndex& subset, bool pe_route,
                        const RunConfig& cfg);
RunOutput run_irs(const ProblemSpec& spec, const RunConfig& cfg);
RunOutput run_mrs_informed(const ProblemSpec& spec, const RunConfig& cfg);
RunOutput run_mrs_uninformed_bound(const ProblemSpec& spec, const RunConfig& cfg);

// Brute-force cross-check of the fixed-set solver on the spec instance.
RunOutput run_oracle(const ProblemSpec& spec, const SubsetIndex& subset, int q, int points,
                     const RunConfig& cfg);

}  // namespace srdf
