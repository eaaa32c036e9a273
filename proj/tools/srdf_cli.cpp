// Command-line front end: computes sampling rate-distortion curves for a
// problem-spec file (or the bundled examples) and writes CSV/JSON curve
// files plus a JSON run report.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "srdf/runner.hpp"

namespace {

struct CommonArgs {
    std::string spec_path;
    std::string out_dir = "out";
    std::string format = "csv";
    // negative sentinel: keep the spec file's (or built-in) value
    double lambda_min = -1, lambda_max = -1, tol = -1;
    int lambda_points = -1, max_iter = -1, grid = -1, threads = -1;
    long long cap = -1, seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_spec) {
    if (needs_spec) {
        cmd->add_option("--spec", a.spec_path, "problem-spec JSON file")->required();
    }
    cmd->add_option("--out", a.out_dir, "output directory")->envname("SRDF_OUT");
    cmd->add_option("--format", a.format, "csv or json")->envname("SRDF_FORMAT");
    cmd->add_option("--lambda-min", a.lambda_min)->envname("SRDF_LAMBDA_MIN");
    cmd->add_option("--lambda-max", a.lambda_max)->envname("SRDF_LAMBDA_MAX");
    cmd->add_option("--lambda-points", a.lambda_points)->envname("SRDF_LAMBDA_POINTS");
    cmd->add_option("--tol", a.tol)->envname("SRDF_TOL");
    cmd->add_option("--max-iter", a.max_iter)->envname("SRDF_MAX_ITER");
    cmd->add_option("--grid", a.grid)->envname("SRDF_GRID");
    cmd->add_option("--cap", a.cap)->envname("SRDF_CAP");
    cmd->add_option("--threads", a.threads)->envname("SRDF_THREADS");
    cmd->add_option("--seed", a.seed)->envname("SRDF_SEED");
}

void apply_overrides(srdf::ProblemSpec& spec, const CommonArgs& a) {
    auto& o = spec.options;
    if (a.lambda_min > 0) o.lambda_min = a.lambda_min;
    if (a.lambda_max > 0) o.lambda_max = a.lambda_max;
    if (a.lambda_points > 1) o.lambda_points = a.lambda_points;
    if (a.tol > 0) o.tol = a.tol;
    if (a.max_iter > 0) o.max_iter = a.max_iter;
    if (a.grid > 1) o.grid = a.grid;
    if (a.cap > 0) o.cap = static_cast<std::uint64_t>(a.cap);
    if (a.threads >= 0) o.threads = a.threads;
    if (a.seed >= 0) o.seed = static_cast<std::uint64_t>(a.seed);
}

int load_spec(const CommonArgs& a, srdf::ProblemSpec& spec) {
    std::ifstream f(a.spec_path);
    if (!f) {
        std::cerr << "error: cannot read spec file: " << a.spec_path << "\n";
        return srdf::kExitIo;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    auto parsed = srdf::parse_problem_spec(buf.str());
    if (!parsed.ok()) {
        std::cerr << "spec validation failed:\n";
        for (const auto& e : parsed.errors) std::cerr << "  " << e << "\n";
        return srdf::kExitValidation;
    }
    spec = std::move(*parsed.spec);
    return srdf::kExitOk;
}

int report(const srdf::RunOutput& out) {
    if (out.exit_code != srdf::kExitOk) {
        std::cerr << "error: " << out.message << "\n";
    } else {
        for (const auto& f : out.files) std::cout << "wrote " << f << "\n";
        if (!out.report_path.empty()) std::cout << "wrote " << out.report_path << "\n";
        if (!out.message.empty()) std::cout << out.message << "\n";
    }
    return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sampling rate-distortion curves for finite multiple sources"};
    app.require_subcommand(1);

    CommonArgs fixed_args, pe_args, irs_args, mrs_args, unf_args, oracle_args, ex1_args, ex2_args;
    std::string fixed_set, pe_set, oracle_set;
    int oracle_q = 40, oracle_points = 5;
    double ex2_p = 0.1, ex2_q = 0.5;

    auto* fixed = app.add_subcommand("fixed-set", "curve for one fixed sampling subset");
    add_common(fixed, fixed_args, true);
    fixed->add_option("--set", fixed_set, "comma-separated component names")->required();

    auto* pe = app.add_subcommand("pe-fixed-set",
                                  "fixed-set curve via the probability-of-error reduction");
    add_common(pe, pe_args, true);
    pe->add_option("--set", pe_set, "comma-separated component names")->required();

    auto* irs = app.add_subcommand("irs", "envelope over all k-subsets (source-blind sampling)");
    add_common(irs, irs_args, true);

    auto* mrs = app.add_subcommand("mrs-informed",
                                   "source-dependent sampling, decoder sees the sampled sets");
    add_common(mrs, mrs_args, true);

    auto* unf = app.add_subcommand("mrs-uninformed-bound",
                                   "upper bound when the decoder does not see the sampled sets");
    add_common(unf, unf_args, true);

    auto* orc = app.add_subcommand("oracle", "brute-force cross-check of the fixed-set solver");
    add_common(orc, oracle_args, true);
    orc->add_option("--set", oracle_set, "comma-separated component names")->required();
    orc->add_option("--q", oracle_q, "kernel grid resolution");
    orc->add_option("--points", oracle_points, "number of interior distortion targets");

    auto* ex1 = app.add_subcommand("example1", "bundled erasure/flip instance");
    add_common(ex1, ex1_args, false);

    auto* ex2 = app.add_subcommand("example2", "bundled crossover instance");
    add_common(ex2, ex2_args, false);
    ex2->add_option("--p", ex2_p, "first-bit bias (default 0.1)");
    ex2->add_option("--q", ex2_q, "crossover of the second bit (default 0.5)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fixed->parsed() || pe->parsed() || orc->parsed()) {
            const CommonArgs& a = fixed->parsed() ? fixed_args : pe->parsed() ? pe_args : oracle_args;
            srdf::ProblemSpec spec;
            if (int rc = load_spec(a, spec); rc != srdf::kExitOk) return rc;
            apply_overrides(spec, a);
            srdf::RunConfig cfg{a.out_dir, a.format, true};
            const std::string& set =
                fixed->parsed() ? fixed_set : pe->parsed() ? pe_set : oracle_set;
            srdf::SubsetIndex subset;
            try {
                subset = srdf::parse_subset(spec, set);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return srdf::kExitValidation;
            }
            if (orc->parsed()) {
                return report(srdf::run_oracle(spec, subset, oracle_q, oracle_points, cfg));
            }
            return report(srdf::run_fixed_set(spec, subset, pe->parsed(), cfg));
        }
        if (irs->parsed() || mrs->parsed() || unf->parsed()) {
            const CommonArgs& a = irs->parsed() ? irs_args : mrs->parsed() ? mrs_args : unf_args;
            srdf::ProblemSpec spec;
            if (int rc = load_spec(a, spec); rc != srdf::kExitOk) return rc;
            apply_overrides(spec, a);
            srdf::RunConfig cfg{a.out_dir, a.format, true};
            if (irs->parsed()) return report(srdf::run_irs(spec, cfg));
            if (mrs->parsed()) return report(srdf::run_mrs_informed(spec, cfg));
            return report(srdf::run_mrs_uninformed_bound(spec, cfg));
        }
        if (ex1->parsed()) {
            srdf::ProblemSpec spec = srdf::example1_spec();
            apply_overrides(spec, ex1_args);
            srdf::RunConfig cfg{ex1_args.out_dir, ex1_args.format, true};
            return report(srdf::run_example1(spec, cfg));
        }
        if (ex2->parsed()) {
            srdf::ProblemSpec spec = srdf::example2_spec(ex2_p, ex2_q);
            apply_overrides(spec, ex2_args);
            srdf::RunConfig cfg{ex2_args.out_dir, ex2_args.format, true};
            return report(srdf::run_example2(spec, cfg));
        }
    } catch (const srdf::cap_exceeded_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return srdf::kExitCapExceeded;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return srdf::kExitValidation;
    }
    return srdf::kExitOk;
}
