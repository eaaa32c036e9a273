#include "srdf/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "srdf/emit.hpp"
#include "srdf/oracle.hpp"
#include "srdf/rd_solver.hpp"

namespace srdf {

namespace {

void emit_result(RunOutput& out, const ProblemSpec& spec, const RunConfig& cfg,
                 const std::string& name, const SrdfResult& result) {
    out.curves.emplace(name, result);
    if (!cfg.write_files) return;
    std::filesystem::create_directories(cfg.out_dir);
    CurveEmission em = tabulate_curve(result, name, spec.options.grid);
    const std::string path = cfg.out_dir + "/" + name + "." + cfg.format;
    if (cfg.format == "json") {
        write_file(path, to_json(em, spec_hash(spec), spec.options.seed, kToolVersion));
    } else {
        write_file(path, to_csv(em));
    }
    out.files.push_back(path);
}

void write_report(RunOutput& out, const ProblemSpec& spec, const RunConfig& cfg,
                  const std::string& command) {
    if (!cfg.write_files) return;
    std::ostringstream rep;
    rep << "{\n  \"tool\": \"srdf\",\n  \"version\": \"" << kToolVersion << "\",\n";
    rep << "  \"command\": \"" << command << "\",\n";
    rep << "  \"spec_hash\": \"" << spec_hash(spec) << "\",\n";
    rep << "  \"seed\": " << spec.options.seed << ",\n";
    rep << "  \"threads\": " << spec.options.threads << ",\n  \"curves\": [\n";
    std::size_t idx = 0;
    for (const auto& [name, res] : out.curves) {
        rep << "    {\"name\": \"" << name << "\", \"delta_min\": "
            << format_sig9(res.delta_range.delta_min)
            << ", \"delta_max\": " << format_sig9(res.delta_range.delta_max)
            << ", \"vertices\": " << res.curve.vertices.size()
            << ", \"enumerated\": " << res.diag.enumerated << ", \"solved\": " << res.diag.solved
            << ", \"ba_runs\": " << res.diag.ba_runs << ", \"iterations\": " << res.diag.iterations
            << ", \"nonconverged\": " << res.diag.nonconverged << ", \"witnesses\": [";
        for (std::size_t i = 0; i < res.samplers.size(); ++i) {
            rep << (i ? ", " : "") << "\"" << res.samplers[i].label << "\"";
        }
        rep << "]}" << (++idx < out.curves.size() ? "," : "") << "\n";
    }
    rep << "  ]\n}\n";
    out.report_path = cfg.out_dir + "/report.json";
    write_file(out.report_path, rep.str());
}

void finish(RunOutput& out) {
    for (const auto& [name, res] : out.curves) {
        if (res.diag.nonconverged > 0 && out.exit_code == kExitOk) {
            out.exit_code = kExitNonConvergence;
            out.message = "curve '" + name + "' has non-converged solver points";
        }
    }
}

template <typename Fn>
RunOutput guarded(const ProblemSpec& spec, const RunConfig& cfg, const std::string& command,
                  Fn&& fn) {
    RunOutput out;
    try {
        fn(out);
        write_report(out, spec, cfg, command);
        finish(out);
    } catch (const cap_exceeded_error& e) {
        out.exit_code = kExitCapExceeded;
        out.message = e.what();
    } catch (const std::invalid_argument& e) {
        out.exit_code = kExitValidation;
        out.message = e.what();
    } catch (const std::runtime_error& e) {
        out.exit_code = kExitIo;
        out.message = e.what();
    }
    return out;
}

}  // namespace

RunOutput run_example1(const ProblemSpec& spec, const RunConfig& cfg) {
    return guarded(spec, cfg, "example1", [&](RunOutput& out) {
        const JointPmf pmf = spec.source_pmf();
        const DistortionTable d = spec.distortion_table();
        emit_result(out, spec, cfg, "r_fixed_1",
                    fixed_set_srdf(pmf, d, SubsetIndex({0}), spec.options));
        emit_result(out, spec, cfg, "r_fixed_2",
                    fixed_set_srdf(pmf, d, SubsetIndex({1}), spec.options));
        emit_result(out, spec, cfg, "r_irs", irs_srdf(pmf, d, spec.k, spec.options));
    });
}

RunOutput run_example2(const ProblemSpec& spec, const RunConfig& cfg) {
    return guarded(spec, cfg, "example2", [&](RunOutput& out) {
        const JointPmf pmf = spec.source_pmf();
        const DistortionTable d = spec.distortion_table();
        emit_result(out, spec, cfg, "r_mrs_informed",
                    mrs_informed_srdf(pmf, d, spec.k, spec.options));
        emit_result(out, spec, cfg, "r_fixed_1",
                    fixed_set_srdf(pmf, d, SubsetIndex({0}), spec.options));
        emit_result(out, spec, cfg, "r_fixed_2",
                    fixed_set_srdf(pmf, d, SubsetIndex({1}), spec.options));
        emit_result(out, spec, cfg, "r_irs", irs_srdf(pmf, d, spec.k, spec.options));
        auto [raw, convexified] = mrs_uninformed_bound(pmf, d, spec.k, spec.options);
        emit_result(out, spec, cfg, "r_uninformed_raw", raw);
        emit_result(out, spec, cfg, "r_uninformed_convexified", convexified);
    });
}

RunOutput run_fixed_set(const ProblemSpec& spec, const SubsetIndex& subset, bool pe_route,
                        const RunConfig& cfg) {
    const std::string command = pe_route ? "pe-fixed-set" : "fixed-set";
    return guarded(spec, cfg, command, [&](RunOutput& out) {
        const JointPmf pmf = spec.source_pmf();
        std::string name = "r_fixed";
        for (std::size_t i : subset.members()) name += "_" + spec.components[i].name;
        if (pe_route) {
            if (spec.distortion_table().any_forbidden()) {
                throw std::invalid_argument(
                    "pe-fixed-set: spec distortion must be the probability-of-error table");
            }
            emit_result(out, spec, cfg, name, pe_fixed_set_srdf(pmf, subset, spec.options));
        } else {
            emit_result(out, spec, cfg, name,
                        fixed_set_srdf(pmf, spec.distortion_table(), subset, spec.options));
        }
    });
}

RunOutput run_irs(const ProblemSpec& spec, const RunConfig& cfg) {
    return guarded(spec, cfg, "irs", [&](RunOutput& out) {
        emit_result(out, spec, cfg, "r_irs",
                    irs_srdf(spec.source_pmf(), spec.distortion_table(), spec.k, spec.options));
    });
}

RunOutput run_mrs_informed(const ProblemSpec& spec, const RunConfig& cfg) {
    return guarded(spec, cfg, "mrs-informed", [&](RunOutput& out) {
        emit_result(out, spec, cfg, "r_mrs_informed",
                    mrs_informed_srdf(spec.source_pmf(), spec.distortion_table(), spec.k,
                                      spec.options));
    });
}

RunOutput run_mrs_uninformed_bound(const ProblemSpec& spec, const RunConfig& cfg) {
    return guarded(spec, cfg, "mrs-uninformed-bound", [&](RunOutput& out) {
        auto [raw, convexified] =
            mrs_uninformed_bound(spec.source_pmf(), spec.distortion_table(), spec.k, spec.options);
        emit_result(out, spec, cfg, "r_uninformed_raw", raw);
        emit_result(out, spec, cfg, "r_uninformed_convexified", convexified);
    });
}

RunOutput run_oracle(const ProblemSpec& spec, const SubsetIndex& subset, int q, int points,
                     const RunConfig& cfg) {
    return guarded(spec, cfg, "oracle", [&](RunOutput& out) {
        const JointPmf pmf = spec.source_pmf();
        const DistortionTable d = spec.distortion_table();
        RdInstance inst{marginal(pmf, subset).probs(), modified_distortion(pmf, d, subset)};
        const double lo = inst.delta_min();
        const double hi = inst.delta_max();
        auto grid = linspace(lo, hi, std::max(points + 2, 3));
        // kernel grids are much larger objects than sampler maps; floor the cap
        const std::uint64_t kernel_cap = std::max<std::uint64_t>(spec.options.cap, 10'000'000);
        auto oracle_pts = oracle::brute_force_rate(inst, grid, q, kernel_cap,
                                                   spec.options.threads);
        std::ostringstream csv;
        csv << "delta,oracle_rate,solver_rate,gap\n";
        double max_gap = 0.0;
        for (const auto& p : oracle_pts) {
            const double solver =
                rate_at_distortion(inst, p.delta, 1e-6, spec.options.tol, spec.options.max_iter)
                    .rate;
            const double gap = std::abs(p.rate - solver);
            max_gap = std::max(max_gap, gap);
            csv << format_sig9(p.delta) << "," << format_sig9(p.rate) << ","
                << format_sig9(solver) << "," << format_sig9(gap) << "\n";
        }
        if (cfg.write_files) {
            std::filesystem::create_directories(cfg.out_dir);
            const std::string path = cfg.out_dir + "/oracle_fixed_set.csv";
            write_file(path, csv.str());
            out.files.push_back(path);
        }
        out.message = "max |oracle - solver| = " + format_sig9(max_gap) + " bits";
    });
}

}  // namespace srdf
