#include "srdf/srdf.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <stdexcept>

#include "srdf/parallel.hpp"

namespace srdf {

namespace {

constexpr double kCoverTol = 1e-9;

std::string subset_label(const JointPmf& pmf, const SubsetIndex& subset) {
    std::string s = "A{";
    for (std::size_t j = 0; j < subset.members().size(); ++j) {
        if (j) s += ",";
        s += pmf.component(subset.members()[j]).name;
    }
    return s + "}";
}

// Converts a solved curve into pooled points, registering per-point witness
// payloads and the sampler's own convex curve. Non-convergence is flagged
// only for points that survive onto the hull; discarded solver residue
// cannot affect the reported curve.
std::vector<CurvePoint> add_sampler_curve(SrdfResult& res, const RdCurve& rc, std::int64_t sid) {
    std::vector<CurvePoint> pts;
    pts.reserve(rc.points.size());
    const std::int64_t payload_base = static_cast<std::int64_t>(res.vertex_witnesses.size());
    for (const auto& rp : rc.points) {
        CurvePoint cp;
        cp.delta = rp.delta + res.delta_offset;
        cp.rate = std::max(rp.rate, 0.0);
        cp.witness = sid;
        cp.lambda = rp.lambda;
        cp.payload = static_cast<std::int64_t>(res.vertex_witnesses.size());
        VertexWitness vw;
        vw.sampler_id = sid;
        vw.delta = cp.delta;
        vw.rate = cp.rate;
        vw.parts.push_back(WitnessPart{1.0, rp.lambda, rp.kernels});
        res.vertex_witnesses.push_back(std::move(vw));
        pts.push_back(std::move(cp));

        res.diag.ba_runs += 1;
        res.diag.iterations += rp.iterations;
    }
    PiecewiseLinearCurve own = lower_convex_envelope(pts);
    for (const auto& v : own.vertices) {
        if (v.payload < 0) continue;
        const auto& rp = rc.points[static_cast<std::size_t>(v.payload - payload_base)];
        if (!rp.converged) res.diag.nonconverged += 1;
    }
    if (res.sampler_curves.size() <= static_cast<std::size_t>(sid)) {
        res.sampler_curves.resize(sid + 1);
    }
    res.sampler_curves[sid] = own;
    return own.vertices;
}

bool sampler_covers(const SrdfResult& res, std::int64_t sid, const CurvePoint& v) {
    if (sid < 0 || static_cast<std::size_t>(sid) >= res.sampler_curves.size()) return false;
    const auto& c = res.sampler_curves[sid];
    if (c.empty()) return false;
    if (v.delta < c.delta_lo() - 1e-12 * std::max(1.0, std::abs(v.delta))) return false;
    return std::abs(c.eval(v.delta) - v.rate) <= kCoverTol;
}

// A segment whose span is reproduced by one endpoint's sampler needs no
// time-sharing; mark it pure so witnesses degenerate where they can.
void refine_segments(SrdfResult& res) {
    auto& curve = res.curve;
    for (std::size_t i = 0; i < curve.segments.size(); ++i) {
        auto& seg = curve.segments[i];
        const CurvePoint& vl = curve.vertices[i];
        const CurvePoint& vr = curve.vertices[i + 1];
        seg.witness_left = vl.witness;
        seg.witness_right = vr.witness;
        if (vl.witness >= 0 && vl.witness == vr.witness) {
            seg.pure = true;
            seg.pure_witness = vl.witness;
            continue;
        }
        std::int64_t pick = -1;
        const bool left_ok = vl.witness >= 0 && sampler_covers(res, vl.witness, vr);
        const bool right_ok = vr.witness >= 0 && sampler_covers(res, vr.witness, vl);
        if (left_ok && right_ok) {
            pick = std::min(vl.witness, vr.witness);
        } else if (left_ok) {
            pick = vl.witness;
        } else if (right_ok) {
            pick = vr.witness;
        }
        seg.pure = pick >= 0;
        seg.pure_witness = pick;
    }
}

void finish_curve(SrdfResult& res, std::vector<CurvePoint> pool, double lo, double hi) {
    res.curve = lower_convex_envelope(std::move(pool));
    res.curve = restrict_curve(res.curve, lo, hi);
    refine_segments(res);
}

std::string bytes_fingerprint(const std::vector<std::pair<double, RdInstance>>& branches) {
    std::string s;
    auto put = [&s](const void* p, std::size_t n) {
        s.append(static_cast<const char*>(p), n);
    };
    for (const auto& [w, inst] : branches) {
        put(&w, sizeof(w));
        std::size_t nz = inst.source.size();
        put(&nz, sizeof(nz));
        put(inst.source.data(), inst.source.size() * sizeof(double));
        put(inst.rho.values().data(), inst.rho.values().size() * sizeof(double));
        put(inst.rho.forbidden().data(), inst.rho.forbidden().size());
    }
    return s;
}

}  // namespace

std::string SrdfResult::witness_label(std::int64_t id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= samplers.size()) return "?";
    return samplers[id].label;
}

std::pair<double, double> SrdfResult::replay(std::int64_t payload) const {
    if (payload < 0 || static_cast<std::size_t>(payload) >= vertex_witnesses.size()) {
        throw std::out_of_range("SrdfResult::replay: bad payload index");
    }
    const VertexWitness& vw = vertex_witnesses[payload];
    const auto& branches = sampler_instances.at(vw.sampler_id);
    double delta = 0.0, rate = 0.0;
    for (const auto& part : vw.parts) {
        double d = 0.0, r = 0.0;
        for (std::size_t b = 0; b < branches.size(); ++b) {
            d += branches[b].first * expected_distortion(branches[b].second, part.kernels[b]);
            r += branches[b].first * kernel_rate(branches[b].second, part.kernels[b]);
        }
        delta += part.weight * d;
        rate += part.weight * r;
    }
    return {delta + delta_offset, rate};
}

DistortionTable probability_of_error_table(const JointPmf& pmf) {
    const std::size_t n = pmf.size();
    std::vector<double> values(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) values[i * n + i] = 0.0;
    return DistortionTable(n, n, std::move(values), {});
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("linspace: n must be positive");
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo + step * i;
    g.back() = hi;
    return g;
}

SrdfResult fixed_set_srdf(const JointPmf& pmf, const DistortionTable& d, const SubsetIndex& subset,
                          const SolverOptions& opts) {
    RdInstance inst{marginal(pmf, subset).probs(), modified_distortion(pmf, d, subset)};
    RdCurve rc = sweep(inst, opts.schedule(), opts.tol, opts.max_iter, opts.threads);

    SrdfResult res;
    res.samplers.push_back(SamplerInfo{0, subset_label(pmf, subset), 0, subset, std::nullopt});
    res.sampler_instances.push_back({{1.0, inst}});
    auto pool = add_sampler_curve(res, rc, 0);
    res.diag.enumerated = 1;
    res.diag.solved = 1;
    res.delta_range.delta_min = rc.delta_min;
    res.delta_range.delta_max = rc.delta_max;
    finish_curve(res, std::move(pool), rc.delta_min, rc.delta_max);
    return res;
}

SrdfResult pe_fixed_set_srdf(const JointPmf& pmf, const SubsetIndex& subset,
                             const SolverOptions& opts) {
    if (subset.empty()) throw std::invalid_argument("pe_fixed_set_srdf: empty subset");
    const bool proper = subset.size() < pmf.num_components();

    JointPmf pa = marginal(pmf, subset);
    const std::size_t na = pa.size();
    std::vector<double> alpha(na, 1.0);
    double shift = 0.0;
    if (proper) {
        AlphaMap am = alpha_map(pmf, subset);
        alpha = am.alpha;
        shift = 1.0 - am.expected_alpha;
    }

    // error indicator weighted by the per-sample maximum posterior
    std::vector<double> values(na * na, 0.0);
    for (std::size_t x = 0; x < na; ++x) {
        for (std::size_t y = 0; y < na; ++y) {
            if (x != y) values[x * na + y] = alpha[x];
        }
    }
    RdInstance inst{pa.probs(), DistortionTable(na, na, std::move(values), {})};
    RdCurve rc = sweep(inst, opts.schedule(), opts.tol, opts.max_iter, opts.threads);

    SrdfResult res;
    res.delta_offset = shift;
    res.samplers.push_back(SamplerInfo{0, subset_label(pmf, subset), 0, subset, std::nullopt});
    res.sampler_instances.push_back({{1.0, inst}});
    auto pool = add_sampler_curve(res, rc, 0);
    res.diag.enumerated = 1;
    res.diag.solved = 1;
    res.delta_range = pe_extremes(pmf, subset);
    finish_curve(res, std::move(pool), rc.delta_min + shift, rc.delta_max + shift);
    return res;
}

std::size_t map_estimator(const JointPmf& pmf, const SubsetIndex& subset,
                          std::size_t y_subset_flat) {
    AlphaMap am = alpha_map(pmf, subset);
    if (y_subset_flat >= am.witness.size()) {
        throw std::invalid_argument("map_estimator: symbol out of range");
    }
    return am.witness[y_subset_flat];
}

SrdfResult irs_srdf(const JointPmf& pmf, const DistortionTable& d, std::size_t k,
                    const SolverOptions& opts) {
    SubsetFamily family = SubsetFamily::all_k_subsets(pmf.num_components(), k);

    SrdfResult res;
    std::vector<RdCurve> curves(family.size());
    std::vector<RdInstance> insts(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        insts[i] = RdInstance{marginal(pmf, family.sets[i]).probs(),
                              modified_distortion(pmf, d, family.sets[i])};
    }
    parallel_for(family.size(), opts.threads, [&](std::size_t i) {
        curves[i] = sweep(insts[i], opts.schedule(), opts.tol, opts.max_iter, 1);
    });

    std::vector<CurvePoint> pool;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        res.samplers.push_back(SamplerInfo{static_cast<std::int64_t>(i),
                                           subset_label(pmf, family.sets[i]), 0, family.sets[i],
                                           std::nullopt});
        res.sampler_instances.push_back({{1.0, insts[i]}});
        auto pts = add_sampler_curve(res, curves[i], static_cast<std::int64_t>(i));
        pool.insert(pool.end(), pts.begin(), pts.end());
        if (curves[i].delta_min < lo) {
            lo = curves[i].delta_min;
            res.delta_range.min_witness = constant_sampler(pmf.size(), family, i);
        }
        hi = curves[i].delta_max;
    }
    res.diag.enumerated = family.size();
    res.diag.solved = family.size();
    res.delta_range.delta_min = lo;
    res.delta_range.delta_max = hi;
    finish_curve(res, std::move(pool), lo, hi);
    return res;
}

SrdfResult mrs_informed_srdf(const JointPmf& pmf, const DistortionTable& d, std::size_t k,
                             const SolverOptions& opts) {
    SubsetFamily family = SubsetFamily::all_k_subsets(pmf.num_components(), k);
    auto samplers = enumerate_point_mass_samplers(pmf.size(), family, opts.cap);

    SrdfResult res;
    res.diag.enumerated = samplers.size();

    // Samplers inducing identical branch decompositions solve identically;
    // keep the lowest-encoding representative of each class.
    std::map<std::string, std::size_t> seen;
    std::vector<std::vector<std::pair<double, RdInstance>>> branch_sets;
    std::vector<const PointMassSampler*> reps;
    for (const auto& h : samplers) {
        auto branches = sampler_branch_problems(pmf, d, family, h);
        std::string fp = bytes_fingerprint(branches);
        if (seen.emplace(fp, reps.size()).second) {
            branch_sets.push_back(std::move(branches));
            reps.push_back(&h);
        }
    }
    res.diag.solved = reps.size();

    std::vector<RdCurve> curves(reps.size());
    parallel_for(reps.size(), opts.threads, [&](std::size_t i) {
        curves[i] = branch_sweep(branch_sets[i], opts.schedule(), opts.tol, opts.max_iter, 1);
    });

    std::vector<CurvePoint> pool;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const std::uint64_t enc = reps[i]->encoding(family);
        res.samplers.push_back(SamplerInfo{static_cast<std::int64_t>(i),
                                           "h" + std::to_string(enc), enc, std::nullopt, *reps[i]});
        res.sampler_instances.push_back(branch_sets[i]);
        auto pts = add_sampler_curve(res, curves[i], static_cast<std::int64_t>(i));
        pool.insert(pool.end(), pts.begin(), pts.end());
    }

    res.delta_range = mrs_extremes(pmf, d, k, opts.cap);
    finish_curve(res, std::move(pool), res.delta_range.delta_min, res.delta_range.delta_max);
    return res;
}

namespace {

struct UninformedSolve {
    SubsetFamily family;
    std::vector<const PointMassSampler*> reps;
    std::vector<RdInstance> composites;
    std::vector<RdCurve> curves;
    std::uint64_t enumerated = 0;
    double delta_lo = 0.0;  // best achievable floor over samplers
    double delta_hi = 0.0;  // distortion ceiling of the unsampled problem
};

UninformedSolve solve_uninformed(const JointPmf& pmf, const DistortionTable& d, std::size_t k,
                                 const SolverOptions& opts,
                                 std::vector<PointMassSampler>& sampler_storage) {
    UninformedSolve out;
    out.family = SubsetFamily::all_k_subsets(pmf.num_components(), k);
    sampler_storage = enumerate_point_mass_samplers(pmf.size(), out.family, opts.cap);
    out.enumerated = sampler_storage.size();

    std::map<std::string, std::size_t> seen;
    for (const auto& h : sampler_storage) {
        RdInstance comp = composite_distortion(pmf, d, out.family, h);
        std::string fp = bytes_fingerprint({{1.0, comp}});
        if (seen.emplace(fp, out.reps.size()).second) {
            out.composites.push_back(std::move(comp));
            out.reps.push_back(&h);
        }
    }
    out.curves.resize(out.reps.size());
    parallel_for(out.reps.size(), opts.threads, [&](std::size_t i) {
        out.curves[i] = sweep(out.composites[i], opts.schedule(), opts.tol, opts.max_iter, 1);
    });

    out.delta_lo = std::numeric_limits<double>::infinity();
    for (const auto& comp : out.composites) out.delta_lo = std::min(out.delta_lo, comp.delta_min());
    RdInstance whole{pmf.probs(), d};
    out.delta_hi = whole.delta_max();
    return out;
}

}  // namespace

std::pair<SrdfResult, SrdfResult> mrs_uninformed_bound(const JointPmf& pmf,
                                                       const DistortionTable& d, std::size_t k,
                                                       const SolverOptions& opts) {
    std::vector<PointMassSampler> storage;
    UninformedSolve sol = solve_uninformed(pmf, d, k, opts, storage);

    SrdfResult convex;
    convex.diag.enumerated = sol.enumerated;
    convex.diag.solved = sol.reps.size();
    std::vector<CurvePoint> pool;
    for (std::size_t i = 0; i < sol.reps.size(); ++i) {
        const std::uint64_t enc = sol.reps[i]->encoding(sol.family);
        convex.samplers.push_back(SamplerInfo{static_cast<std::int64_t>(i),
                                              "h" + std::to_string(enc), enc, std::nullopt,
                                              *sol.reps[i]});
        convex.sampler_instances.push_back({{1.0, sol.composites[i]}});
        auto pts = add_sampler_curve(convex, sol.curves[i], static_cast<std::int64_t>(i));
        pool.insert(pool.end(), pts.begin(), pts.end());
    }
    convex.delta_range.delta_min = sol.delta_lo;
    convex.delta_range.delta_max = sol.delta_hi;
    finish_curve(convex, std::move(pool), sol.delta_lo, sol.delta_hi);

    // Raw bound: pointwise minimum over sampler curves on the evaluation grid;
    // reported without convexification since its convexity is not guaranteed.
    SrdfResult raw;
    raw.diag = convex.diag;
    raw.samplers = convex.samplers;
    raw.sampler_instances = convex.sampler_instances;
    raw.sampler_curves = convex.sampler_curves;
    raw.vertex_witnesses = convex.vertex_witnesses;
    raw.delta_range = convex.delta_range;
    auto grid = linspace(sol.delta_lo, sol.delta_hi, opts.grid);
    auto mins = pointwise_min(raw.sampler_curves, grid);
    for (auto& p : mins) {
        const auto& c = raw.sampler_curves[p.witness];
        p.lambda = -c.slope_at(p.delta);
        // witness payload: the winning curve's bracketing points, time-shared
        VertexWitness vw;
        vw.sampler_id = p.witness;
        vw.delta = p.delta;
        vw.rate = p.rate;
        const std::ptrdiff_t s = c.segment_at(p.delta);
        auto part_of = [&](const CurvePoint& v, double weight) {
            const auto& src = raw.vertex_witnesses[v.payload];
            return WitnessPart{weight, src.parts.front().lambda, src.parts.front().kernels};
        };
        if (s < 0 || p.delta >= c.delta_hi()) {
            vw.parts.push_back(part_of(c.vertices.back(), 1.0));
        } else {
            const CurvePoint& l = c.vertices[s];
            const CurvePoint& r = c.vertices[s + 1];
            const double theta = (r.delta - p.delta) / (r.delta - l.delta);
            if (theta >= 1.0 - 1e-12) {
                vw.parts.push_back(part_of(l, 1.0));
            } else if (theta <= 1e-12) {
                vw.parts.push_back(part_of(r, 1.0));
            } else {
                vw.parts.push_back(part_of(l, theta));
                vw.parts.push_back(part_of(r, 1.0 - theta));
            }
        }
        p.payload = static_cast<std::int64_t>(raw.vertex_witnesses.size());
        raw.vertex_witnesses.push_back(std::move(vw));
    }
    raw.curve.vertices = std::move(mins);
    raw.curve.rebuild_segments();
    for (auto& seg : raw.curve.segments) {
        seg.pure = seg.witness_left == seg.witness_right;
        seg.pure_witness = seg.pure ? seg.witness_left : -1;
    }
    return {std::move(raw), std::move(convex)};
}

namespace {

// Objective I(Z ^ Y) + lambda E[d] for a deterministic sampler against a fixed
// reproduction kernel on composite atoms; +inf when the kernel puts mass on a
// forbidden pair reachable with positive probability.
double sampler_objective(const JointPmf& pmf, const DistortionTable& d, const SubsetFamily& family,
                         const std::vector<SplitIndexer>& idxs,
                         const std::vector<std::size_t>& atom_base,
                         const PointMassSampler& h, const Kernel& w, double lambda) {
    const std::size_t ny = d.repro_size();
    std::vector<double> pz(w.from, 0.0);
    double edist = 0.0;
    for (std::size_t ai = 0; ai < family.size(); ++ai) {
        const SplitIndexer& idx = idxs[ai];
        for (std::size_t xa = 0; xa < idx.subset_size(); ++xa) {
            for (std::size_t c = 0; c < idx.complement_size(); ++c) {
                const std::size_t x = idx.fuse(xa, c);
                if (h.assign[x] != ai) continue;
                const double px = pmf.prob(x);
                if (px <= 0.0) continue;
                const std::size_t z = atom_base[ai] + xa;
                pz[z] += px;
                for (std::size_t y = 0; y < ny; ++y) {
                    const double wy = w(z, y);
                    if (wy <= 0.0) continue;
                    if (d.is_forbidden(x, y)) return std::numeric_limits<double>::infinity();
                    edist += px * wy * d.at(x, y);
                }
            }
        }
    }
    std::vector<double> q(ny, 0.0);
    for (std::size_t z = 0; z < w.from; ++z) {
        for (std::size_t y = 0; y < ny; ++y) q[y] += pz[z] * w(z, y);
    }
    double info = 0.0;
    for (std::size_t z = 0; z < w.from; ++z) {
        if (pz[z] <= 0.0) continue;
        for (std::size_t y = 0; y < ny; ++y) {
            const double wy = w(z, y);
            if (wy > 0.0) info += pz[z] * wy * std::log2(wy / q[y]);
        }
    }
    return std::max(info, 0.0) + lambda * edist;
}

}  // namespace

SrdfResult mrs_uninformed_randomized_refine(const JointPmf& pmf, const DistortionTable& d,
                                            std::size_t k, const SolverOptions& opts) {
    std::vector<PointMassSampler> storage;
    UninformedSolve sol = solve_uninformed(pmf, d, k, opts, storage);
    const SubsetFamily& family = sol.family;

    std::vector<SplitIndexer> idxs;
    std::vector<std::size_t> atom_base;
    std::size_t natoms = 0;
    for (const auto& a : family.sets) {
        idxs.emplace_back(pmf_dims(pmf), a);
        atom_base.push_back(natoms);
        natoms += idxs.back().subset_size();
    }

    SrdfResult res;
    res.diag.enumerated = sol.enumerated;
    res.diag.solved = sol.reps.size();
    res.delta_range.delta_min = sol.delta_lo;
    res.delta_range.delta_max = sol.delta_hi;

    std::vector<CurvePoint> pool;
    std::map<std::uint64_t, std::int64_t> sampler_ids;
    auto register_sampler = [&](const PointMassSampler& h) -> std::int64_t {
        const std::uint64_t enc = h.encoding(family);
        auto it = sampler_ids.find(enc);
        if (it != sampler_ids.end()) return it->second;
        std::int64_t id = static_cast<std::int64_t>(res.samplers.size());
        res.samplers.push_back(SamplerInfo{id, "h" + std::to_string(enc), enc, std::nullopt, h});
        res.sampler_instances.push_back({{1.0, composite_distortion(pmf, d, family, h)}});
        sampler_ids.emplace(enc, id);
        return id;
    };

    auto schedule = opts.schedule();
    schedule.insert(schedule.begin(), 0.0);
    for (double lambda : schedule) {
        // best deterministic seed at this slope
        double best_obj = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        std::vector<RdPoint> solved(sol.reps.size());
        for (std::size_t i = 0; i < sol.reps.size(); ++i) {
            solved[i] = ba_fixed_slope(sol.composites[i], lambda, opts.tol, opts.max_iter);
            const double obj = solved[i].rate + lambda * solved[i].delta;
            if (obj < best_obj) {
                best_obj = obj;
                best_i = i;
            }
        }
        PointMassSampler h = *sol.reps[best_i];
        RdPoint pt = solved[best_i];
        const double seed_obj = best_obj;

        // alternate sampler-row vertex steps with reproduction re-solves
        for (int round = 0; round < 50; ++round) {
            bool changed = false;
            const Kernel& w = pt.kernels.front();
            for (std::size_t x = 0; x < h.assign.size(); ++x) {
                double row_best = sampler_objective(pmf, d, family, idxs, atom_base, h, w, lambda);
                std::uint32_t keep = h.assign[x];
                for (std::uint32_t s = 0; s < family.size(); ++s) {
                    if (s == keep) continue;
                    PointMassSampler cand = h;
                    cand.assign[x] = s;
                    const double obj = sampler_objective(pmf, d, family, idxs, atom_base, cand, w, lambda);
                    if (obj < row_best - 1e-12) {
                        row_best = obj;
                        h.assign[x] = s;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
            RdInstance comp = composite_distortion(pmf, d, family, h);
            RdPoint next = ba_fixed_slope(comp, lambda, opts.tol, opts.max_iter);
            const double obj = next.rate + lambda * next.delta;
            if (obj < best_obj - 1e-12) {
                best_obj = obj;
                pt = std::move(next);
            } else {
                break;
            }
        }
        if (seed_obj - best_obj > 1e-6) {
            res.diag.refine_improved = true;
            res.diag.refine_gain = std::max(res.diag.refine_gain, seed_obj - best_obj);
        }

        const std::int64_t sid = register_sampler(h);
        CurvePoint cp;
        cp.delta = pt.delta;
        cp.rate = std::max(pt.rate, 0.0);
        cp.witness = sid;
        cp.lambda = lambda;
        cp.payload = static_cast<std::int64_t>(res.vertex_witnesses.size());
        VertexWitness vw;
        vw.sampler_id = sid;
        vw.delta = cp.delta;
        vw.rate = cp.rate;
        vw.parts.push_back(WitnessPart{1.0, lambda, pt.kernels});
        res.vertex_witnesses.push_back(std::move(vw));
        pool.push_back(cp);
        res.diag.ba_runs += sol.reps.size() + 1;
    }

    res.sampler_curves.resize(res.samplers.size());
    res.curve = lower_convex_envelope(std::move(pool));
    res.curve.rebuild_segments();
    refine_segments(res);
    return res;
}

}  // namespace srdf
