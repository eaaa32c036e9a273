#include "srdf/rd_solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "srdf/parallel.hpp"

namespace srdf {

namespace {

constexpr double kFlushTol = 1e-15;
constexpr double kDedupTol = 1e-9;

struct Working {
    std::size_t nz = 0;
    std::size_t ny = 0;
    std::vector<std::uint8_t> admissible;  // nz x ny mask restricted to positive-probability rows
    std::vector<std::uint8_t> union_adm;   // y admissible for at least one positive z
};

Working make_working(const RdInstance& inst, bool restrict_to_row_min) {
    Working w;
    w.nz = inst.source.size();
    w.ny = inst.rho.repro_size();
    w.admissible.assign(w.nz * w.ny, 0);
    w.union_adm.assign(w.ny, 0);
    for (std::size_t z = 0; z < w.nz; ++z) {
        if (inst.source[z] <= 0.0) continue;
        double rmin = restrict_to_row_min ? inst.rho.row_min(z) : 0.0;
        for (std::size_t y = 0; y < w.ny; ++y) {
            if (inst.rho.is_forbidden(z, y)) continue;
            if (restrict_to_row_min && inst.rho.at(z, y) != rmin) continue;
            w.admissible[z * w.ny + y] = 1;
            w.union_adm[y] = 1;
        }
    }
    return w;
}

// Rows for zero-probability source symbols never influence the objective;
// give them a clean deterministic point mass.
void fill_inactive_rows(const RdInstance& inst, Kernel& k) {
    for (std::size_t z = 0; z < inst.source.size(); ++z) {
        if (inst.source[z] > 0.0) continue;
        for (std::size_t y = 0; y < k.to; ++y) k.at(z, y) = 0.0;
        std::size_t y0 = 0;
        for (std::size_t y = 0; y < k.to; ++y) {
            if (!inst.rho.is_forbidden(z, y)) {
                y0 = y;
                break;
            }
        }
        k.at(z, y0) = 1.0;
    }
}

double objective(const RdInstance& inst, const Kernel& w, double lambda) {
    return kernel_rate(inst, w) + lambda * expected_distortion(inst, w);
}

RdPoint zero_slope_point(const RdInstance& inst) {
    std::size_t best_y = 0;
    double delta = inst.delta_max(&best_y);
    Kernel k = Kernel::zeros(inst.source.size(), inst.rho.repro_size());
    for (std::size_t z = 0; z < inst.source.size(); ++z) k.at(z, best_y) = 1.0;
    fill_inactive_rows(inst, k);
    RdPoint pt;
    pt.lambda = 0.0;
    pt.delta = delta;
    pt.rate = 0.0;
    pt.kernels.push_back(std::move(k));
    pt.iterations = 0;
    pt.converged = true;
    return pt;
}

// Alternating minimization over (kernel, output marginal) of
// I + lambda * E[rho] with the kernel support constrained by `work`.
RdPoint alternate(const RdInstance& inst, const Working& work, double lambda, double tol,
                  int max_iter, double report_lambda) {
    const std::size_t nz = work.nz;
    const std::size_t ny = work.ny;

    std::vector<double> q(ny, 0.0);
    std::size_t nadm = 0;
    for (std::size_t y = 0; y < ny; ++y) nadm += work.union_adm[y];
    for (std::size_t y = 0; y < ny; ++y) q[y] = work.union_adm[y] ? 1.0 / nadm : 0.0;

    Kernel w = Kernel::zeros(nz, ny);
    std::vector<double> logq(ny), t(ny);

    double prev = std::numeric_limits<double>::infinity();
    int it = 0;
    bool converged = false;
    for (; it < max_iter; ++it) {
        for (std::size_t y = 0; y < ny; ++y) {
            logq[y] = q[y] > 0.0 ? std::log2(q[y]) : -std::numeric_limits<double>::infinity();
        }
        // kernel update in log space, shifted per row for stability
        for (std::size_t z = 0; z < nz; ++z) {
            if (inst.source[z] <= 0.0) continue;
            double tmax = -std::numeric_limits<double>::infinity();
            for (std::size_t y = 0; y < ny; ++y) {
                if (!work.admissible[z * ny + y]) continue;
                t[y] = logq[y] - lambda * inst.rho.at(z, y);
                tmax = std::max(tmax, t[y]);
            }
            double norm = 0.0;
            for (std::size_t y = 0; y < ny; ++y) {
                double v = work.admissible[z * ny + y] && std::isfinite(t[y])
                               ? std::exp2(t[y] - tmax)
                               : 0.0;
                w.at(z, y) = v;
                norm += v;
            }
            for (std::size_t y = 0; y < ny; ++y) w.at(z, y) /= norm;
        }
        // output marginal update
        std::fill(q.begin(), q.end(), 0.0);
        for (std::size_t z = 0; z < nz; ++z) {
            if (inst.source[z] <= 0.0) continue;
            for (std::size_t y = 0; y < ny; ++y) q[y] += inst.source[z] * w(z, y);
        }
        const double cur = objective(inst, w, lambda);
        assert(cur <= prev + 1e-9);  // alternating steps never increase the objective
        if (prev - cur < tol) {
            converged = true;
            ++it;
            break;
        }
        prev = cur;
    }

    for (std::size_t z = 0; z < nz; ++z) {
        if (inst.source[z] <= 0.0) continue;
        double sum = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
            double& v = w.at(z, y);
            if (v < kFlushTol) v = 0.0;
            sum += v;
        }
        for (std::size_t y = 0; y < ny; ++y) w.at(z, y) /= sum;
    }
    fill_inactive_rows(inst, w);

    RdPoint pt;
    pt.lambda = report_lambda;
    pt.delta = expected_distortion(inst, w);
    pt.rate = kernel_rate(inst, w);
    pt.kernels.push_back(std::move(w));
    pt.iterations = it;
    pt.converged = converged;
    return pt;
}

}  // namespace

double expected_distortion(const RdInstance& inst, const Kernel& w) {
    double acc = 0.0;
    for (std::size_t z = 0; z < inst.source.size(); ++z) {
        if (inst.source[z] <= 0.0) continue;
        for (std::size_t y = 0; y < w.to; ++y) {
            if (w(z, y) > 0.0) acc += inst.source[z] * w(z, y) * inst.rho.at(z, y);
        }
    }
    return acc;
}

double kernel_rate(const RdInstance& inst, const Kernel& w) {
    std::vector<double> src;
    src.reserve(inst.source.size());
    for (double v : inst.source) src.push_back(std::max(v, 0.0));
    return mutual_information(std::span<const double>(src), w);
}

RdPoint ba_fixed_slope(const RdInstance& inst, double lambda, double tol, int max_iter) {
    inst.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("ba_fixed_slope: tol must be positive");
    if (lambda < 0.0) throw std::invalid_argument("ba_fixed_slope: lambda must be nonnegative");
    if (lambda == 0.0) return zero_slope_point(inst);
    Working work = make_working(inst, /*restrict_to_row_min=*/false);
    return alternate(inst, work, lambda, tol, max_iter, lambda);
}

RdPoint min_distortion_point(const RdInstance& inst, double tol, int max_iter) {
    inst.validate();
    Working work = make_working(inst, /*restrict_to_row_min=*/true);
    RdPoint pt = alternate(inst, work, 0.0, tol, max_iter,
                           std::numeric_limits<double>::infinity());
    pt.delta = inst.delta_min();  // support restriction pins the distortion exactly
    return pt;
}

std::vector<double> geometric_schedule(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi >= lo) || n < 1) {
        throw std::invalid_argument("geometric_schedule: need 0 < lo <= hi and n >= 1");
    }
    std::vector<double> s(n);
    if (n == 1) {
        s[0] = lo;
        return s;
    }
    const double ratio = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) s[i] = lo * std::exp(ratio * i);
    s.front() = lo;
    s.back() = hi;
    return s;
}

namespace {

bool is_exact_endpoint(const RdPoint& p) {
    return p.lambda == 0.0 || std::isinf(p.lambda);
}

// Sorts by delta and drops near-duplicates. The floor and ceiling points
// carry exact coordinates, so they win their clusters; otherwise the
// lower-rate point is kept. Swept points overshooting the ceiling are
// solver residue and are dropped.
void assemble(std::vector<RdPoint>& pts, double delta_max) {
    for (auto& p : pts) p.rate = std::max(p.rate, 0.0);
    std::erase_if(pts, [&](const RdPoint& p) {
        return !is_exact_endpoint(p) && p.delta > delta_max + 1e-12;
    });
    std::stable_sort(pts.begin(), pts.end(), [](const RdPoint& a, const RdPoint& b) {
        if (a.delta != b.delta) return a.delta < b.delta;
        if (a.rate != b.rate) return a.rate < b.rate;
        return a.lambda > b.lambda;
    });
    std::vector<RdPoint> out;
    for (auto& p : pts) {
        if (!out.empty() && std::abs(p.delta - out.back().delta) <= kDedupTol) {
            const bool keep_old = is_exact_endpoint(out.back()) ||
                                  (!is_exact_endpoint(p) && out.back().rate <= p.rate);
            if (!keep_old) out.back() = std::move(p);
            continue;
        }
        out.push_back(std::move(p));
    }
    pts = std::move(out);
}

}  // namespace

RdCurve sweep(const RdInstance& inst, const std::vector<double>& schedule, double tol,
              int max_iter, int threads) {
    inst.validate();
    if (schedule.empty()) throw std::invalid_argument("sweep: empty schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0)) throw std::invalid_argument("sweep: slopes must be positive");
        if (i && schedule[i] < schedule[i - 1]) {
            throw std::invalid_argument("sweep: schedule must be sorted ascending");
        }
    }
    std::vector<RdPoint> pts(schedule.size() + 2);
    parallel_for(schedule.size() + 2, threads, [&](std::size_t i) {
        if (i == 0) {
            pts[i] = ba_fixed_slope(inst, 0.0, tol, max_iter);
        } else if (i <= schedule.size()) {
            pts[i] = ba_fixed_slope(inst, schedule[i - 1], tol, max_iter);
        } else {
            pts[i] = min_distortion_point(inst, tol, max_iter);
        }
    });
    RdCurve curve;
    curve.delta_min = inst.delta_min();
    curve.delta_max = inst.delta_max();
    assemble(pts, curve.delta_max);
    curve.points = std::move(pts);
    return curve;
}

RateAtResult rate_at_distortion(const RdInstance& inst, double target_delta, double tol,
                                double ba_tol, int max_iter) {
    inst.validate();
    const double dmin = inst.delta_min();
    const double dmax = inst.delta_max();
    if (target_delta < dmin - 1e-9) {
        throw infeasible_distortion_error("rate_at_distortion: infeasible distortion");
    }
    RateAtResult res;
    if (target_delta >= dmax) {
        RdPoint pt = ba_fixed_slope(inst, 0.0, ba_tol, max_iter);
        res.rate = 0.0;
        res.mix.emplace_back(1.0, std::move(pt));
        return res;
    }
    if (target_delta <= dmin) {
        RdPoint pt = min_distortion_point(inst, ba_tol, max_iter);
        res.rate = pt.rate;
        res.mix.emplace_back(1.0, std::move(pt));
        return res;
    }

    RdPoint lo_pt = ba_fixed_slope(inst, 0.0, ba_tol, max_iter);  // delta >= target
    double hi = 1.0;
    RdPoint hi_pt = ba_fixed_slope(inst, hi, ba_tol, max_iter);
    int guard = 0;
    while (hi_pt.delta > target_delta && guard++ < 60) {
        hi *= 4.0;
        hi_pt = ba_fixed_slope(inst, hi, ba_tol, max_iter);
    }
    if (hi_pt.delta > target_delta) {
        hi_pt = min_distortion_point(inst, ba_tol, max_iter);
    }

    for (int it = 0; it < 200; ++it) {
        if (std::abs(hi_pt.delta - target_delta) <= tol) {
            res.rate = hi_pt.rate;
            res.mix.emplace_back(1.0, std::move(hi_pt));
            return res;
        }
        if (std::abs(lo_pt.delta - target_delta) <= tol) {
            res.rate = lo_pt.rate;
            res.mix.emplace_back(1.0, std::move(lo_pt));
            return res;
        }
        const double lo_l = lo_pt.lambda;
        const double hi_l = std::isfinite(hi_pt.lambda) ? hi_pt.lambda : lo_l * 2 + 128.0;
        if (hi_l - lo_l < 1e-12 * std::max(1.0, hi_l)) break;
        const double mid = 0.5 * (lo_l + hi_l);
        RdPoint mid_pt = ba_fixed_slope(inst, mid, ba_tol, max_iter);
        if (mid_pt.delta > target_delta) {
            lo_pt = std::move(mid_pt);
        } else {
            hi_pt = std::move(mid_pt);
        }
    }

    // Plateau: time-share the two bracketing points to meet the target exactly.
    const double gap = lo_pt.delta - hi_pt.delta;
    const double theta = gap > 0.0 ? (target_delta - hi_pt.delta) / gap : 0.0;
    res.rate = theta * lo_pt.rate + (1.0 - theta) * hi_pt.rate;
    res.mix.emplace_back(theta, std::move(lo_pt));
    res.mix.emplace_back(1.0 - theta, std::move(hi_pt));
    return res;
}

RdCurve branch_sweep(const std::vector<std::pair<double, RdInstance>>& branches,
                     const std::vector<double>& schedule, double tol, int max_iter, int threads) {
    if (branches.empty()) throw std::invalid_argument("branch_sweep: no branches");
    double wsum = 0.0;
    for (const auto& [w, inst] : branches) {
        if (!(w >= 0.0)) throw std::invalid_argument("branch_sweep: negative weight");
        wsum += w;
        inst.validate();
    }
    if (std::abs(wsum - 1.0) > 1e-9) {
        throw std::invalid_argument("branch_sweep: weights must sum to 1");
    }

    const std::size_t npts = schedule.size() + 2;
    const std::size_t nb = branches.size();
    std::vector<RdPoint> branch_pts(npts * nb);
    parallel_for(npts * nb, threads, [&](std::size_t task) {
        const std::size_t i = task / nb;
        const std::size_t b = task % nb;
        const RdInstance& inst = branches[b].second;
        if (i == 0) {
            branch_pts[task] = ba_fixed_slope(inst, 0.0, tol, max_iter);
        } else if (i <= schedule.size()) {
            branch_pts[task] = ba_fixed_slope(inst, schedule[i - 1], tol, max_iter);
        } else {
            branch_pts[task] = min_distortion_point(inst, tol, max_iter);
        }
    });

    std::vector<RdPoint> pts(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        RdPoint agg;
        agg.lambda = i == 0 ? 0.0
                     : i <= schedule.size() ? schedule[i - 1]
                                            : std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < nb; ++b) {
            const RdPoint& bp = branch_pts[i * nb + b];
            const double w = branches[b].first;
            agg.delta += w * bp.delta;
            agg.rate += w * bp.rate;
            agg.iterations += bp.iterations;
            agg.converged = agg.converged && bp.converged;
            agg.kernels.push_back(bp.kernels.front());
        }
        pts[i] = std::move(agg);
    }
    RdCurve curve;
    curve.delta_min = 0.0;
    curve.delta_max = 0.0;
    for (const auto& [w, inst] : branches) {
        curve.delta_min += w * inst.delta_min();
        curve.delta_max += w * inst.delta_max();
    }
    assemble(pts, curve.delta_max);
    curve.points = std::move(pts);
    return curve;
}

}  // namespace srdf
