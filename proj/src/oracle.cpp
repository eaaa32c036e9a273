#include "srdf/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "srdf/parallel.hpp"

namespace srdf {
namespace oracle {

namespace {

// log2 approximation for the enumeration hot loop (~5e-9 absolute error):
// exponent extraction plus an atanh-series evaluation of the mantissa.
inline double fast_log2(double x) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    int e = static_cast<int>((bits >> 52) & 0x7ffu) - 1023;
    double m = std::bit_cast<double>((bits & 0xfffffffffffffULL) | 0x3ff0000000000000ULL);
    if (m > 1.5) {
        m *= 0.5;
        e += 1;
    }
    const double z = (m - 1.0) / (m + 1.0);
    const double z2 = z * z;
    const double p =
        z * (1.0 + z2 * (1.0 / 3 + z2 * (1.0 / 5 + z2 * (1.0 / 7 + z2 * (1.0 / 9)))));
    return e + 2.885390081777926814 * p;
}

struct RowSet {
    std::size_t count = 0;
    std::vector<double> probs;  // count x ny
    std::vector<double> e;      // E[rho(z, .)] per row
    std::vector<double> negh;   // sum p log2 p per row
};

void gen_rows(std::size_t ny, const std::vector<std::size_t>& adm, int q, std::vector<double>& row,
              std::size_t pos, int left, RowSet& out) {
    if (pos + 1 == adm.size()) {
        row[adm[pos]] = static_cast<double>(left) / q;
        out.probs.insert(out.probs.end(), row.begin(), row.end());
        out.count += 1;
        row[adm[pos]] = 0.0;
        return;
    }
    for (int take = 0; take <= left; ++take) {
        row[adm[pos]] = static_cast<double>(take) / q;
        gen_rows(ny, adm, q, row, pos + 1, left - take, out);
    }
    row[adm[pos]] = 0.0;
}

struct Staircase {
    std::vector<double> best;  // min rate with E[rho] <= grid[i]
};

}  // namespace

std::vector<CurvePoint> brute_force_rate(const RdInstance& inst, const std::vector<double>& grid,
                                         int q, std::uint64_t max_kernels, int threads) {
    inst.validate();
    if (q < 1) throw std::invalid_argument("brute_force_rate: q must be positive");
    if (grid.empty() || !std::is_sorted(grid.begin(), grid.end())) {
        throw std::invalid_argument("brute_force_rate: grid must be sorted and nonempty");
    }
    const std::size_t ny = inst.rho.repro_size();
    if (ny > 64) throw std::invalid_argument("brute_force_rate: reproduction alphabet too large");

    // active (positive-probability) source symbols only
    std::vector<std::size_t> active;
    for (std::size_t z = 0; z < inst.source.size(); ++z) {
        if (inst.source[z] > 0.0) active.push_back(z);
    }
    const std::size_t nz = active.size();

    std::vector<RowSet> rows(nz);
    unsigned __int128 total = 1;
    for (std::size_t i = 0; i < nz; ++i) {
        const std::size_t z = active[i];
        std::vector<std::size_t> adm;
        for (std::size_t y = 0; y < ny; ++y) {
            if (!inst.rho.is_forbidden(z, y)) adm.push_back(y);
        }
        std::vector<double> row(ny, 0.0);
        gen_rows(ny, adm, q, row, 0, q, rows[i]);
        rows[i].e.resize(rows[i].count);
        rows[i].negh.resize(rows[i].count);
        for (std::size_t r = 0; r < rows[i].count; ++r) {
            double e = 0.0, nh = 0.0;
            for (std::size_t y = 0; y < ny; ++y) {
                const double p = rows[i].probs[r * ny + y];
                if (p > 0.0) {
                    e += p * inst.rho.at(z, y);
                    nh += p * std::log2(p);
                }
            }
            rows[i].e[r] = e;
            rows[i].negh[r] = nh;
        }
        // ascending expected distortion enables prefix pruning
        std::vector<std::size_t> order(rows[i].count);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return rows[i].e[a] < rows[i].e[b]; });
        RowSet sorted;
        sorted.count = rows[i].count;
        sorted.probs.reserve(rows[i].probs.size());
        for (std::size_t r : order) {
            sorted.probs.insert(sorted.probs.end(), rows[i].probs.begin() + r * ny,
                                rows[i].probs.begin() + (r + 1) * ny);
            sorted.e.push_back(rows[i].e[r]);
            sorted.negh.push_back(rows[i].negh[r]);
        }
        rows[i] = std::move(sorted);
        total *= rows[i].count;
        if (total > max_kernels) {
            throw cap_exceeded_error(
                "brute_force_rate: kernel grid exceeds max_kernels=" + std::to_string(max_kernels) +
                "; raise the cap to run this search");
        }
    }

    const double cap_delta = grid.back() + 1e-12;
    std::vector<double> weight(nz), suffix_min(nz + 1, 0.0);
    for (std::size_t i = 0; i < nz; ++i) weight[i] = inst.source[active[i]];
    for (std::size_t i = nz; i-- > 0;) {
        suffix_min[i] = suffix_min[i + 1] + weight[i] * rows[i].e.front();
    }

    const std::size_t g = grid.size();
    auto bucket_of = [&](double e) {
        return static_cast<std::size_t>(
            std::lower_bound(grid.begin(), grid.end(), e - 1e-12) - grid.begin());
    };

    // Enumerate with the first row parallelized; each task owns its staircase
    // and the merge is an elementwise min, so the result is schedule-free.
    const std::size_t outer = rows.empty() ? 0 : rows[0].count;
    std::vector<Staircase> partial(std::max<std::size_t>(outer, 1));
    for (auto& s : partial) s.best.assign(g, std::numeric_limits<double>::infinity());

    if (nz == 0) throw std::invalid_argument("brute_force_rate: empty source support");

    parallel_for(outer, threads, [&](std::size_t r0) {
        Staircase& stair = partial[r0];
        const double e0 = weight[0] * rows[0].e[r0];
        if (e0 + suffix_min[1] > cap_delta) return;  // rows sorted: larger r0 only worse

        std::vector<double> qacc((nz + 1) * ny, 0.0);
        std::vector<double> eacc(nz + 1, 0.0), hacc(nz + 1, 0.0);
        for (std::size_t y = 0; y < ny; ++y) {
            qacc[1 * ny + y] = weight[0] * rows[0].probs[r0 * ny + y];
        }
        eacc[1] = e0;
        hacc[1] = weight[0] * rows[0].negh[r0];

        // depth-first over remaining rows with partial accumulators
        std::vector<std::size_t> choice(nz, 0);
        std::size_t depth = 1;
        auto evaluate = [&](double e, const double* qrow, double nh) {
            double hq = 0.0;
            for (std::size_t y = 0; y < ny; ++y) {
                const double v = qrow[y];
                if (v > 0.0) hq -= v * fast_log2(v);
            }
            const double info = std::max(hq + nh, 0.0);
            const std::size_t b = bucket_of(e);
            if (b < g && info < stair.best[b]) stair.best[b] = info;
        };
        if (nz == 1) {
            evaluate(eacc[1], qacc.data() + ny, hacc[1]);
            return;
        }
        while (true) {
            const std::size_t i = depth;  // choosing row for source index i
            bool descend = false;
            for (std::size_t r = choice[i]; r < rows[i].count; ++r) {
                const double e = eacc[i] + weight[i] * rows[i].e[r];
                if (e + suffix_min[i + 1] > cap_delta) break;  // sorted rows
                if (i + 1 == nz) {
                    double nh = hacc[i] + weight[i] * rows[i].negh[r];
                    const double* qi = qacc.data() + i * ny;
                    double qlast[64];
                    const double* rp = rows[i].probs.data() + r * ny;
                    for (std::size_t y = 0; y < ny; ++y) qlast[y] = qi[y] + weight[i] * rp[y];
                    evaluate(e, qlast, nh);
                } else {
                    choice[i] = r;
                    eacc[i + 1] = e;
                    hacc[i + 1] = hacc[i] + weight[i] * rows[i].negh[r];
                    const double* rp = rows[i].probs.data() + r * ny;
                    for (std::size_t y = 0; y < ny; ++y) {
                        qacc[(i + 1) * ny + y] = qacc[i * ny + y] + weight[i] * rp[y];
                    }
                    depth = i + 1;
                    choice[depth] = 0;
                    descend = true;
                    break;
                }
            }
            if (descend) continue;
            if (depth == 1) break;
            depth -= 1;
            choice[depth] += 1;
        }
    });

    Staircase merged;
    merged.best.assign(g, std::numeric_limits<double>::infinity());
    for (const auto& s : partial) {
        for (std::size_t i = 0; i < g; ++i) merged.best[i] = std::min(merged.best[i], s.best[i]);
    }
    for (std::size_t i = 1; i < g; ++i) merged.best[i] = std::min(merged.best[i], merged.best[i - 1]);

    // lower hull of the staircase, evaluated back on the grid
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < g; ++i) {
        if (std::isfinite(merged.best[i])) pts.emplace_back(grid[i], merged.best[i]);
    }
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& a = hull.back();
            const double cr = (a.first - o.first) * (p.second - o.second) -
                              (a.second - o.second) * (p.first - o.first);
            if (cr <= 1e-14) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(p);
    }
    auto hull_eval = [&](double x) {
        if (x <= hull.front().first) return hull.front().second;
        if (x >= hull.back().first) return hull.back().second;
        for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
            if (x <= hull[i + 1].first) {
                const double t = (x - hull[i].first) / (hull[i + 1].first - hull[i].first);
                return hull[i].second + t * (hull[i + 1].second - hull[i].second);
            }
        }
        return hull.back().second;
    };

    std::vector<CurvePoint> out;
    for (std::size_t i = 0; i < g; ++i) {
        if (!std::isfinite(merged.best[i])) continue;
        CurvePoint p;
        p.delta = grid[i];
        p.rate = hull_eval(grid[i]);
        out.push_back(p);
    }
    return out;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed ^ (stream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform_double(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

namespace {

std::size_t draw_index(std::span<const double> pmf, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        acc += pmf[i];
        if (u < acc) return i;
    }
    return pmf.size() - 1;
}

}  // namespace

McEstimate mc_expected_distortion(const JointPmf& pmf, const DistortionTable& d,
                                  const SubsetFamily& family, const RandomizedSampler& sampler,
                                  const std::vector<Kernel>& branch_kernels, std::size_t n,
                                  std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("mc_expected_distortion: n must be positive");
    if (sampler.rows.from != pmf.size() || sampler.rows.to != family.size()) {
        throw std::invalid_argument("mc_expected_distortion: sampler shape mismatch");
    }
    if (branch_kernels.size() != family.size()) {
        throw std::invalid_argument("mc_expected_distortion: one kernel per subset required");
    }
    // subset-coordinate lookup per family member
    std::vector<std::vector<std::size_t>> coord(family.size());
    for (std::size_t ai = 0; ai < family.size(); ++ai) {
        SplitIndexer idx(pmf_dims(pmf), family.sets[ai]);
        coord[ai].assign(pmf.size(), 0);
        for (std::size_t a = 0; a < idx.subset_size(); ++a) {
            for (std::size_t c = 0; c < idx.complement_size(); ++c) coord[ai][idx.fuse(a, c)] = a;
        }
        if (branch_kernels[ai].from != idx.subset_size() ||
            branch_kernels[ai].to != d.repro_size()) {
            throw std::invalid_argument("mc_expected_distortion: branch kernel shape mismatch");
        }
    }

    std::uint64_t state = split_seed(seed, 0x4d43);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t x = draw_index(std::span<const double>(pmf.probs()), uniform_double(state));
        const std::size_t s = draw_index(sampler.rows.row(x), uniform_double(state));
        const std::size_t xa = coord[s][x];
        const std::size_t y = draw_index(branch_kernels[s].row(xa), uniform_double(state));
        if (d.is_forbidden(x, y)) {
            throw std::runtime_error("mc_expected_distortion: sampled a forbidden pair");
        }
        const double v = d.at(x, y);
        sum += v;
        sumsq += v * v;
    }
    McEstimate est;
    est.estimate = sum / n;
    if (n > 1) {
        const double var = std::max(0.0, (sumsq - n * est.estimate * est.estimate) / (n - 1));
        est.stderr_ = std::sqrt(var / n);
    }
    return est;
}

McEstimate mc_expected_distortion(const JointPmf& pmf, const DistortionTable& d,
                                  const SubsetFamily& family, const PointMassSampler& sampler,
                                  const std::vector<Kernel>& branch_kernels, std::size_t n,
                                  std::uint64_t seed) {
    std::vector<double> rows(pmf.size() * family.size(), 0.0);
    for (std::size_t x = 0; x < pmf.size(); ++x) rows[x * family.size() + sampler.assign[x]] = 1.0;
    RandomizedSampler rs{Kernel(pmf.size(), family.size(), std::move(rows))};
    return mc_expected_distortion(pmf, d, family, rs, branch_kernels, n, seed);
}

double decomposition_identity_check(const JointPmf& pmf, const SubsetIndex& subset,
                                    const Kernel& kernel) {
    AlphaMap am = alpha_map(pmf, subset);
    SplitIndexer idx(pmf_dims(pmf), subset);
    const std::size_t na = idx.subset_size();
    const std::size_t nc = idx.complement_size();
    if (kernel.from != na || kernel.to != na) {
        throw std::invalid_argument("decomposition_identity_check: kernel must map X_A to Y_A");
    }

    // E_Q[d] where Q couples the coding kernel with the most probable
    // completion of the unsampled coordinates.
    double lhs = 0.0;
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t c = 0; c < nc; ++c) {
            const double px = pmf.prob(idx.fuse(a, c));
            if (px <= 0.0) continue;
            for (std::size_t ya = 0; ya < na; ++ya) {
                const bool match = (ya == a) && (am.witness[ya] == c);
                lhs += px * kernel(a, ya) * (match ? 0.0 : 1.0);
            }
        }
    }

    JointPmf pa = marginal(pmf, subset);
    double rhs = 1.0 - am.expected_alpha;
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t ya = 0; ya < na; ++ya) {
            if (ya != a) rhs += pa.prob(a) * am.alpha[a] * kernel(a, ya);
        }
    }
    return std::abs(lhs - rhs);
}

bool lagrangian_vertex_check(std::size_t m, std::size_t k,
                             const std::vector<std::size_t>& component_sizes,
                             const std::vector<std::size_t>& repro_sizes, double lambda,
                             std::uint64_t seed, int trials, double convex_penalty) {
    if (component_sizes.size() != m || repro_sizes.size() != m) {
        throw std::invalid_argument("lagrangian_vertex_check: size vectors must have m entries");
    }
    SubsetFamily family = SubsetFamily::all_k_subsets(m, k);
    const std::size_t ns = family.size();
    std::size_t nx = 1, ny = 1;
    for (std::size_t i = 0; i < m; ++i) {
        nx *= component_sizes[i];
        ny *= repro_sizes[i];
    }
    const std::size_t nu = 3;

    std::vector<SplitIndexer> idxs;
    std::vector<std::vector<std::size_t>> coord(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        SplitIndexer idx(component_sizes, family.sets[s]);
        coord[s].assign(nx, 0);
        for (std::size_t a = 0; a < idx.subset_size(); ++a) {
            for (std::size_t c = 0; c < idx.complement_size(); ++c) coord[s][idx.fuse(a, c)] = a;
        }
        idxs.push_back(std::move(idx));
    }

    for (int trial = 0; trial < trials; ++trial) {
        std::uint64_t st = split_seed(seed, 0x4c56ULL * (trial + 1));
        auto rand_pmf = [&](std::size_t sz) {
            std::vector<double> p(sz);
            double sum = 0.0;
            for (auto& v : p) {
                v = -std::log(std::max(uniform_double(st), 1e-300));
                sum += v;
            }
            for (auto& v : p) v /= sum;
            return p;
        };

        std::vector<double> d(nx * ny);
        for (auto& v : d) v = uniform_double(st);
        // reproduction plans per (subset, sampled value, time-share symbol)
        std::vector<std::vector<std::vector<double>>> plan(ns);
        std::vector<std::vector<double>> ref(ns);  // comparison marginals per (subset, u)
        for (std::size_t s = 0; s < ns; ++s) {
            plan[s].resize(idxs[s].subset_size() * nu);
            for (auto& p : plan[s]) p = rand_pmf(ny);
            ref[s].resize(ny * nu);
            for (std::size_t u = 0; u < nu; ++u) {
                auto q = rand_pmf(ny);
                for (std::size_t y = 0; y < ny; ++y) ref[s][u * ny + y] = q[y];
            }
        }

        for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t u = 0; u < nu; ++u) {
                std::vector<double> cost(ns, 0.0);
                for (std::size_t s = 0; s < ns; ++s) {
                    const auto& py = plan[s][coord[s][x] * nu + u];
                    double acc = 0.0;
                    for (std::size_t y = 0; y < ny; ++y) {
                        if (py[y] <= 0.0) continue;
                        acc += py[y] * (std::log2(py[y] / ref[s][u * ny + y]) + lambda * d[x * ny + y]);
                    }
                    cost[s] = acc;
                }
                double best_vertex = std::numeric_limits<double>::infinity();
                for (std::size_t s = 0; s < ns; ++s) {
                    best_vertex = std::min(best_vertex, cost[s] + convex_penalty);
                }
                for (int probe = 0; probe < 8; ++probe) {
                    auto w = rand_pmf(ns);
                    double val = 0.0, sq = 0.0;
                    for (std::size_t s = 0; s < ns; ++s) {
                        val += w[s] * cost[s];
                        sq += w[s] * w[s];
                    }
                    val += convex_penalty * sq;
                    if (val < best_vertex - 1e-12) return false;
                }
            }
        }
    }
    return true;
}

}  // namespace oracle
}  // namespace srdf
