#include "srdf/envelope.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace srdf {

namespace {

constexpr double kDeltaTieTol = 1e-12;

// Orientation of o -> a -> b scaled for a strict convex turn test.
double cross(const CurvePoint& o, const CurvePoint& a, const CurvePoint& b) {
    return (a.delta - o.delta) * (b.rate - o.rate) - (a.rate - o.rate) * (b.delta - o.delta);
}

double cross_eps(const CurvePoint& o, const CurvePoint& a, const CurvePoint& b) {
    return 1e-12 * (std::abs((a.delta - o.delta) * (b.rate - o.rate)) +
                    std::abs((a.rate - o.rate) * (b.delta - o.delta))) +
           1e-300;
}

}  // namespace

double PiecewiseLinearCurve::eval(double delta) const {
    if (vertices.empty()) throw std::logic_error("PiecewiseLinearCurve: empty curve");
    if (delta < vertices.front().delta) {
        // slack matched to the sweep's dedup tolerance
        if (delta < vertices.front().delta - 1e-9 * std::max(1.0, std::abs(delta))) {
            throw infeasible_distortion_error("infeasible distortion: below curve domain");
        }
        return vertices.front().rate;
    }
    if (delta >= vertices.back().delta) return vertices.back().rate;
    std::ptrdiff_t s = segment_at(delta);
    const CurvePoint& l = vertices[s];
    const CurvePoint& r = vertices[s + 1];
    const double t = (delta - l.delta) / (r.delta - l.delta);
    return l.rate + t * (r.rate - l.rate);
}

std::ptrdiff_t PiecewiseLinearCurve::segment_at(double delta) const {
    if (vertices.size() < 2) return -1;
    auto it = std::upper_bound(vertices.begin(), vertices.end(), delta,
                               [](double d, const CurvePoint& p) { return d < p.delta; });
    std::ptrdiff_t idx = it - vertices.begin();
    if (idx <= 0) return 0;
    if (idx >= static_cast<std::ptrdiff_t>(vertices.size())) {
        return static_cast<std::ptrdiff_t>(vertices.size()) - 2;
    }
    return idx - 1;
}

double PiecewiseLinearCurve::slope_at(double delta) const {
    if (vertices.size() < 2) return 0.0;
    if (delta >= vertices.back().delta) return 0.0;
    std::ptrdiff_t s = segment_at(delta);
    const CurvePoint& l = vertices[s];
    const CurvePoint& r = vertices[s + 1];
    return (r.rate - l.rate) / (r.delta - l.delta);
}

void PiecewiseLinearCurve::rebuild_segments() {
    segments.clear();
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        CurveSegment s;
        s.witness_left = vertices[i].witness;
        s.witness_right = vertices[i + 1].witness;
        s.pure = s.witness_left == s.witness_right;
        s.pure_witness = s.pure ? s.witness_left : -1;
        segments.push_back(s);
    }
}

PiecewiseLinearCurve lower_convex_envelope(std::vector<CurvePoint> points) {
    if (points.empty()) throw std::invalid_argument("lower_convex_envelope: empty input");
    for (const auto& p : points) {
        if (!(p.rate >= -1e-12)) {
            throw std::invalid_argument("lower_convex_envelope: negative rate");
        }
    }
    std::sort(points.begin(), points.end(), [](const CurvePoint& a, const CurvePoint& b) {
        if (a.delta != b.delta) return a.delta < b.delta;
        if (a.rate != b.rate) return a.rate < b.rate;
        return a.witness < b.witness;
    });
    // collapse delta ties to their lowest rate
    std::vector<CurvePoint> uniq;
    for (auto& p : points) {
        p.rate = std::max(p.rate, 0.0);
        if (!uniq.empty() &&
            std::abs(p.delta - uniq.back().delta) <= kDeltaTieTol * std::max(1.0, std::abs(p.delta))) {
            continue;  // sorted, so the kept point has the lower rate
        }
        uniq.push_back(p);
    }

    PiecewiseLinearCurve curve;
    auto& hull = curve.vertices;
    for (const auto& p : uniq) {
        while (hull.size() >= 2 &&
               cross(hull[hull.size() - 2], hull.back(), p) <=
                   cross_eps(hull[hull.size() - 2], hull.back(), p)) {
            hull.pop_back();
        }
        hull.push_back(p);
    }
    curve.rebuild_segments();
    return curve;
}

std::vector<CurvePoint> pointwise_min(const std::vector<PiecewiseLinearCurve>& curves,
                                      const std::vector<double>& grid) {
    std::vector<CurvePoint> out;
    out.reserve(grid.size());
    for (double delta : grid) {
        double best = std::numeric_limits<double>::infinity();
        std::int64_t arg = -1;
        for (std::size_t c = 0; c < curves.size(); ++c) {
            if (curves[c].empty()) continue;
            if (delta < curves[c].delta_lo() - kDeltaTieTol * std::max(1.0, std::abs(delta))) {
                continue;
            }
            const double r = curves[c].eval(delta);
            if (r < best) {
                best = r;
                arg = static_cast<std::int64_t>(c);
            }
        }
        if (arg < 0) {
            throw std::invalid_argument("pointwise_min: no curve defined at grid point");
        }
        CurvePoint p;
        p.delta = delta;
        p.rate = best;
        p.witness = arg;
        out.push_back(p);
    }
    return out;
}

PiecewiseLinearCurve restrict_curve(const PiecewiseLinearCurve& curve, double lo, double hi) {
    if (curve.empty()) throw std::invalid_argument("restrict_curve: empty curve");
    if (!(lo <= hi)) throw std::invalid_argument("restrict_curve: lo > hi");
    PiecewiseLinearCurve out;
    auto boundary_vertex = [&](double delta) {
        CurvePoint p;
        p.delta = delta;
        p.rate = curve.eval(delta);
        std::ptrdiff_t s = curve.segment_at(delta);
        p.witness = s >= 0 ? curve.vertices[s].witness : curve.vertices.front().witness;
        return p;
    };
    const double tol = kDeltaTieTol;
    bool need_lo = true, need_hi = true;
    for (const auto& v : curve.vertices) {
        if (v.delta < lo - tol || v.delta > hi + tol) continue;
        if (std::abs(v.delta - lo) <= tol) need_lo = false;
        if (std::abs(v.delta - hi) <= tol) need_hi = false;
    }
    if (need_lo && lo > curve.delta_hi()) need_hi = false;  // degenerate: flat tail only
    if (need_lo) out.vertices.push_back(boundary_vertex(lo));
    for (const auto& v : curve.vertices) {
        if (v.delta >= lo - tol && v.delta <= hi + tol) out.vertices.push_back(v);
    }
    if (need_hi && hi > out.vertices.back().delta + tol) {
        out.vertices.push_back(boundary_vertex(hi));
    }
    out.rebuild_segments();
    return out;
}

}  // namespace srdf
