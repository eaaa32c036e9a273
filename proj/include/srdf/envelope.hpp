#pragma once

// Lower convex envelope geometry. A piecewise-linear curve is a polyline over
// (delta, rate) vertices sorted by delta; envelopes additionally have a
// strictly convex vertex set. Each envelope segment mixes at most two
// contributing witnesses, which is how time-sharing is realized.

#include <cmath>
#include <cstdint>
#include <vector>

#include "srdf/errors.hpp"

namespace srdf {

struct CurvePoint {
    double delta = 0.0;
    double rate = 0.0;
    std::int64_t witness = -1;  // opaque tag: sampler id / subset id / curve index
    double lambda = std::numeric_limits<double>::quiet_NaN();
    std::int64_t payload = -1;  // optional index into a caller-side witness store
};

struct CurveSegment {
    std::int64_t witness_left = -1;
    std::int64_t witness_right = -1;
    bool pure = false;            // a single witness realizes the whole segment
    std::int64_t pure_witness = -1;
};

class PiecewiseLinearCurve {
public:
    std::vector<CurvePoint> vertices;   // sorted by delta ascending
    std::vector<CurveSegment> segments; // vertices.size() - 1 entries (empty for 1 vertex)

    bool empty() const { return vertices.empty(); }
    double delta_lo() const { return vertices.front().delta; }
    double delta_hi() const { return vertices.back().delta; }

    // Linear interpolation; beyond the last vertex returns the last rate.
    // Throws infeasible_distortion_error below the first vertex.
    double eval(double delta) const;

    // Segment index covering delta (clamped right); -1 for single-vertex curves.
    std::ptrdiff_t segment_at(double delta) const;

    // Local slope at delta (0 beyond the last vertex).
    double slope_at(double delta) const;

    void rebuild_segments();
};

// Greatest convex minorant of the input points on [min delta, max delta].
// Ties in delta keep the lowest rate; collinear interior points are removed,
// so the vertex set is strictly convex. Throws on empty input.
PiecewiseLinearCurve lower_convex_envelope(std::vector<CurvePoint> points);

// Pointwise minimum over curves at each grid delta, carrying the argmin curve
// index as witness. Curves whose domain starts above a grid point are skipped
// there; a grid point covered by no curve throws.
std::vector<CurvePoint> pointwise_min(const std::vector<PiecewiseLinearCurve>& curves,
                                      const std::vector<double>& grid);

// Restriction of a curve to [lo, hi], interpolating boundary vertices.
PiecewiseLinearCurve restrict_curve(const PiecewiseLinearCurve& curve, double lo, double hi);

}  // namespace srdf
