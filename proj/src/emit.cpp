#include "srdf/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace srdf {

std::string format_sig9(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

namespace {

std::string witness_at(const SrdfResult& result, double delta) {
    const auto& curve = result.curve;
    if (curve.vertices.size() < 2) {
        return curve.vertices.empty() ? std::string("?")
                                      : result.witness_label(curve.vertices.front().witness);
    }
    // On an exact vertex hit prefer an adjacent pure segment's witness: a
    // sampler covering a whole neighboring span also achieves the vertex,
    // whereas the vertex tag alone may be an arbitrary tie-winner.
    for (std::size_t i = 0; i < curve.vertices.size(); ++i) {
        const auto& v = curve.vertices[i];
        if (std::abs(v.delta - delta) > 1e-12 * std::max(1.0, std::abs(delta))) continue;
        if (i > 0 && curve.segments[i - 1].pure) {
            return result.witness_label(curve.segments[i - 1].pure_witness);
        }
        if (i < curve.segments.size() && curve.segments[i].pure) {
            return result.witness_label(curve.segments[i].pure_witness);
        }
        return result.witness_label(v.witness);
    }
    if (delta >= curve.delta_hi()) return result.witness_label(curve.vertices.back().witness);
    const std::ptrdiff_t s = curve.segment_at(delta);
    const auto& seg = curve.segments[s];
    if (seg.pure) return result.witness_label(seg.pure_witness);
    const auto& l = curve.vertices[s];
    const auto& r = curve.vertices[s + 1];
    const double theta = (r.delta - delta) / (r.delta - l.delta);
    return result.witness_label(seg.witness_left) + ":" + format_sig9(theta) + "+" +
           result.witness_label(seg.witness_right) + ":" + format_sig9(1.0 - theta);
}

}  // namespace

CurveEmission tabulate_curve(const SrdfResult& result, const std::string& name, int grid_points) {
    CurveEmission em;
    em.name = name;
    if (result.curve.vertices.empty()) return em;
    const double lo = result.curve.delta_lo();
    const double hi = result.curve.delta_hi();
    std::vector<double> grid;
    if (hi - lo <= 1e-15 || grid_points < 2) {
        grid.push_back(lo);
    } else {
        grid = linspace(lo, hi, grid_points);
    }
    double prev = -std::numeric_limits<double>::infinity();
    for (double delta : grid) {
        if (delta <= prev) continue;
        prev = delta;
        CurveRow row;
        row.delta = delta;
        row.rate = std::max(result.curve.eval(delta), 0.0);
        row.lambda = std::max(-result.curve.slope_at(delta), 0.0);
        row.witness = witness_at(result, delta);
        em.rows.push_back(std::move(row));
    }
    return em;
}

std::string to_csv(const CurveEmission& emission) {
    std::ostringstream out;
    out << "delta,rate,lambda,witness\n";
    for (const auto& r : emission.rows) {
        out << format_sig9(r.delta) << "," << format_sig9(r.rate) << "," << format_sig9(r.lambda)
            << "," << r.witness << "\n";
    }
    return out.str();
}

std::string to_json(const CurveEmission& emission, const std::string& spec_hash_hex,
                    std::uint64_t seed, const std::string& tool_version) {
    std::ostringstream out;
    out << "{\n  \"name\": \"" << emission.name << "\",\n";
    out << "  \"spec_hash\": \"" << spec_hash_hex << "\",\n";
    out << "  \"seed\": " << seed << ",\n";
    out << "  \"tool_version\": \"" << tool_version << "\",\n";
    out << "  \"rows\": [\n";
    for (std::size_t i = 0; i < emission.rows.size(); ++i) {
        const auto& r = emission.rows[i];
        out << "    {\"delta\": " << format_sig9(r.delta) << ", \"rate\": " << format_sig9(r.rate)
            << ", \"lambda\": " << format_sig9(r.lambda) << ", \"witness\": \"" << r.witness
            << "\"}" << (i + 1 < emission.rows.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace srdf
