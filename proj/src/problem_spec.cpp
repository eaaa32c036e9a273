#include "srdf/problem_spec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <type_traits>

#include "json.hpp"

namespace srdf {

using nlohmann::json;

JointPmf ProblemSpec::source_pmf() const {
    return JointPmf(components, pmf);
}

DistortionTable ProblemSpec::distortion_table() const {
    return DistortionTable(source_size(), repro_size(), distortion, forbidden);
}

std::size_t ProblemSpec::source_size() const {
    std::size_t n = 1;
    for (const auto& c : components) n *= c.size();
    return n;
}

std::size_t ProblemSpec::repro_size() const {
    std::size_t n = 1;
    for (const auto& c : reproduction) n *= c.size();
    return n;
}

namespace {

void parse_alphabets(const json& j, const char* key, std::vector<ComponentAlphabet>& out,
                     std::vector<std::string>& errors) {
    if (!j.contains(key)) {
        errors.push_back(std::string("/") + key + ": missing required field");
        return;
    }
    const json& arr = j.at(key);
    if (!arr.is_array() || arr.empty()) {
        errors.push_back(std::string("/") + key + ": must be a nonempty array");
        return;
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = std::string("/") + key + "/" + std::to_string(i);
        const json& c = arr[i];
        if (!c.is_object()) {
            errors.push_back(path + ": must be an object with name and symbols");
            continue;
        }
        ComponentAlphabet alpha;
        for (auto it = c.begin(); it != c.end(); ++it) {
            if (it.key() != "name" && it.key() != "symbols") {
                errors.push_back(path + "/" + it.key() + ": unknown field");
            }
        }
        if (c.contains("name") && c.at("name").is_string()) {
            alpha.name = c.at("name").get<std::string>();
        } else {
            errors.push_back(path + "/name: missing or not a string");
        }
        if (c.contains("symbols") && c.at("symbols").is_array() && !c.at("symbols").empty()) {
            for (const auto& s : c.at("symbols")) {
                if (s.is_string()) {
                    alpha.symbols.push_back(s.get<std::string>());
                } else {
                    errors.push_back(path + "/symbols: entries must be strings");
                }
            }
            std::set<std::string> uniq(alpha.symbols.begin(), alpha.symbols.end());
            if (uniq.size() != alpha.symbols.size()) {
                errors.push_back(path + "/symbols: duplicate symbols");
            }
        } else {
            errors.push_back(path + "/symbols: missing or empty");
        }
        out.push_back(std::move(alpha));
    }
}

}  // namespace

SpecParseResult parse_problem_spec(const std::string& text) {
    SpecParseResult res;
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
        res.errors.push_back("/: not valid JSON");
        return res;
    }
    if (!j.is_object()) {
        res.errors.push_back("/: top level must be an object");
        return res;
    }
    static const std::set<std::string> known = {"components", "reproduction", "pmf",
                                                "distortion", "k", "options"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) res.errors.push_back("/" + it.key() + ": unknown field");
    }

    ProblemSpec spec;
    parse_alphabets(j, "components", spec.components, res.errors);
    parse_alphabets(j, "reproduction", spec.reproduction, res.errors);

    std::size_t nx = 1, ny = 1;
    for (const auto& c : spec.components) nx *= std::max<std::size_t>(c.size(), 1);
    for (const auto& c : spec.reproduction) ny *= std::max<std::size_t>(c.size(), 1);

    if (!j.contains("pmf") || !j.at("pmf").is_array()) {
        res.errors.push_back("/pmf: missing or not an array");
    } else {
        const json& arr = j.at("pmf");
        double sum = 0.0;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_number()) {
                res.errors.push_back("/pmf/" + std::to_string(i) + ": not a number");
                spec.pmf.push_back(0.0);
                continue;
            }
            double v = arr[i].get<double>();
            if (v < 0.0 || !std::isfinite(v)) {
                res.errors.push_back("/pmf/" + std::to_string(i) + ": negative probability");
            }
            spec.pmf.push_back(v);
            sum += v;
        }
        if (!spec.components.empty() && spec.pmf.size() != nx) {
            res.errors.push_back("/pmf: length " + std::to_string(spec.pmf.size()) +
                                 " does not match alphabet product " + std::to_string(nx));
        } else if (std::abs(sum - 1.0) > 1e-9) {
            res.errors.push_back("/pmf: mass " + std::to_string(sum) + " not within 1e-9 of 1");
        }
    }

    if (!j.contains("distortion") || !j.at("distortion").is_array()) {
        res.errors.push_back("/distortion: missing or not an array");
    } else {
        const json& arr = j.at("distortion");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "/distortion/" + std::to_string(i);
            if (arr[i].is_string()) {
                if (arr[i].get<std::string>() == "forbidden") {
                    spec.distortion.push_back(0.0);
                    spec.forbidden.push_back(1);
                } else {
                    res.errors.push_back(path + ": string entries must be \"forbidden\"");
                    spec.distortion.push_back(0.0);
                    spec.forbidden.push_back(0);
                }
            } else if (arr[i].is_number()) {
                double v = arr[i].get<double>();
                if (v < 0.0 || !std::isfinite(v)) {
                    res.errors.push_back(path + ": must be finite and nonnegative");
                }
                spec.distortion.push_back(v);
                spec.forbidden.push_back(0);
            } else {
                res.errors.push_back(path + ": must be a number or \"forbidden\"");
                spec.distortion.push_back(0.0);
                spec.forbidden.push_back(0);
            }
        }
        if (!spec.components.empty() && !spec.reproduction.empty() &&
            spec.distortion.size() != nx * ny) {
            res.errors.push_back("/distortion: length " + std::to_string(spec.distortion.size()) +
                                 " does not match " + std::to_string(nx) + "x" + std::to_string(ny));
        } else {
            for (std::size_t z = 0; z < nx && spec.distortion.size() == nx * ny; ++z) {
                bool any = false;
                for (std::size_t y = 0; y < ny && !any; ++y) any = spec.forbidden[z * ny + y] == 0;
                if (!any) {
                    res.errors.push_back("/distortion: source index " + std::to_string(z) +
                                         " has every reproduction forbidden");
                }
            }
        }
    }

    if (!j.contains("k") || !j.at("k").is_number_integer()) {
        res.errors.push_back("/k: missing or not an integer");
    } else {
        long long k = j.at("k").get<long long>();
        if (k < 1 || static_cast<std::size_t>(k) > spec.components.size()) {
            res.errors.push_back("/k: must lie in [1, number of components]");
        } else {
            spec.k = static_cast<std::size_t>(k);
        }
    }

    if (j.contains("options")) {
        const json& o = j.at("options");
        if (!o.is_object()) {
            res.errors.push_back("/options: must be an object");
        } else {
            static const std::set<std::string> opt_keys = {
                "lambda_min", "lambda_max", "lambda_points", "tol", "max_iter",
                "grid",       "cap",        "threads",       "seed"};
            for (auto it = o.begin(); it != o.end(); ++it) {
                if (!opt_keys.count(it.key())) {
                    res.errors.push_back("/options/" + it.key() + ": unknown field");
                }
            }
            auto num = [&](const char* key, double lo, double& out) {
                if (!o.contains(key)) return;
                if (!o.at(key).is_number() || o.at(key).get<double>() < lo) {
                    res.errors.push_back(std::string("/options/") + key + ": invalid value");
                    return;
                }
                out = o.at(key).get<double>();
            };
            auto integer = [&](const char* key, long long lo, auto& out) {
                if (!o.contains(key)) return;
                if (!o.at(key).is_number_integer() || o.at(key).get<long long>() < lo) {
                    res.errors.push_back(std::string("/options/") + key + ": invalid value");
                    return;
                }
                out = static_cast<std::remove_reference_t<decltype(out)>>(o.at(key).get<long long>());
            };
            num("lambda_min", 1e-12, spec.options.lambda_min);
            num("lambda_max", 1e-12, spec.options.lambda_max);
            integer("lambda_points", 2, spec.options.lambda_points);
            num("tol", 0.0, spec.options.tol);
            integer("max_iter", 1, spec.options.max_iter);
            integer("grid", 2, spec.options.grid);
            integer("cap", 1, spec.options.cap);
            integer("threads", 0, spec.options.threads);
            integer("seed", 0, spec.options.seed);
        }
    }

    if (res.errors.empty()) {
        // construction re-checks invariants (renormalization happens here)
        try {
            spec.source_pmf();
            spec.distortion_table();
        } catch (const std::exception& e) {
            res.errors.push_back(std::string("/: ") + e.what());
        }
    }
    if (res.errors.empty()) res.spec = std::move(spec);
    return res;
}

namespace {

json alphabets_json(const std::vector<ComponentAlphabet>& alphas) {
    json arr = json::array();
    for (const auto& a : alphas) {
        json c;
        c["name"] = a.name;
        c["symbols"] = a.symbols;
        arr.push_back(std::move(c));
    }
    return arr;
}

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string serialize_problem_spec(const ProblemSpec& spec) {
    std::ostringstream out;
    out << "{\n  \"components\": " << alphabets_json(spec.components).dump();
    out << ",\n  \"reproduction\": " << alphabets_json(spec.reproduction).dump();
    out << ",\n  \"pmf\": [";
    for (std::size_t i = 0; i < spec.pmf.size(); ++i) {
        out << (i ? "," : "") << fmt17(spec.pmf[i]);
    }
    out << "],\n  \"distortion\": [";
    for (std::size_t i = 0; i < spec.distortion.size(); ++i) {
        out << (i ? "," : "");
        if (spec.forbidden[i]) {
            out << "\"forbidden\"";
        } else {
            out << fmt17(spec.distortion[i]);
        }
    }
    out << "],\n  \"k\": " << spec.k;
    const SolverOptions& o = spec.options;
    out << ",\n  \"options\": {\"lambda_min\": " << fmt17(o.lambda_min)
        << ", \"lambda_max\": " << fmt17(o.lambda_max)
        << ", \"lambda_points\": " << o.lambda_points << ", \"tol\": " << fmt17(o.tol)
        << ", \"max_iter\": " << o.max_iter << ", \"grid\": " << o.grid << ", \"cap\": " << o.cap
        << ", \"threads\": " << o.threads << ", \"seed\": " << o.seed << "}\n}\n";
    return out.str();
}

std::string spec_hash(const ProblemSpec& spec) {
    const std::string s = serialize_problem_spec(spec);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ProblemSpec example1_spec() {
    ProblemSpec spec;
    spec.components = {{"1", {"0", "1"}}, {"2", {"0", "1"}}};
    spec.reproduction = {{"1", {"0", "1", "e"}}, {"2", {"0", "1"}}};
    spec.pmf = {0.25, 0.25, 0.25, 0.25};
    spec.k = 1;

    // additive cost: first coordinate keeps/erases/flips (flips forbidden),
    // second coordinate pays an error indicator
    const std::size_t ny = 6;  // (y1, y2) with y1 in {0,1,e}, y2 in {0,1}
    spec.distortion.assign(4 * ny, 0.0);
    spec.forbidden.assign(4 * ny, 0);
    for (std::size_t x1 = 0; x1 < 2; ++x1) {
        for (std::size_t x2 = 0; x2 < 2; ++x2) {
            const std::size_t x = x1 * 2 + x2;
            for (std::size_t y1 = 0; y1 < 3; ++y1) {
                for (std::size_t y2 = 0; y2 < 2; ++y2) {
                    const std::size_t y = y1 * 2 + y2;
                    if (y1 < 2 && y1 != x1) {
                        spec.forbidden[x * ny + y] = 1;
                        continue;
                    }
                    const double d1 = (y1 == 2) ? 1.0 : 0.0;
                    const double d2 = (y2 == x2) ? 0.0 : 1.0;
                    spec.distortion[x * ny + y] = d1 + d2;
                }
            }
        }
    }
    return spec;
}

ProblemSpec example2_spec(double p, double q) {
    if (!(p > 0.0 && p <= 0.5)) throw std::invalid_argument("example2_spec: need 0 < p <= 0.5");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("example2_spec: need 0 < q < 1");
    ProblemSpec spec;
    spec.components = {{"1", {"0", "1"}}, {"2", {"0", "1"}}};
    spec.reproduction = {{"1", {"0", "1"}}, {"2", {"0", "1"}}};
    // first bit Bernoulli(p), second bit its crossover-q flip
    spec.pmf = {(1 - p) * (1 - q), (1 - p) * q, p * q, p * (1 - q)};
    spec.k = 1;
    spec.distortion.assign(16, 1.0);
    spec.forbidden.assign(16, 0);
    for (std::size_t x = 0; x < 4; ++x) spec.distortion[x * 4 + x] = 0.0;
    return spec;
}

SubsetIndex parse_subset(const ProblemSpec& spec, const std::string& names) {
    std::vector<std::size_t> members;
    std::stringstream ss(names);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        // trim whitespace
        const auto b = tok.find_first_not_of(" \t");
        const auto e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        tok = tok.substr(b, e - b + 1);
        bool found = false;
        for (std::size_t i = 0; i < spec.components.size(); ++i) {
            if (spec.components[i].name == tok) {
                members.push_back(i);
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("unknown component name '" + tok + "'");
    }
    std::sort(members.begin(), members.end());
    return SubsetIndex(members);
}

}  // namespace srdf
