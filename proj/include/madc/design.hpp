#pragma once

// t-(Λ, α, m) designs: representation, exhaustive validation, JSON I/O and a
// small catalog of Steiner systems.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "madc/error.hpp"
#include "madc/subsets.hpp"

namespace madc {

/// Points are 1..num_points. Block order is significant: it fixes the column
/// order of the array and the reducer order of the topology.
struct Design {
    int num_points = 0;  // Λ
    int t = 0;
    int alpha = 0;  // block size α
    int m = 0;      // every t-subset lies in exactly m blocks
    std::vector<KSubset> blocks;

    std::size_t num_blocks() const noexcept { return blocks.size(); }
    std::string label() const {
        return std::to_string(t) + "-(" + std::to_string(num_points) + "," +
               std::to_string(alpha) + "," + std::to_string(m) + ")";
    }
    friend bool operator==(const Design&, const Design&) = default;
};

struct DesignViolation {
    std::string kind;  // "parameters", "block size mismatch", "point out of range", "coverage", "block count"
    std::string message;
    KSubset subset;            // offending block or t-subset, when applicable
    std::uint64_t count = 0;   // observed coverage / size / block count
};

struct DesignReport {
    bool valid = true;
    std::vector<DesignViolation> violations;

    nlohmann::json to_json() const {
        nlohmann::json out;
        out["valid"] = valid;
        out["violations"] = nlohmann::json::array();
        for (const auto& v : violations) {
            nlohmann::json item{{"kind", v.kind}, {"message", v.message}};
            if (!v.subset.empty()) item["subset"] = v.subset.points();
            item["count"] = v.count;
            out["violations"].push_back(std::move(item));
        }
        return out;
    }

    std::string summary() const {
        std::string s;
        for (const auto& v : violations) {
            if (!s.empty()) s += "; ";
            s += v.message;
        }
        return s;
    }
};

/// Checks every t-design property by enumeration of all C(Λ, t) t-subsets.
inline DesignReport validate_design(const Design& d) {
    DesignReport report;
    auto fail = [&](std::string kind, std::string message, KSubset subset = {},
                    std::uint64_t count = 0) {
        report.valid = false;
        report.violations.push_back({std::move(kind), std::move(message), std::move(subset), count});
    };

    const bool params_ok = d.t >= 1 && d.alpha >= d.t && d.num_points > d.alpha && d.m >= 1 &&
                           d.num_points <= kMaxGroundSet;
    if (!params_ok) {
        fail("parameters", "parameters " + d.label() + " violate Λ > α >= t >= 1, m >= 1, Λ <= " +
                               std::to_string(kMaxGroundSet));
    }
    bool blocks_ok = true;
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
        const KSubset& b = d.blocks[i];
        if (static_cast<int>(b.size()) != d.alpha) {
            blocks_ok = false;
            fail("block size mismatch",
                 "block size mismatch: block " + std::to_string(i + 1) + " " + b.to_string() +
                     " has " + std::to_string(b.size()) + " points, expected " +
                     std::to_string(d.alpha),
                 b, b.size());
        }
        if (!b.empty() && b.max() > d.num_points) {
            blocks_ok = false;
            fail("point out of range",
                 "block " + std::to_string(i + 1) + " " + b.to_string() + " has a point above " +
                     std::to_string(d.num_points),
                 b, static_cast<std::uint64_t>(b.max()));
        }
    }
    if (!params_ok) return report;

    if (blocks_ok) {
        for (const KSubset& ts : enumerate_subsets(d.num_points, d.t)) {
            std::uint64_t covered = 0;
            for (const KSubset& b : d.blocks) covered += ts.is_subset_of(b) ? 1 : 0;
            if (covered != static_cast<std::uint64_t>(d.m)) {
                fail("coverage",
                     "t-subset " + ts.to_string() + " covered " + std::to_string(covered) +
                         " times, expected " + std::to_string(d.m),
                     ts, covered);
            }
        }
    }
    const std::uint64_t num = static_cast<std::uint64_t>(d.m) * binomial(d.num_points, d.t);
    const std::uint64_t den = binomial(d.alpha, d.t);
    if (num % den != 0 || num / den != d.blocks.size()) {
        fail("block count",
             "design has " + std::to_string(d.blocks.size()) + " blocks, expected m*C(Λ,t)/C(α,t) = " +
                 std::to_string(num) + "/" + std::to_string(den),
             {}, d.blocks.size());
    }
    return report;
}

struct DesignStats {
    std::uint64_t num_blocks = 0;
    std::uint64_t replication = 0;  // blocks through each point
    friend bool operator==(const DesignStats&, const DesignStats&) = default;
};

/// Closed-form block count and replication number, cross-checked against the blocks.
inline DesignStats design_stats(const Design& d) {
    const DesignReport report = validate_design(d);
    if (!report.valid) throw ValidationError("design_stats: invalid design: " + report.summary());

    const auto m = static_cast<std::uint64_t>(d.m);
    DesignStats stats;
    stats.num_blocks = m * binomial(d.num_points, d.t) / binomial(d.alpha, d.t);
    stats.replication = m * binomial(d.num_points - 1, d.t - 1) / binomial(d.alpha - 1, d.t - 1);

    if (stats.num_blocks != d.blocks.size()) {
        throw std::logic_error("design_stats: block count disagrees with closed form");
    }
    for (int p = 1; p <= d.num_points; ++p) {
        std::uint64_t through = 0;
        for (const KSubset& b : d.blocks) through += b.contains(p) ? 1 : 0;
        if (through != stats.replication) {
            throw std::logic_error("design_stats: point " + std::to_string(p) + " lies in " +
                                   std::to_string(through) + " blocks, closed form gives " +
                                   std::to_string(stats.replication));
        }
    }
    return stats;
}

inline Design fano_plane() {
    return Design{7, 2, 3, 1,
                  {{1, 2, 3}, {1, 4, 5}, {1, 6, 7}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 5, 6}}};
}

/// Bose construction of a 2-(v, 3, 1) design for v ≡ 3 (mod 6), v >= 9.
///
/// Points (x, i) with x in Z_{2n+1}, i in Z_3 map to 1 + x + i(2n+1). The
/// idempotent commutative quasigroup is x∘y = (x + y)(n + 1) mod (2n + 1).
/// Blocks: {(x,0),(x,1),(x,2)} for every x, then {(x,i),(y,i),(x∘y,i+1)} for x < y.
inline Design steiner_triple_system(int v) {
    if (v < 9 || v % 6 != 3) {
        throw UnsupportedDesign("steiner_triple_system: order " + std::to_string(v) +
                                " unsupported, need v ≡ 3 (mod 6) and v >= 9");
    }
    if (v > kMaxGroundSet) {
        throw UnsupportedDesign("steiner_triple_system: order " + std::to_string(v) +
                                " exceeds the supported ground set");
    }
    const int order = v / 3;  // 2n + 1
    const int half = (order + 1) / 2;  // inverse of 2 modulo 2n + 1
    auto point = [order](int x, int i) { return 1 + x + i * order; };
    auto op = [order, half](int x, int y) { return ((x + y) * half) % order; };

    Design d{v, 2, 3, 1, {}};
    d.blocks.reserve(static_cast<std::size_t>(v * (v - 1) / 6));
    for (int x = 0; x < order; ++x) d.blocks.push_back({point(x, 0), point(x, 1), point(x, 2)});
    for (int i = 0; i < 3; ++i) {
        for (int x = 0; x < order; ++x) {
            for (int y = x + 1; y < order; ++y) {
                d.blocks.push_back({point(x, i), point(y, i), point(op(x, y), (i + 1) % 3)});
            }
        }
    }
    const DesignReport report = validate_design(d);
    if (!report.valid) {
        throw std::logic_error("steiner_triple_system(" + std::to_string(v) +
                               ") produced an invalid design: " + report.summary());
    }
    return d;
}

/// Named Steiner systems available to the CLI by name.
inline std::map<std::string, Design> catalog() {
    std::map<std::string, Design> out;
    out.emplace("fano", fano_plane());
    out.emplace("sts9", steiner_triple_system(9));
    out.emplace("sts15", steiner_triple_system(15));
    // Planes of AG(3, 2): 4-subsets of F_2^3 with zero sum, points shifted by one.
    out.emplace("s_3_4_8", Design{8, 3, 4, 1,
                                  {{1, 2, 3, 4}, {1, 2, 5, 6}, {1, 2, 7, 8}, {1, 3, 5, 7},
                                   {1, 3, 6, 8}, {1, 4, 5, 8}, {1, 4, 6, 7}, {2, 3, 5, 8},
                                   {2, 3, 6, 7}, {2, 4, 5, 7}, {2, 4, 6, 8}, {3, 4, 5, 6},
                                   {3, 4, 7, 8}, {5, 6, 7, 8}}});
    // PG(2, 3): translates of the difference set {0, 1, 3, 9} mod 13.
    out.emplace("s_2_4_13", Design{13, 2, 4, 1,
                                   {{1, 2, 4, 10}, {2, 3, 5, 11}, {3, 4, 6, 12}, {4, 5, 7, 13},
                                    {1, 5, 6, 8}, {2, 6, 7, 9}, {3, 7, 8, 10}, {4, 8, 9, 11},
                                    {5, 9, 10, 12}, {6, 10, 11, 13}, {1, 7, 11, 12},
                                    {2, 8, 12, 13}, {1, 3, 9, 13}}});
    return out;
}

inline nlohmann::json design_to_json(const Design& d) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : d.blocks) blocks.push_back(b.points());
    return {{"num_points", d.num_points}, {"t", d.t}, {"alpha", d.alpha}, {"m", d.m},
            {"blocks", std::move(blocks)}};
}

/// Parses the design file format without checking design properties.
inline Design parse_design(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("design JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("design JSON: top level must be an object");
    static const char* const kKeys[] = {"num_points", "t", "alpha", "m", "blocks"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
            throw ParseError("design JSON: unknown key \"" + key + "\"");
        }
    }
    auto integer = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_number_integer()) {
            throw ParseError(std::string("design JSON: \"") + key + "\" must be an integer");
        }
        return j[key].get<int>();
    };
    Design d;
    d.num_points = integer("num_points");
    d.t = integer("t");
    d.alpha = integer("alpha");
    d.m = integer("m");
    if (!j.contains("blocks") || !j["blocks"].is_array()) {
        throw ParseError("design JSON: \"blocks\" must be an array");
    }
    for (const auto& jb : j["blocks"]) {
        if (!jb.is_array()) throw ParseError("design JSON: every block must be an array");
        std::vector<int> pts;
        for (const auto& p : jb) {
            if (!p.is_number_integer()) throw ParseError("design JSON: block points must be integers");
            const int v = p.get<int>();
            if (!pts.empty() && v <= pts.back()) {
                throw ParseError("design JSON: block " + jb.dump() + " is not sorted ascending");
            }
            pts.push_back(v);
        }
        try {
            d.blocks.emplace_back(std::move(pts));
        } catch (const ValidationError& e) {
            throw ParseError(std::string("design JSON: ") + e.what());
        }
    }
    return d;
}

/// Parses and validates; an invalid design is reported as ValidationError.
inline Design load_design(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    Design d = parse_design(buf.str());
    const DesignReport report = validate_design(d);
    if (!report.valid) throw ValidationError("invalid design: " + report.summary());
    return d;
}

inline Design load_design_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open design file " + path);
    return load_design(in);
}

}  // namespace madc
