#pragma once

// Exact communication/computation loads and the comparison against the
// combinatorial topology (one reducer per α-subset of mappers).

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "madc/engine.hpp"
#include "madc/error.hpp"
#include "madc/rational.hpp"
#include "madc/subsets.hpp"
#include "madc/topology.hpp"

namespace madc {

/// (Λ − α) / (Λ·t): load of the coded scheme on a t-(Λ,α,1) topology.
inline Rational theoretical_load(int lambda, int alpha, int t) {
    if (!(lambda > alpha && alpha >= t && t >= 1)) {
        throw ValidationError("theoretical_load: need Λ > α >= t >= 1, got (" + std::to_string(lambda) + "," +
                              std::to_string(alpha) + "," + std::to_string(t) + ")");
    }
    return Rational(lambda - alpha, static_cast<std::int64_t>(lambda) * t);
}

/// Each reducer receives its missing IVs uncoded: (Λ − α) / Λ.
inline Rational uncoded_load(int lambda, int alpha) {
    if (!(lambda > alpha && alpha >= 1)) throw ValidationError("uncoded_load: need Λ > α >= 1");
    return Rational(lambda - alpha, lambda);
}

struct LoadReport {
    Rational computation_load;
    Rational measured_comm_load;
    Rational theoretical_comm_load;
    Rational uncoded_comm_load;
    Rational gain_factor;
    std::uint64_t total_bits = 0;
    std::uint64_t symbol_count = 0;
    std::uint64_t symbol_bits = 0;
    int lambda = 0;
    int alpha = 0;
    int t = 0;
    std::uint64_t K = 0;
    std::uint64_t N = 0;
    std::uint64_t Q = 0;
    std::uint64_t eta1 = 0;
    std::uint64_t eta2 = 0;
    std::uint64_t beta = 0;

    bool measured_matches_theory() const { return measured_comm_load == theoretical_comm_load; }

    nlohmann::json to_json() const {
        return {{"computation_load", rational_json(computation_load)},
                {"measured_comm_load", rational_json(measured_comm_load)},
                {"theoretical_comm_load", rational_json(theoretical_comm_load)},
                {"uncoded_comm_load", rational_json(uncoded_comm_load)},
                {"gain_factor", rational_json(gain_factor)},
                {"total_bits", total_bits},
                {"symbol_count", symbol_count},
                {"symbol_bits", symbol_bits},
                {"parameters",
                 {{"lambda", lambda}, {"alpha", alpha}, {"t", t}, {"K", K}, {"N", N}, {"Q", Q},
                  {"eta1", eta1}, {"eta2", eta2}, {"beta", beta}}}};
    }
};

/// Loads measured from the transcript: L = Σ payload bits / (Q·N·β).
inline LoadReport measured_loads(const ShuffleTranscript& transcript, const MadcTopology& topo, const SimConfig& cfg) {
    LoadReport r;
    std::uint64_t bits = 0;
    for (const CodedSymbol& c : transcript.symbols) bits += c.payload.size();
    if (bits != transcript.total_bits) {
        throw std::logic_error("measured_loads: transcript total_bits disagrees with its payloads");
    }
    r.total_bits = bits;
    r.symbol_count = transcript.symbols.size();
    r.symbol_bits = transcript.symbols.empty() ? 0 : transcript.symbols.front().payload.size();
    r.lambda = topo.num_mappers;
    r.alpha = topo.alpha;
    r.t = topo.t;
    r.K = topo.K();
    r.N = topo.N;
    r.Q = topo.Q;
    r.eta1 = topo.eta1;
    r.eta2 = topo.eta2;
    r.beta = cfg.beta;
    r.computation_load = computation_load(topo);
    r.measured_comm_load =
        Rational(static_cast<std::int64_t>(bits), static_cast<std::int64_t>(topo.Q * topo.N * cfg.beta));
    r.theoretical_comm_load = theoretical_load(topo.num_mappers, topo.alpha, topo.t);
    r.uncoded_comm_load = uncoded_load(topo.num_mappers, topo.alpha);
    if (r.measured_comm_load != Rational(0)) r.gain_factor = r.uncoded_comm_load / r.measured_comm_load;
    return r;
}

/// Table-style comparison with the combinatorial topology.
struct CtComparison {
    int lambda = 0;
    int alpha = 0;
    int t = 0;
    std::uint64_t K_tdesign = 0;  // C(Λ,t)/C(α,t)
    std::uint64_t K_ct = 0;       // C(Λ,α)
    std::uint64_t batches = 0;    // F = Λ
    std::uint64_t files = 0;      // N = Λ (one file per batch)
    std::uint64_t Q_tdesign = 0;  // one function per reducer
    std::uint64_t Q_ct = 0;
    Rational load_tdesign;
    std::optional<std::string> ct_reference_load;  // only where a reference figure exists

    nlohmann::json to_json() const {
        nlohmann::json j{{"lambda", lambda}, {"alpha", alpha}, {"t", t},
                         {"mappers", {{"tdesign", lambda}, {"ct", lambda}}},
                         {"reducers", {{"tdesign", K_tdesign}, {"ct", K_ct}}},
                         {"batches", {{"tdesign", batches}, {"ct", batches}}},
                         {"files", {{"tdesign", files}, {"ct", files}}},
                         {"output_functions", {{"tdesign", Q_tdesign}, {"ct", Q_ct}}},
                         {"comm_load",
                          {{"tdesign", to_decimal(load_tdesign, 2)},
                           {"tdesign_exact", rational_json(load_tdesign)},
                           {"ct", ct_reference_load ? nlohmann::json(*ct_reference_load) : nlohmann::json(nullptr)}}}};
        return j;
    }

    std::string to_text() const {
        const std::string ct_load = ct_reference_load.value_or("n/a");
        std::ostringstream out;
        auto row = [&](const std::string& name, const std::string& a, const std::string& b) {
            out << name;
            for (std::size_t i = name.size(); i < 34; ++i) out << ' ';
            out << a;
            for (std::size_t i = a.size(); i < 10; ++i) out << ' ';
            out << b << '\n';
        };
        row("Parameters", "t-design", "CT");
        row("No. of mappers: Lambda", std::to_string(lambda), std::to_string(lambda));
        row("No. of reducers: K", std::to_string(K_tdesign), std::to_string(K_ct));
        row("No. of batches: F", std::to_string(batches), std::to_string(batches));
        row("No. of files: N", std::to_string(files), std::to_string(files));
        row("No. of output functions: Q", std::to_string(Q_tdesign), std::to_string(Q_ct));
        row("Communication load: L", to_decimal(load_tdesign, 2), ct_load);
        return out.str();
    }
};

/// Reference CT load for Λ = 7, α = 3, r = 1; not recomputed here.
inline constexpr const char* kCtReferenceLoad_7_3 = "0.19";

inline CtComparison ct_comparison(int lambda, int alpha, int t) {
    if (!(lambda > alpha && alpha >= t && t >= 1)) {
        throw ValidationError("ct_comparison: need Λ > α >= t >= 1");
    }
    const std::uint64_t num = binomial(lambda, t);
    const std::uint64_t den = binomial(alpha, t);
    if (num % den != 0) {
        throw ValidationError("ct_comparison: C(Λ,t) not divisible by C(α,t), no t-(" + std::to_string(lambda) + "," +
                              std::to_string(alpha) + ",1) design exists");
    }
    CtComparison c;
    c.lambda = lambda;
    c.alpha = alpha;
    c.t = t;
    c.K_tdesign = num / den;
    c.K_ct = binomial(lambda, alpha);
    c.batches = static_cast<std::uint64_t>(lambda);
    c.files = static_cast<std::uint64_t>(lambda);
    c.Q_tdesign = c.K_tdesign;
    c.Q_ct = c.K_ct;
    c.load_tdesign = theoretical_load(lambda, alpha, t);
    if (lambda == 7 && alpha == 3) c.ct_reference_load = kCtReferenceLoad_7_3;
    return c;
}

}  // namespace madc
