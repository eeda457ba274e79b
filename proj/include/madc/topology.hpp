#pragma once

// Multi-access topology induced by a Steiner system: one batch per mapper,
// one reducer per block, each reducer wired to the mappers in its block.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "madc/design.hpp"
#include "madc/error.hpp"
#include "madc/rational.hpp"

namespace madc {

/// Indices are 1-based throughout: mappers and batches in [Λ], files in [N],
/// functions in [Q]. Reducers are identified by their block and stored in
/// design order.
struct MadcTopology {
    int num_mappers = 0;  // Λ
    int alpha = 0;
    int t = 0;
    std::uint64_t eta1 = 0;  // files per batch
    std::uint64_t eta2 = 0;  // functions per reducer
    std::uint64_t N = 0;
    std::uint64_t Q = 0;
    std::vector<KSubset> reducers;
    std::vector<std::vector<std::uint64_t>> batches;           // B_f, indexed f-1
    std::vector<std::vector<std::uint64_t>> batch_of_mapper;   // M_λ, indexed λ-1
    std::vector<std::vector<int>> connectivity;                // mappers of each reducer
    std::vector<std::vector<std::uint64_t>> functions_of_reducer;  // W_A

    std::size_t K() const noexcept { return reducers.size(); }

    std::size_t reducer_index(const KSubset& reducer) const {
        for (std::size_t i = 0; i < reducers.size(); ++i) {
            if (reducers[i] == reducer) return i;
        }
        throw ValidationError("unknown reducer " + reducer.to_string());
    }

    nlohmann::json to_json() const {
        nlohmann::json reducer_list = nlohmann::json::array();
        for (std::size_t k = 0; k < reducers.size(); ++k) {
            reducer_list.push_back({{"block", reducers[k].points()},
                                    {"label", reducers[k].to_string()},
                                    {"mappers", connectivity[k]},
                                    {"functions", functions_of_reducer[k]}});
        }
        nlohmann::json mappers = nlohmann::json::array();
        for (std::size_t l = 0; l < batch_of_mapper.size(); ++l) {
            mappers.push_back({{"mapper", l + 1}, {"batches", batch_of_mapper[l]}});
        }
        return {{"num_mappers", num_mappers}, {"alpha", alpha}, {"t", t},
                {"eta1", eta1}, {"eta2", eta2}, {"N", N}, {"Q", Q}, {"K", K()},
                {"batches", batches}, {"mappers", std::move(mappers)},
                {"reducers", std::move(reducer_list)}};
    }
};

/// W_A is the contiguous range ((k−1)η2, kη2] for the k-th block in design order.
inline MadcTopology derive_topology(const Design& design, std::uint64_t eta1, std::uint64_t eta2) {
    if (design.m != 1) {
        throw UnsupportedDesign("derive_topology: requires m=1, got " + design.label());
    }
    if (eta1 == 0 || eta2 == 0) throw ValidationError("derive_topology: eta1 and eta2 must be positive");
    const DesignReport report = validate_design(design);
    if (!report.valid) throw ValidationError("derive_topology: invalid design: " + report.summary());

    MadcTopology topo;
    topo.num_mappers = design.num_points;
    topo.alpha = design.alpha;
    topo.t = design.t;
    topo.eta1 = eta1;
    topo.eta2 = eta2;
    topo.N = eta1 * static_cast<std::uint64_t>(design.num_points);
    topo.Q = eta2 * design.blocks.size();
    topo.reducers = design.blocks;
    for (std::uint64_t f = 1; f <= static_cast<std::uint64_t>(design.num_points); ++f) {
        std::vector<std::uint64_t> files;
        for (std::uint64_t j = 1; j <= eta1; ++j) files.push_back((f - 1) * eta1 + j);
        topo.batches.push_back(std::move(files));
        topo.batch_of_mapper.push_back({f});
    }
    for (std::size_t k = 0; k < design.blocks.size(); ++k) {
        topo.connectivity.push_back(design.blocks[k].points());
        std::vector<std::uint64_t> w;
        for (std::uint64_t j = 1; j <= eta2; ++j) w.push_back(k * eta2 + j);
        topo.functions_of_reducer.push_back(std::move(w));
    }
    return topo;
}

/// R_A: batches stored on the mappers reducer A is wired to.
inline std::set<std::uint64_t> accessible_batches(const MadcTopology& topo, const KSubset& reducer) {
    const std::size_t k = topo.reducer_index(reducer);
    std::set<std::uint64_t> out;
    for (int mapper : topo.connectivity[k]) {
        const auto& stored = topo.batch_of_mapper.at(static_cast<std::size_t>(mapper - 1));
        out.insert(stored.begin(), stored.end());
    }
    return out;
}

/// Files mapped across all mappers (with multiplicity) over N.
inline Rational computation_load(const MadcTopology& topo) {
    std::uint64_t mapped = 0;
    for (const auto& stored : topo.batch_of_mapper) {
        for (std::uint64_t f : stored) mapped += topo.batches.at(f - 1).size();
    }
    return Rational(static_cast<std::int64_t>(mapped), static_cast<std::int64_t>(topo.N));
}

}  // namespace madc
