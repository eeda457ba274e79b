#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "madc/mra.hpp"
#include "madc/topology.hpp"

using madc::KSubset;

TEST(Topology, FanoUnitEtas) {
    const auto topo = madc::derive_topology(madc::fano_plane(), 1, 1);
    EXPECT_EQ(topo.K(), 7u);
    EXPECT_EQ(topo.N, 7u);
    EXPECT_EQ(topo.Q, 7u);
    const std::vector<KSubset> order{{1, 2, 3}, {1, 4, 5}, {1, 6, 7}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 5, 6}};
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto idx = topo.reducer_index(order[k]);
        EXPECT_EQ(topo.functions_of_reducer[idx], std::vector<std::uint64_t>{k + 1});
    }
    for (std::uint64_t f = 1; f <= 7; ++f) {
        EXPECT_EQ(topo.batches[f - 1], std::vector<std::uint64_t>{f});
        EXPECT_EQ(topo.batch_of_mapper[f - 1], std::vector<std::uint64_t>{f});
    }
}

TEST(Topology, EtaScaling) {
    const auto topo = madc::derive_topology(madc::fano_plane(), 2, 3);
    EXPECT_EQ(topo.N, 14u);
    EXPECT_EQ(topo.Q, 21u);
    for (const auto& w : topo.functions_of_reducer) EXPECT_EQ(w.size(), 3u);
    EXPECT_EQ(topo.batches[1], (std::vector<std::uint64_t>{3, 4}));
}

TEST(Topology, Sts9Connectivity) {
    const auto topo = madc::derive_topology(madc::steiner_triple_system(9), 1, 1);
    EXPECT_EQ(topo.K(), 12u);
    for (const auto& mappers : topo.connectivity) EXPECT_EQ(mappers.size(), 3u);
}

TEST(Topology, RejectsNonSteinerDesigns) {
    madc::Design d = madc::fano_plane();
    d.m = 2;
    EXPECT_THROW(madc::derive_topology(d, 1, 1), madc::UnsupportedDesign);
    EXPECT_THROW(madc::derive_topology(madc::fano_plane(), 0, 1), madc::ValidationError);
}

TEST(AccessibleBatches, MatchBlocks) {
    const auto topo = madc::derive_topology(madc::fano_plane(), 1, 1);
    EXPECT_EQ(madc::accessible_batches(topo, {1, 2, 3}), (std::set<std::uint64_t>{1, 2, 3}));
    EXPECT_EQ(madc::accessible_batches(topo, {3, 5, 6}), (std::set<std::uint64_t>{3, 5, 6}));
    for (const auto& r : topo.reducers) EXPECT_EQ(madc::accessible_batches(topo, r).size(), 3u);
    EXPECT_THROW(madc::accessible_batches(topo, {3, 5, 7}), madc::ValidationError);
}

TEST(ComputationLoad, DerivedAndSynthetic) {
    EXPECT_EQ(madc::computation_load(madc::derive_topology(madc::fano_plane(), 1, 1)), madc::Rational(1));
    EXPECT_EQ(madc::computation_load(madc::derive_topology(madc::steiner_triple_system(15), 2, 1)), madc::Rational(1));

    auto dup = madc::derive_topology(madc::fano_plane(), 1, 1);
    dup.batch_of_mapper[1].push_back(1);  // mapper 2 also stores B_1
    EXPECT_EQ(madc::computation_load(dup), madc::Rational(8, 7));
}

TEST(TopologyProperty, FunctionsPartitionAndStarsMatchConnectivity) {
    for (const auto& [name, d] : madc::catalog()) {
        SCOPED_TRACE(name);
        for (auto [e1, e2] : {std::pair{1u, 1u}, std::pair{2u, 1u}, std::pair{1u, 2u}}) {
            const auto topo = madc::derive_topology(d, e1, e2);
            std::vector<std::uint64_t> all;
            for (const auto& w : topo.functions_of_reducer) {
                EXPECT_EQ(w.size(), topo.Q / topo.K());
                all.insert(all.end(), w.begin(), w.end());
            }
            std::sort(all.begin(), all.end());
            std::vector<std::uint64_t> expected(topo.Q);
            std::iota(expected.begin(), expected.end(), 1);
            EXPECT_EQ(all, expected);
            EXPECT_EQ(madc::computation_load(topo), madc::Rational(1));
        }

        const auto topo = madc::derive_topology(d, 1, 1);
        const auto mra = madc::build_mra(d);
        for (std::size_t r = 0; r < mra.rows(); ++r) {
            for (std::size_t c = 0; c < mra.cols(); ++c) {
                const auto batches = madc::accessible_batches(topo, mra.columns[c].block);
                EXPECT_EQ(mra.at(r, c).is_star(), batches.contains(r + 1));
            }
        }
    }
}

TEST(Topology, JsonDump) {
    const auto j = madc::derive_topology(madc::fano_plane(), 1, 1).to_json();
    EXPECT_EQ(j["K"], 7);
    EXPECT_EQ(j["reducers"][6]["label"], "{356}");
    EXPECT_EQ(j["reducers"][6]["mappers"], nlohmann::json::array({3, 5, 6}));
    EXPECT_EQ(j["reducers"][6]["functions"], nlohmann::json::array({7}));
}
