#include <gtest/gtest.h>

#include <set>

#include "madc/simulation.hpp"

using madc::BitString;
using madc::KSubset;

namespace {

struct Fano {
    madc::Design design = madc::fano_plane();
    madc::Mra mra = madc::build_mra(design);
    madc::MadcTopology topo = madc::derive_topology(design, 1, 1);
    madc::SimConfig cfg{};
    madc::FileStore store = madc::generate_files(topo, cfg);
    std::vector<madc::IvTable> mapped = madc::map_phase(topo, store, cfg);
};

}  // namespace

TEST(BitString, SliceAppendXor) {
    const std::uint8_t raw[] = {0b10110011, 0b01011100};
    const BitString b = BitString::from_bytes(raw, 13);
    EXPECT_EQ(b.hex(), "b358");
    BitString joined = b.slice(0, 5);
    joined.append(b.slice(5, 8));
    EXPECT_EQ(joined, b);
    BitString x = b.slice(3, 7);
    EXPECT_EQ((x ^ x), BitString(7));
    EXPECT_THROW(x ^= b, std::invalid_argument);
}

TEST(Config, BetaAdjustment) {
    const auto topo = madc::derive_topology(madc::fano_plane(), 1, 1);
    EXPECT_TRUE(madc::beta_is_valid(topo, 48));
    EXPECT_FALSE(madc::beta_is_valid(topo, 7));
    EXPECT_EQ(madc::adjust_beta(topo, 7), 48u);
    EXPECT_EQ(madc::adjust_beta(topo, 49), 96u);
    EXPECT_EQ(madc::adjust_beta(madc::derive_topology(madc::fano_plane(), 2, 1), 7), 24u);
    EXPECT_THROW(madc::check_config(topo, madc::SimConfig{256, 7, 64, 1}), madc::ConfigError);
}

TEST(Files, BatchesAndDeterminism) {
    const auto topo = madc::derive_topology(madc::fano_plane(), 1, 1);
    const madc::SimConfig cfg{};
    const auto a = madc::generate_files(topo, cfg);
    for (std::uint64_t f = 1; f <= 7; ++f) EXPECT_EQ(a.batches[f - 1], std::vector<std::uint64_t>{f});
    EXPECT_EQ(a, madc::generate_files(topo, cfg));
    EXPECT_EQ(a.file(1).size(), cfg.file_bits);

    madc::SimConfig other = cfg;
    other.seed = 2;
    const auto b = madc::generate_files(topo, other);
    for (std::uint64_t n = 1; n <= 7; ++n) EXPECT_NE(a.file(n), b.file(n));
}

TEST(MockFunctions, LengthsAndDeterminism) {
    const BitString file(256);
    const BitString v = madc::mock_map(9, 1, 1, file, 48);
    EXPECT_EQ(v.size(), 48u);
    EXPECT_EQ(v, madc::mock_map(9, 1, 1, file, 48));
    EXPECT_NE(v, madc::mock_map(9, 2, 1, file, 48));
    EXPECT_EQ(madc::mock_map(9, 1, 1, file, 13).size(), 13u);
}

TEST(MockFunctions, ReduceReactsToEverySingleBitFlip) {
    std::vector<BitString> ivs;
    for (std::uint64_t n = 1; n <= 4; ++n) ivs.push_back(madc::mock_map(3, 1, n, BitString(64), 24));
    const BitString base = madc::mock_reduce(1, ivs, 64);
    EXPECT_EQ(base.size(), 64u);
    for (std::size_t i = 0; i < ivs.size(); ++i) {
        for (std::size_t bit = 0; bit < 24; ++bit) {
            auto flipped = ivs;
            flipped[i].flip_bit(bit);
            EXPECT_NE(madc::mock_reduce(1, flipped, 64), base) << i << ":" << bit;
        }
    }
    auto swapped = ivs;
    std::swap(swapped[0], swapped[1]);
    EXPECT_NE(madc::mock_reduce(1, swapped, 64), base);
}

TEST(MapPhase, EachMapperHoldsOnlyItsBatch) {
    Fano f;
    const auto& m4 = f.mapped[3];
    EXPECT_EQ(m4.size(), 7u);
    for (std::uint64_t q = 1; q <= 7; ++q) EXPECT_TRUE(m4.contains(q, 4));
    EXPECT_FALSE(m4.contains(1, 3));

    std::size_t total = 0;
    for (const auto& t : f.mapped) total += t.size();
    EXPECT_EQ(total, f.topo.Q * f.topo.N);

    const auto view = madc::reducer_view(f.topo, f.mapped, f.topo.reducer_index({1, 2, 3}));
    EXPECT_EQ(view.size(), 21u);
    EXPECT_TRUE(view.contains(5, 3));
    EXPECT_FALSE(view.contains(5, 4));
}

TEST(Packetize, FanoPacketStructure) {
    Fano f;
    const auto packets = madc::packetize(f.mra, f.topo, f.mapped, f.cfg);
    const std::size_t r123 = f.topo.reducer_index({1, 2, 3});
    const std::size_t r145 = f.topo.reducer_index({1, 4, 5});
    const std::size_t r246 = f.topo.reducer_index({2, 4, 6});

    std::set<std::size_t> packet_ids;
    std::set<std::size_t> tags_of_12;
    for (const auto& [key, bits] : packets) {
        EXPECT_EQ(bits.size(), f.cfg.beta / 6);
        if (key.dest == r123 && key.mapper == 4) {
            packet_ids.insert(key.u_index);
            if (key.u_index == 0) tags_of_12.insert(key.tag);
        }
    }
    EXPECT_EQ(packet_ids, (std::set<std::size_t>{0, 1, 2}));  // {12}, {13}, {23}
    EXPECT_EQ(tags_of_12, (std::set<std::size_t>{r145, r246}));

    // Six sub-packets of U_{W_{123},B_4}, in order, rebuild it.
    madc::IvTable all;
    for (const auto& t : f.mapped) all.merge(t);
    const BitString u = madc::concat_symbol(f.topo, all, r123, 4);
    BitString rebuilt;
    for (const auto& [key, bits] : packets) {
        if (key.dest == r123 && key.mapper == 4) rebuilt.append(bits);
    }
    EXPECT_EQ(rebuilt, u);
    // Each destination misses Λ − α = 4 batches, each cut into C(3,2)·2 = 6 pieces.
    EXPECT_EQ(packets.size(), 7u * 4u * 6u);
}

TEST(Packetize, RejectsIrregularArray) {
    Fano f;
    madc::Mra broken = f.mra;
    broken.grid.at(3, 0) = madc::MraEntry::integer(3);  // 2 now appears twice, 3 four times
    EXPECT_THROW(madc::packetize(broken, f.topo, f.mapped, f.cfg), madc::SchemeViolation);
}

TEST(Shuffle, FanoSymbolSetsAndCounts) {
    Fano f;
    const auto transcript = madc::shuffle_phase(f.mra, f.topo, f.mapped, f.cfg, true);
    EXPECT_EQ(transcript.symbols.size(), 84u);
    for (std::size_t k = 0; k < 7; ++k) EXPECT_EQ(transcript.count_from(k), 12u);

    std::vector<std::uint64_t> s123;
    for (const auto& c : transcript.symbols) {
        if (c.sender == f.topo.reducer_index({1, 2, 3})) s123.push_back(c.s);
    }
    EXPECT_EQ(s123, (std::vector<std::uint64_t>{2, 3, 4, 5, 6, 7, 8, 9, 16, 17, 18, 19}));
    EXPECT_EQ(transcript.total_bits, 84u * f.cfg.beta / 6);
}

TEST(Shuffle, PayloadIsXorOfRecordedPackets) {
    Fano f;
    const auto packets = madc::packetize(f.mra, f.topo, f.mapped, f.cfg);
    const auto transcript = madc::shuffle_phase(f.mra, f.topo, f.mapped, f.cfg, true);
    for (const auto& c : transcript.symbols) {
        ASSERT_EQ(c.provenance.size(), 2u);
        BitString acc(c.payload.size());
        for (const auto& key : c.provenance) {
            EXPECT_EQ(key.tag, c.sender);
            // Operand batch must be reachable by the sender.
            EXPECT_TRUE(f.topo.reducers[c.sender].contains(key.mapper));
            acc ^= packets.at(key);
        }
        EXPECT_EQ(acc, c.payload);
    }
    const auto plain = madc::shuffle_phase(f.mra, f.topo, f.mapped, f.cfg);
    EXPECT_TRUE(plain.symbols.front().provenance.empty());
    EXPECT_EQ(plain.symbols.front().payload, transcript.symbols.front().payload);
}

TEST(Shuffle, SenderWithoutAccessIsAViolation) {
    Fano f;
    auto starved = f.mapped;
    starved[0] = madc::IvTable{};  // mapper 1 lost its IVs
    EXPECT_THROW(madc::shuffle_phase(f.mra, f.topo, starved, f.cfg), madc::SchemeViolation);
}

// X^2_{145} = U^{{12},{145}}_{W_{123},B_4} xor U^{{24},{145}}_{W_{246},B_1}; {123} knows B_1.
TEST(Reduce, Reducer123RecoversPacketFromSymbolsOf145And246) {
    Fano f;
    const auto packets = madc::packetize(f.mra, f.topo, f.mapped, f.cfg);
    const auto transcript = madc::shuffle_phase(f.mra, f.topo, f.mapped, f.cfg);
    const std::size_t r123 = f.topo.reducer_index({1, 2, 3});
    const std::size_t r145 = f.topo.reducer_index({1, 4, 5});
    const std::size_t r246 = f.topo.reducer_index({2, 4, 6});
    auto symbol = [&](std::size_t sender, std::uint64_t s) {
        for (const auto& c : transcript.symbols) {
            if (c.sender == sender && c.s == s) return c.payload;
        }
        throw std::out_of_range("symbol");
    };
    const BitString from145 = symbol(r145, 2) ^ packets.at({r246, 1, 0, r145});
    EXPECT_EQ(from145, packets.at({r123, 4, 0, r145}));
    const BitString from246 = symbol(r246, 2) ^ packets.at({r145, 2, 0, r246});
    EXPECT_EQ(from246, packets.at({r123, 4, 0, r246}));

    for (std::size_t skip : {r145, r246}) {
        madc::ShuffleTranscript t = transcript;
        std::erase_if(t.symbols, [&](const madc::CodedSymbol& c) { return c.sender == skip && c.s == 2; });
        const auto result = madc::reduce_phase(f.mra, f.topo, t, f.mapped, f.cfg);
        const bool reducer123_failed = std::any_of(result.failures.begin(), result.failures.end(),
                                                   [&](const madc::DecodeFailure& d) { return d.reducer == r123 && d.s == 2; });
        EXPECT_TRUE(reducer123_failed);
    }
}

TEST(Reduce, FanoOutputsMatchOracle) {
    Fano f;
    const auto transcript = madc::shuffle_phase(f.mra, f.topo, f.mapped, f.cfg);
    const auto result = madc::reduce_phase(f.mra, f.topo, transcript, f.mapped, f.cfg);
    ASSERT_TRUE(result.ok());
    const auto oracle = madc::oracle_outputs(f.store, f.cfg, f.topo.Q);
    ASSERT_EQ(oracle.size(), 7u);
    for (const auto& [q, out] : oracle) EXPECT_EQ(out.size(), f.cfg.output_bits);
    EXPECT_TRUE(madc::compare_with_oracle(f.topo, result, oracle).empty());
}

TEST(Reduce, CorruptedPayloadIsCaughtByOracle) {
    Fano f;
    auto transcript = madc::shuffle_phase(f.mra, f.topo, f.mapped, f.cfg);
    transcript.symbols[5].payload.flip_bit(0);
    const auto result = madc::reduce_phase(f.mra, f.topo, transcript, f.mapped, f.cfg);
    const auto oracle = madc::oracle_outputs(f.store, f.cfg, f.topo.Q);
    EXPECT_FALSE(madc::compare_with_oracle(f.topo, result, oracle).empty());
}

TEST(Simulation, SubByteIvsDecode) {
    // η1·η2 = 16 lets β = 3: IVs straddle byte boundaries.
    madc::SimConfig cfg{100, 3, 20, 7};
    const auto r = madc::run_simulation(madc::fano_plane(), 4, 4, cfg);
    EXPECT_TRUE(r.verified());
    EXPECT_EQ(r.loads.measured_comm_load, madc::Rational(2, 7));
}

TEST(Simulation, SmallestSteinerSystem) {
    const madc::Design d{3, 2, 2, 1, {{1, 2}, {1, 3}, {2, 3}}};
    const auto r = madc::run_simulation(d, 1, 1, madc::SimConfig{64, 16, 32, 5});
    EXPECT_TRUE(r.verified());
    EXPECT_EQ(r.transcript.symbols.size(), 3u);
}

TEST(Simulation, Deterministic) {
    const auto a = madc::run_simulation(madc::fano_plane(), 1, 2, madc::SimConfig{});
    const auto b = madc::run_simulation(madc::fano_plane(), 1, 2, madc::SimConfig{});
    EXPECT_EQ(a.transcript.to_json(a.topology), b.transcript.to_json(b.topology));
}
