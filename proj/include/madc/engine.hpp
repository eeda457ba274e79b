#pragma once

// Bit-exact simulation of the coded Map / Shuffle / Reduce phases on a
// topology derived from a Steiner system, plus a centralized oracle.
//
// Layout conventions (all deterministic):
//   * U_{W_A,B_λ} concatenates v_{q,n} for q ∈ W_A ascending, then n ∈ B_λ ascending.
//   * U is cut left to right into C(α,t) packets, one per t-subset of A in
//     lexicographic order (the MRA column order inside A).
//   * A packet whose array entry is s is cut into t sub-packets, tagged by the
//     other t blocks holding s, in design block order.

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "madc/bitstring.hpp"
#include "madc/error.hpp"
#include "madc/keyed_hash.hpp"
#include "madc/mra.hpp"
#include "madc/topology.hpp"

namespace madc {

struct SimConfig {
    std::uint64_t file_bits = 256;   // d
    std::uint64_t beta = 48;         // IV size β
    std::uint64_t output_bits = 64;  // b
    std::uint64_t seed = 1;
};

/// Sub-packet size in bits: η1·η2·β / (C(α,t)·t).
inline std::uint64_t subpacket_bits(const MadcTopology& topo, std::uint64_t beta) {
    return topo.eta1 * topo.eta2 * beta /
           (binomial(topo.alpha, topo.t) * static_cast<std::uint64_t>(topo.t));
}

/// Sub-packets must be a whole number of bytes: η1·η2·β divisible by 8·C(α,t)·t.
inline bool beta_is_valid(const MadcTopology& topo, std::uint64_t beta) {
    const std::uint64_t unit = 8 * binomial(topo.alpha, topo.t) * static_cast<std::uint64_t>(topo.t);
    return beta > 0 && (topo.eta1 * topo.eta2 * beta) % unit == 0;
}

/// Smallest valid β that is >= requested.
inline std::uint64_t adjust_beta(const MadcTopology& topo, std::uint64_t requested) {
    const std::uint64_t unit = 8 * binomial(topo.alpha, topo.t) * static_cast<std::uint64_t>(topo.t);
    const std::uint64_t step = unit / std::gcd(unit, topo.eta1 * topo.eta2);
    const std::uint64_t want = std::max<std::uint64_t>(requested, 1);
    return (want + step - 1) / step * step;
}

inline void check_config(const MadcTopology& topo, const SimConfig& cfg) {
    if (!beta_is_valid(topo, cfg.beta)) {
        throw ConfigError("beta=" + std::to_string(cfg.beta) + " invalid: eta1*eta2*beta must be divisible by 8*C(alpha,t)*t = " +
                          std::to_string(8 * binomial(topo.alpha, topo.t) * static_cast<std::uint64_t>(topo.t)) +
                          " (smallest valid beta >= request: " + std::to_string(adjust_beta(topo, cfg.beta)) + ")");
    }
    if (cfg.file_bits == 0 || cfg.output_bits == 0) {
        throw ConfigError("file_bits and output_bits must be positive");
    }
}

struct FileStore {
    std::vector<BitString> files;                      // w_n, indexed n-1
    std::vector<std::vector<std::uint64_t>> batches;   // B_f, indexed f-1

    const BitString& file(std::uint64_t n) const { return files.at(n - 1); }
    friend bool operator==(const FileStore&, const FileStore&) = default;
};

inline FileStore generate_files(const MadcTopology& topo, const SimConfig& cfg) {
    check_config(topo, cfg);
    FileStore store;
    store.batches = topo.batches;
    for (std::uint64_t n = 1; n <= topo.N; ++n) {
        store.files.push_back(keyed_stream(cfg.seed, HashInput("file").u64(n), cfg.file_bits));
    }
    return store;
}

/// v_{q,n} = g_{q,n}(w_n): β bits, a pure function of (seed, q, n, w_n).
inline BitString mock_map(std::uint64_t seed, std::uint64_t q, std::uint64_t n, const BitString& file,
                          std::uint64_t beta) {
    return keyed_stream(seed, HashInput("map").u64(q).u64(n).bits(file), beta);
}

/// φ_q = h_q(v_{q,1}, ..., v_{q,N}): b bits depending on every IV in order.
inline BitString mock_reduce(std::uint64_t q, const std::vector<BitString>& ivs, std::uint64_t output_bits) {
    HashInput in("reduce");
    in.u64(ivs.size());
    for (const BitString& v : ivs) in.bits(v);
    return keyed_stream(q, in, output_bits);
}

/// IVs v_{q,n} keyed by (q, n).
class IvTable {
  public:
    void insert(std::uint64_t q, std::uint64_t n, BitString v) { ivs_.insert_or_assign({q, n}, std::move(v)); }
    bool contains(std::uint64_t q, std::uint64_t n) const { return ivs_.contains({q, n}); }
    const BitString* find(std::uint64_t q, std::uint64_t n) const {
        auto it = ivs_.find({q, n});
        return it == ivs_.end() ? nullptr : &it->second;
    }
    std::size_t size() const noexcept { return ivs_.size(); }
    void merge(const IvTable& other) {
        for (const auto& [key, v] : other.ivs_) ivs_.insert({key, v});
    }
    auto begin() const { return ivs_.begin(); }
    auto end() const { return ivs_.end(); }

  private:
    std::map<std::pair<std::uint64_t, std::uint64_t>, BitString> ivs_;
};

/// Per mapper λ (index λ-1): v_{q,n} for every q ∈ [Q] and w_n in its stored batches.
inline std::vector<IvTable> map_phase(const MadcTopology& topo, const FileStore& store, const SimConfig& cfg) {
    std::vector<IvTable> out(static_cast<std::size_t>(topo.num_mappers));
    for (std::size_t l = 0; l < out.size(); ++l) {
        for (std::uint64_t f : topo.batch_of_mapper[l]) {
            for (std::uint64_t n : store.batches.at(f - 1)) {
                for (std::uint64_t q = 1; q <= topo.Q; ++q) {
                    out[l].insert(q, n, mock_map(cfg.seed, q, n, store.file(n), cfg.beta));
                }
            }
        }
    }
    return out;
}

/// Everything reducer k can retrieve from the mappers it is wired to.
inline IvTable reducer_view(const MadcTopology& topo, const std::vector<IvTable>& mapped, std::size_t k) {
    IvTable view;
    for (int mapper : topo.connectivity.at(k)) view.merge(mapped.at(static_cast<std::size_t>(mapper - 1)));
    return view;
}

/// One of the t+1 cells holding an integer, described by block position.
struct Occurrence {
    std::size_t block = 0;    // reducer index (design order)
    int mapper = 0;           // λ
    std::size_t u_index = 0;  // column offset inside the block
};

/// Integer occurrences of an array, grouped by value and sorted by block.
class ShuffleLayout {
  public:
    explicit ShuffleLayout(const Mra& mra) : mra_(&mra), per_block_(mra.cols_per_block()) {
        std::vector<std::size_t> first_col(mra.blocks.size(), mra.cols());
        for (std::size_t c = 0; c < mra.cols(); ++c) {
            first_col[mra.columns[c].block_index] = std::min(first_col[mra.columns[c].block_index], c);
        }
        for (const auto& [value, cells] : integer_cells(mra.grid)) {
            std::vector<Occurrence> occ;
            for (const Cell& cell : cells) {
                const std::size_t b = mra.columns[cell.col].block_index;
                occ.push_back({b, mra.row_labels[cell.row], cell.col - first_col[b]});
            }
            std::sort(occ.begin(), occ.end(),
                      [](const Occurrence& a, const Occurrence& b) { return a.block < b.block; });
            if (occ.size() != static_cast<std::size_t>(mra.t + 1)) {
                throw SchemeViolation("integer " + std::to_string(value) + " occurs " +
                                      std::to_string(occ.size()) + " times, expected t+1 = " +
                                      std::to_string(mra.t + 1));
            }
            for (std::size_t i = 1; i < occ.size(); ++i) {
                if (occ[i].block == occ[i - 1].block) {
                    throw SchemeViolation("integer " + std::to_string(value) + " occurs twice in block " +
                                          mra.blocks[occ[i].block].to_string());
                }
            }
            occurrences_.emplace(value, std::move(occ));
        }
        first_col_ = std::move(first_col);
    }

    const std::vector<Occurrence>& occurrences(std::uint64_t s) const {
        auto it = occurrences_.find(s);
        if (it == occurrences_.end()) throw SchemeViolation("integer " + std::to_string(s) + " not in array");
        return it->second;
    }

    std::size_t cols_per_block() const noexcept { return per_block_; }

    const MraEntry& entry(int mapper, std::size_t block, std::size_t u_index) const {
        return mra_->at(static_cast<std::size_t>(mapper - 1), first_col_.at(block) + u_index);
    }

    /// Distinct integers in the columns of `block`, ascending.
    std::vector<std::uint64_t> integers_of_block(std::size_t block) const {
        std::set<std::uint64_t> s;
        for (std::size_t r = 0; r < mra_->rows(); ++r) {
            for (std::size_t j = 0; j < per_block_; ++j) {
                const MraEntry& e = mra_->at(r, first_col_.at(block) + j);
                if (e.is_integer()) s.insert(e.value());
            }
        }
        return {s.begin(), s.end()};
    }

    /// Position of `tag` among the blocks of occurrences of s other than `owner`.
    std::size_t tag_position(std::uint64_t s, std::size_t owner, std::size_t tag) const {
        std::size_t pos = 0;
        for (const Occurrence& o : occurrences(s)) {
            if (o.block == owner) continue;
            if (o.block == tag) return pos;
            ++pos;
        }
        throw SchemeViolation("block " + std::to_string(tag) + " does not hold integer " + std::to_string(s));
    }

  private:
    const Mra* mra_;
    std::size_t per_block_;
    std::vector<std::size_t> first_col_;
    std::map<std::uint64_t, std::vector<Occurrence>> occurrences_;
};

/// Identifies U^{U_A, tag}_{W_A, B_λ}: destination reducer A, batch λ, packet
/// (t-subset of A by lexicographic position) and the tagging block.
struct PacketKey {
    std::size_t dest = 0;
    int mapper = 0;
    std::size_t u_index = 0;
    std::size_t tag = 0;
    friend auto operator<=>(const PacketKey&, const PacketKey&) = default;
};

/// U_{W_A,B_λ} assembled from whatever IVs `view` holds; a missing IV means the
/// holder of `view` is not allowed to build this symbol.
inline BitString concat_symbol(const MadcTopology& topo, const IvTable& view, std::size_t dest, int mapper) {
    BitString u;
    for (std::uint64_t q : topo.functions_of_reducer.at(dest)) {
        for (std::uint64_t f : topo.batch_of_mapper.at(static_cast<std::size_t>(mapper - 1))) {
            for (std::uint64_t n : topo.batches.at(f - 1)) {
                const BitString* v = view.find(q, n);
                if (v == nullptr) {
                    throw SchemeViolation("IV v_{" + std::to_string(q) + "," + std::to_string(n) +
                                          "} not accessible");
                }
                u.append(*v);
            }
        }
    }
    return u;
}

/// Extracts one sub-packet from a full U_{W_A,B_λ}.
inline BitString cut_subpacket(const BitString& u, const ShuffleLayout& layout, const MadcTopology& topo,
                               const SimConfig& cfg, const PacketKey& key) {
    const std::uint64_t sub = subpacket_bits(topo, cfg.beta);
    const std::uint64_t packet = sub * static_cast<std::uint64_t>(topo.t);
    const MraEntry& e = layout.entry(key.mapper, key.dest, key.u_index);
    if (!e.is_integer()) {
        throw SchemeViolation("packet (" + std::to_string(key.dest) + "," + std::to_string(key.mapper) +
                              ") sits on a Star entry");
    }
    const std::size_t i = layout.tag_position(e.value(), key.dest, key.tag);
    return u.slice(key.u_index * packet + i * sub, sub);
}

inline BitString build_subpacket(const MadcTopology& topo, const ShuffleLayout& layout, const IvTable& view,
                                 const SimConfig& cfg, const PacketKey& key) {
    return cut_subpacket(concat_symbol(topo, view, key.dest, key.mapper), layout, topo, cfg, key);
}

/// Full table of sub-packets for every reducer A, batch λ ∉ A, packet and tag,
/// computed with global knowledge of all IVs.
inline std::map<PacketKey, BitString> packetize(const Mra& mra, const MadcTopology& topo,
                                                const std::vector<IvTable>& mapped, const SimConfig& cfg) {
    check_config(topo, cfg);
    const ShuffleLayout layout(mra);
    IvTable all;
    for (const IvTable& t : mapped) all.merge(t);
    std::map<PacketKey, BitString> out;
    for (std::size_t k = 0; k < topo.K(); ++k) {
        for (int mapper = 1; mapper <= topo.num_mappers; ++mapper) {
            if (topo.reducers[k].contains(mapper)) continue;
            const BitString u = concat_symbol(topo, all, k, mapper);
            for (std::size_t j = 0; j < layout.cols_per_block(); ++j) {
                const std::uint64_t s = layout.entry(mapper, k, j).value();
                for (const Occurrence& o : layout.occurrences(s)) {
                    if (o.block == k) continue;
                    const PacketKey key{k, mapper, j, o.block};
                    out.emplace(key, cut_subpacket(u, layout, topo, cfg, key));
                }
            }
        }
    }
    return out;
}

struct CodedSymbol {
    std::size_t sender = 0;  // reducer index
    std::uint64_t s = 0;
    BitString payload;
    std::vector<PacketKey> provenance;  // filled only when recording
};

struct ShuffleTranscript {
    std::vector<CodedSymbol> symbols;  // reducer order, ascending s
    std::uint64_t total_bits = 0;

    std::size_t count_from(std::size_t sender) const {
        return static_cast<std::size_t>(std::count_if(symbols.begin(), symbols.end(),
                                                      [&](const CodedSymbol& c) { return c.sender == sender; }));
    }

    /// Copy without symbol `index`, with total_bits adjusted.
    ShuffleTranscript without(std::size_t index) const {
        ShuffleTranscript out = *this;
        out.total_bits -= out.symbols.at(index).payload.size();
        out.symbols.erase(out.symbols.begin() + static_cast<std::ptrdiff_t>(index));
        return out;
    }

    nlohmann::json to_json(const MadcTopology& topo) const {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& c : symbols) {
            list.push_back({{"sender", topo.reducers.at(c.sender).points()},
                            {"sender_label", topo.reducers.at(c.sender).to_string()},
                            {"s", c.s},
                            {"payload_hex", c.payload.hex()},
                            {"bits", c.payload.size()}});
        }
        return {{"total_bits", total_bits}, {"symbol_count", symbols.size()}, {"symbols", std::move(list)}};
    }
};

/// Each reducer A sends, for every s in its columns, the XOR of the t
/// sub-packets tagged A that belong to the other occurrences of s. Operands
/// are built only from IVs reachable through A's mappers.
inline ShuffleTranscript shuffle_phase(const Mra& mra, const MadcTopology& topo,
                                       const std::vector<IvTable>& mapped, const SimConfig& cfg,
                                       bool record_provenance = false) {
    check_config(topo, cfg);
    if (mra.blocks != topo.reducers) throw ValidationError("shuffle_phase: array and topology disagree on blocks");
    const ShuffleLayout layout(mra);
    const std::uint64_t sub = subpacket_bits(topo, cfg.beta);
    ShuffleTranscript transcript;
    for (std::size_t k = 0; k < topo.K(); ++k) {
        const IvTable view = reducer_view(topo, mapped, k);
        for (std::uint64_t s : layout.integers_of_block(k)) {
            CodedSymbol sym{k, s, BitString(sub), {}};
            for (const Occurrence& o : layout.occurrences(s)) {
                if (o.block == k) continue;
                const PacketKey key{o.block, o.mapper, o.u_index, k};
                try {
                    sym.payload ^= build_subpacket(topo, layout, view, cfg, key);
                } catch (const SchemeViolation& e) {
                    throw SchemeViolation("reducer " + topo.reducers[k].to_string() + " cannot build operand of X^" +
                                          std::to_string(s) + ": " + e.what());
                }
                if (record_provenance) sym.provenance.push_back(key);
            }
            transcript.total_bits += sym.payload.size();
            transcript.symbols.push_back(std::move(sym));
        }
    }
    return transcript;
}

struct DecodeFailure {
    std::size_t reducer = 0;
    std::uint64_t s = 0;
    std::string detail;
};

struct ReduceResult {
    std::vector<std::map<std::uint64_t, BitString>> outputs;  // per reducer, q -> φ_q
    std::vector<DecodeFailure> failures;
    bool ok() const noexcept { return failures.empty(); }
};

/// Every reducer recovers the sub-packets it lacks by cancelling locally
/// computable operands from the symbols of the other holders of s, reassembles
/// its missing IVs and evaluates its output functions.
inline ReduceResult reduce_phase(const Mra& mra, const MadcTopology& topo, const ShuffleTranscript& transcript,
                                 const std::vector<IvTable>& mapped, const SimConfig& cfg) {
    check_config(topo, cfg);
    const ShuffleLayout layout(mra);
    const std::uint64_t sub = subpacket_bits(topo, cfg.beta);
    std::map<std::pair<std::size_t, std::uint64_t>, const CodedSymbol*> received;
    for (const CodedSymbol& c : transcript.symbols) received[{c.sender, c.s}] = &c;

    ReduceResult result;
    result.outputs.resize(topo.K());
    for (std::size_t k = 0; k < topo.K(); ++k) {
        const IvTable view = reducer_view(topo, mapped, k);
        const auto& reducer = topo.reducers[k];
        IvTable recovered;
        bool failed = false;
        auto fail = [&](std::uint64_t s, std::string detail) {
            failed = true;
            result.failures.push_back({k, s, reducer.to_string() + ": " + std::move(detail)});
        };

        for (int mapper = 1; mapper <= topo.num_mappers; ++mapper) {
            if (reducer.contains(mapper)) continue;
            BitString u;
            for (std::size_t j = 0; j < layout.cols_per_block(); ++j) {
                const std::uint64_t s = layout.entry(mapper, k, j).value();
                for (const Occurrence& holder : layout.occurrences(s)) {
                    if (holder.block == k) continue;
                    BitString part(sub);
                    auto it = received.find({holder.block, s});
                    if (it == received.end()) {
                        fail(s, "missing X_" + topo.reducers[holder.block].to_string() + "^" + std::to_string(s));
                    } else if (it->second->payload.size() != sub) {
                        fail(s, "X_" + topo.reducers[holder.block].to_string() + "^" + std::to_string(s) +
                                    " has wrong length");
                    } else {
                        part = it->second->payload;
                        for (const Occurrence& o : layout.occurrences(s)) {
                            if (o.block == holder.block || o.block == k) continue;
                            const PacketKey key{o.block, o.mapper, o.u_index, holder.block};
                            try {
                                part ^= build_subpacket(topo, layout, view, cfg, key);
                            } catch (const SchemeViolation& e) {
                                fail(s, "cannot cancel operand (" + topo.reducers[o.block].to_string() + ", B_" +
                                            std::to_string(o.mapper) + ") of X_" +
                                            topo.reducers[holder.block].to_string() + "^" + std::to_string(s) +
                                            ": " + e.what());
                            }
                        }
                    }
                    u.append(part);
                }
            }
            // Split the reassembled U_{W_A,B_λ} back into IVs.
            std::size_t offset = 0;
            for (std::uint64_t q : topo.functions_of_reducer[k]) {
                for (std::uint64_t f : topo.batch_of_mapper[static_cast<std::size_t>(mapper - 1)]) {
                    for (std::uint64_t n : topo.batches[f - 1]) {
                        recovered.insert(q, n, u.slice(offset, cfg.beta));
                        offset += cfg.beta;
                    }
                }
            }
        }
        if (failed) continue;

        for (std::uint64_t q : topo.functions_of_reducer[k]) {
            std::vector<BitString> ivs;
            ivs.reserve(topo.N);
            for (std::uint64_t n = 1; n <= topo.N; ++n) {
                const BitString* v = view.find(q, n);
                if (v == nullptr) v = recovered.find(q, n);
                if (v == nullptr) {
                    fail(0, "no IV v_{" + std::to_string(q) + "," + std::to_string(n) + "}");
                    break;
                }
                ivs.push_back(*v);
            }
            if (ivs.size() == topo.N) result.outputs[k].emplace(q, mock_reduce(q, ivs, cfg.output_bits));
        }
    }
    return result;
}

/// Ground truth: every IV computed centrally from the files, no topology involved.
inline std::map<std::uint64_t, BitString> oracle_outputs(const FileStore& store, const SimConfig& cfg,
                                                         std::uint64_t Q) {
    std::map<std::uint64_t, BitString> out;
    for (std::uint64_t q = 1; q <= Q; ++q) {
        std::vector<BitString> ivs;
        ivs.reserve(store.files.size());
        for (std::uint64_t n = 1; n <= store.files.size(); ++n) {
            ivs.push_back(mock_map(cfg.seed, q, n, store.file(n), cfg.beta));
        }
        out.emplace(q, mock_reduce(q, ivs, cfg.output_bits));
    }
    return out;
}

}  // namespace madc
