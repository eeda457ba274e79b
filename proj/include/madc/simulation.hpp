#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "madc/design.hpp"
#include "madc/engine.hpp"
#include "madc/metrics.hpp"
#include "madc/mra.hpp"
#include "madc/topology.hpp"

namespace madc {

struct SimulationResult {
    Mra mra;
    MadcTopology topology;
    SimConfig config;
    FileStore store;
    std::vector<IvTable> mapped;
    ShuffleTranscript transcript;
    ReduceResult reduced;
    std::map<std::uint64_t, BitString> oracle;
    LoadReport loads;
    std::vector<std::string> mismatches;  // decode failures and outputs differing from the oracle

    bool outputs_match_oracle() const { return mismatches.empty(); }
    bool verified() const { return outputs_match_oracle() && loads.measured_matches_theory(); }
};

/// Reducer outputs against the oracle; empty when every reducer is correct.
inline std::vector<std::string> compare_with_oracle(const MadcTopology& topo, const ReduceResult& reduced,
                                                    const std::map<std::uint64_t, BitString>& oracle) {
    std::vector<std::string> out;
    for (const DecodeFailure& f : reduced.failures) out.push_back("decode failure: " + f.detail);
    for (std::size_t k = 0; k < topo.K(); ++k) {
        for (std::uint64_t q : topo.functions_of_reducer[k]) {
            auto got = reduced.outputs[k].find(q);
            if (got == reduced.outputs[k].end()) {
                out.push_back("reducer " + topo.reducers[k].to_string() + " produced no output for q=" + std::to_string(q));
            } else if (got->second != oracle.at(q)) {
                out.push_back("reducer " + topo.reducers[k].to_string() + " output for q=" + std::to_string(q) +
                              " differs from oracle");
            }
        }
    }
    return out;
}

/// Topology → files → map → shuffle → reduce → oracle check → loads.
inline SimulationResult run_simulation(const Design& design, std::uint64_t eta1, std::uint64_t eta2,
                                       const SimConfig& config, bool record_provenance = false) {
    SimulationResult r;
    r.mra = build_mra(design);
    r.topology = derive_topology(design, eta1, eta2);
    r.config = config;
    check_config(r.topology, config);
    r.store = generate_files(r.topology, config);
    r.mapped = map_phase(r.topology, r.store, config);
    r.transcript = shuffle_phase(r.mra, r.topology, r.mapped, config, record_provenance);
    r.reduced = reduce_phase(r.mra, r.topology, r.transcript, r.mapped, config);
    r.oracle = oracle_outputs(r.store, config, r.topology.Q);
    r.loads = measured_loads(r.transcript, r.topology, config);
    r.mismatches = compare_with_oracle(r.topology, r.reduced, r.oracle);
    return r;
}

}  // namespace madc
