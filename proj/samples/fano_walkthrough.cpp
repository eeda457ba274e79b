// Builds the fano array, runs one simulation and prints what each reducer sends.

#include <iostream>

#include "madc/madc.hpp"

int main() {
    const madc::Design fano = madc::fano_plane();
    const madc::Mra mra = madc::build_mra(fano);
    std::cout << madc::export_mra(mra) << "\n";

    const auto report = madc::validate_mra(mra);
    std::cout << "g=" << report.regularity() << " S=" << report.S << "\n\n";

    const auto r = madc::run_simulation(fano, 1, 1, madc::SimConfig{}, true);
    for (const auto& sym : r.transcript.symbols) {
        std::cout << r.topology.reducers[sym.sender].to_string() << " sends X^" << sym.s << " = " << sym.payload.hex()
                  << "\n";
    }
    std::cout << "\nL = " << madc::to_string(r.loads.measured_comm_load) << " (theory "
              << madc::to_string(r.loads.theoretical_comm_load) << "), outputs "
              << (r.outputs_match_oracle() ? "match" : "differ from") << " the oracle\n";
    return r.verified() ? 0 : 1;
}
