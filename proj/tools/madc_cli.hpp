#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification or validation
// failure, 2 usage, configuration or I/O error.

#include <fstream>
#include <ios>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "madc/madc.hpp"

namespace madc::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;

/// Catalog name, or else a design JSON file.
inline Design resolve_design(const std::string& source) {
    const auto cat = catalog();
    if (auto it = cat.find(source); it != cat.end()) return it->second;
    return load_design_file(source);
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + path);
    out << content;
    if (!out) throw std::ios_base::failure("write failed for " + path);
}

inline std::string stats_line(const Mra& mra) {
    const MraReport report = validate_mra(mra);
    return "F=" + std::to_string(mra.rows()) + " K=" + std::to_string(mra.cols()) + " S=" +
           std::to_string(report.S) + " g=" + report.regularity();
}

inline int cmd_design_validate(const std::string& path, bool text, std::ostream& out, std::ostream& err) {
    std::ifstream in(path);
    if (!in) {
        err << "error: cannot open design file " << path << "\n";
        return kUsage;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const Design d = parse_design(buf.str());
    const DesignReport report = validate_design(d);
    if (text) {
        out << (report.valid ? "valid " : "invalid ") << d.label() << " with " << d.num_blocks() << " blocks\n";
        for (const auto& v : report.violations) out << "  " << v.message << "\n";
    } else {
        nlohmann::json j = report.to_json();
        j["design"] = d.label();
        out << j.dump(2) << "\n";
    }
    return report.valid ? kOk : kFailed;
}

inline int cmd_design_catalog(bool text, std::ostream& out) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& [name, d] : catalog()) {
        const DesignStats stats = design_stats(d);
        if (text) {
            out << name << "  " << d.label() << "  blocks=" << stats.num_blocks
                << " replication=" << stats.replication << "\n";
        } else {
            list.push_back({{"name", name}, {"design", d.label()}, {"num_points", d.num_points}, {"t", d.t},
                            {"alpha", d.alpha}, {"m", d.m}, {"num_blocks", stats.num_blocks},
                            {"replication", stats.replication}});
        }
    }
    if (!text) out << list.dump(2) << "\n";
    return kOk;
}

inline int cmd_mra_build(const std::string& source, const std::string& out_path, std::ostream& out,
                         std::ostream& err) {
    const Design d = resolve_design(source);
    const Mra mra = build_mra(d);
    const std::string csv = export_mra(mra);
    if (out_path.empty()) {
        out << csv;
        err << stats_line(mra) << "\n";
    } else {
        write_file(out_path, csv);
        out << stats_line(mra) << "\n";
    }
    return kOk;
}

struct SimulateOptions {
    std::string design;
    std::uint64_t eta1 = 1;
    std::uint64_t eta2 = 1;
    std::uint64_t beta = 48;
    std::uint64_t seed = 1;
    std::uint64_t file_bits = 256;
    std::uint64_t output_bits = 64;
    bool strict_beta = false;
    std::string dump_transcript;
    std::string dump_topology;
};

inline int cmd_simulate(const SimulateOptions& opt, bool text, std::ostream& out, std::ostream& err) {
    const Design d = resolve_design(opt.design);
    const MadcTopology topo = derive_topology(d, opt.eta1, opt.eta2);
    SimConfig cfg{opt.file_bits, opt.beta, opt.output_bits, opt.seed};
    if (!opt.strict_beta) cfg.beta = adjust_beta(topo, opt.beta);
    check_config(topo, cfg);

    const SimulationResult r = run_simulation(d, opt.eta1, opt.eta2, cfg);
    if (!opt.dump_transcript.empty()) write_file(opt.dump_transcript, r.transcript.to_json(r.topology).dump(2) + "\n");
    if (!opt.dump_topology.empty()) write_file(opt.dump_topology, r.topology.to_json().dump(2) + "\n");

    const bool ok = r.verified();
    if (text) {
        out << "design        " << d.label() << " (" << opt.design << ")\n"
            << "reducers K    " << r.topology.K() << "\n"
            << "files N       " << r.topology.N << "\n"
            << "functions Q   " << r.topology.Q << "\n"
            << "beta          " << cfg.beta << "\n"
            << "symbols       " << r.loads.symbol_count << " x " << r.loads.symbol_bits << " bits\n"
            << "r             " << to_string(r.loads.computation_load) << "\n"
            << "L measured    " << to_string(r.loads.measured_comm_load) << "\n"
            << "L theory      " << to_string(r.loads.theoretical_comm_load) << "\n"
            << "L uncoded     " << to_string(r.loads.uncoded_comm_load) << "\n"
            << "gain          " << to_string(r.loads.gain_factor) << "\n"
            << "verdict       " << (ok ? "OK" : "FAIL") << "\n";
    } else {
        nlohmann::json j{{"design", d.label()},
                         {"source", opt.design},
                         {"seed", cfg.seed},
                         {"verdict", ok ? "OK" : "FAIL"},
                         {"outputs_match_oracle", r.outputs_match_oracle()},
                         {"load_matches_theory", r.loads.measured_matches_theory()},
                         {"report", r.loads.to_json()},
                         {"mismatches", r.mismatches}};
        out << j.dump(2) << "\n";
    }
    for (const auto& m : r.mismatches) err << m << "\n";
    if (!r.loads.measured_matches_theory()) {
        err << "measured load " << to_string(r.loads.measured_comm_load) << " != theoretical "
            << to_string(r.loads.theoretical_comm_load) << "\n";
    }
    return ok ? kOk : kFailed;
}

inline int cmd_compare(int lambda, int alpha, int t, bool text, std::ostream& out) {
    const CtComparison c = ct_comparison(lambda, alpha, t);
    if (text) {
        out << c.to_text();
    } else {
        out << c.to_json().dump(2) << "\n";
    }
    return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coded MapReduce on multi-access topologies built from t-designs"};
    app.require_subcommand(1);
    std::string format = "json";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

    auto* design = app.add_subcommand("design", "Design utilities");
    design->require_subcommand(1);
    std::string validate_path;
    auto* validate = design->add_subcommand("validate", "Validate a design JSON file");
    validate->add_option("path", validate_path, "Design file")->required();
    auto* cat = design->add_subcommand("catalog", "List built-in designs");

    auto* mra = app.add_subcommand("mra", "MapReduce array utilities");
    mra->require_subcommand(1);
    std::string mra_design;
    std::string mra_out;
    auto* build = mra->add_subcommand("build", "Build the array of a design and write it as CSV");
    build->add_option("--design", mra_design, "Catalog name or design file")->required();
    build->add_option("--out", mra_out, "Output CSV path (stdout when omitted)");

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Run the coded Map/Shuffle/Reduce pipeline");
    simulate->add_option("--design", sim.design, "Catalog name or design file")->required();
    simulate->add_option("--eta1", sim.eta1, "Files per batch")->check(CLI::PositiveNumber);
    simulate->add_option("--eta2", sim.eta2, "Functions per reducer")->check(CLI::PositiveNumber);
    simulate->add_option("--beta", sim.beta, "Requested IV size in bits")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "Content seed")->envname("MADC_SEED");
    simulate->add_option("--file-bits", sim.file_bits, "File size in bits")->check(CLI::PositiveNumber);
    simulate->add_option("--output-bits", sim.output_bits, "Output size in bits")->check(CLI::PositiveNumber);
    simulate->add_flag("--strict-beta", sim.strict_beta, "Reject an invalid --beta instead of rounding up");
    simulate->add_option("--dump-transcript", sim.dump_transcript, "Write the shuffle transcript as JSON");
    simulate->add_option("--dump-topology", sim.dump_topology, "Write the topology as JSON");

    int lambda = 0;
    int alpha = 0;
    int t = 0;
    auto* compare = app.add_subcommand("compare", "Compare against the combinatorial topology");
    compare->add_option("--lambda", lambda, "Number of mappers")->required();
    compare->add_option("--alpha", alpha, "Mappers per reducer")->required();
    compare->add_option("--t", t, "Design strength")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    const bool text = format == "text";

    try {
        if (validate->parsed()) return cmd_design_validate(validate_path, text, out, err);
        if (cat->parsed()) return cmd_design_catalog(text, out);
        if (build->parsed()) return cmd_mra_build(mra_design, mra_out, out, err);
        if (simulate->parsed()) return cmd_simulate(sim, text, out, err);
        if (compare->parsed()) return cmd_compare(lambda, alpha, t, text, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    } catch (const UnsupportedDesign& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    } catch (const SchemeViolation& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kUsage;
}

}  // namespace madc::cli
