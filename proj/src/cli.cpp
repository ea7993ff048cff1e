#include "latticeweave/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "latticeweave/graph.hpp"
#include "latticeweave/lattice.hpp"
#include "latticeweave/noise.hpp"
#include "latticeweave/statevector.hpp"
#include "latticeweave/tableau.hpp"
#include "latticeweave/verification.hpp"

namespace latticeweave {

namespace {

std::string format_double(double v) {
    std::ostringstream out;
    out << std::setprecision(12) << v;
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << content;
}

Lattice config_lattice(const RunConfig& cfg) {
    if (cfg.lx < 1 || cfg.ly < 1) throw ConfigError("lattice extents must be >= 1");
    return Lattice(cfg.lx, cfg.ly);
}

ConstructionSequence config_sequence(const RunConfig& cfg, const Lattice& lat) {
    if (cfg.scheme == "i") return scheme_i_sequence(lat);
    if (cfg.scheme == "ii") return scheme_ii_sequence(lat);
    if (cfg.scheme == "custom") {
        if (cfg.sequence_path.empty())
            throw ConfigError("custom scheme needs --sequence <path>");
        return parse_sequence(read_file(cfg.sequence_path));
    }
    throw ConfigError("unknown scheme '" + cfg.scheme + "'");
}

NoiseModel config_noise(const RunConfig& cfg, double theta_prime) {
    if (cfg.noise == "none") return NoiseModel::none();
    if (cfg.noise == "dephasing") return NoiseModel::dephasing(theta_prime, cfg.shared_theta);
    if (cfg.noise == "ising_cz") return NoiseModel::ising_cz(theta_prime, cfg.shared_theta);
    throw ConfigError("unknown noise kind '" + cfg.noise + "'");
}

std::string resolve_backend(const RunConfig& cfg, std::ostream& out) {
    const bool noisy = cfg.noise != "none";
    if (cfg.backend == "tableau") {
        if (noisy) throw ConfigError("tableau backend is noiseless only");
        return "tableau";
    }
    if (cfg.backend == "statevector") return "statevector";
    if (cfg.backend != "auto") throw ConfigError("unknown backend '" + cfg.backend + "'");
    const std::string pick = noisy ? "statevector" : "tableau";
    out << "backend auto -> " << pick << (noisy ? " (noise requested)" : " (noiseless)")
        << "\n";
    return pick;
}

BipartitionMode config_bipartition(const RunConfig& cfg) {
    if (cfg.bipartition_mode == "columns") return BipartitionMode::ByColumns;
    if (cfg.bipartition_mode == "species") return BipartitionMode::BySpecies;
    throw ConfigError("unknown bipartition mode '" + cfg.bipartition_mode + "'");
}

LocalRegion config_block(const RunConfig& cfg, const Lattice& lat, const Graph& g) {
    if (cfg.block == "all") return make_region(g, g.vertices().empty()
                                                      ? std::set<int>{}
                                                      : std::set<int>(g.vertices().begin(),
                                                                      g.vertices().end()));
    if (cfg.block != "default") throw ConfigError("unknown block '" + cfg.block + "'");
    if (cfg.scheme == "ii") return default_block_scheme_ii(lat, g);
    if (cfg.scheme == "i") return default_block_scheme_i(lat, g);
    // custom sequences default to the whole graph
    return make_region(g, std::set<int>(g.vertices().begin(), g.vertices().end()));
}

/// Verification always targets the pre-measurement graph state; the global
/// measurement belongs to the extraction step checked by cmd_build.
ConstructionSequence strip_measurement(const ConstructionSequence& seq) {
    ConstructionSequence out;
    out.init = seq.init;
    out.ops = seq.ops_before_measurement();
    return out;
}

std::string provenance_line(const RunConfig& cfg, const std::string& command) {
    return std::string("# latticeweave ") + kToolVersion + " seed=" +
           std::to_string(cfg.seed) + " config=" + cfg.hash(command) + "\n";
}

EnsembleSpec config_ensemble(const RunConfig& cfg, const Lattice& lat,
                             const ConstructionSequence& seq, double theta_prime) {
    EnsembleSpec spec{lat, strip_measurement(seq), config_noise(cfg, theta_prime),
                      TrajectoryPlan{cfg.trajectories, cfg.seed}, cfg.postselect_plus,
                      cfg.max_qubits};
    return spec;
}

FidelityReport noiseless_report(const Lattice& lat, const ConstructionSequence& seq,
                                const LocalRegion& region, const Graph& g,
                                const Bipartition& bp) {
    Rng rng(0);
    auto [tab, rec] = run_sequence_clifford(lat, seq, rng, true);
    (void)rec;
    std::set<int> m_a, m_b;
    for (int v : region.interior) (bp.in_a(v) ? m_a : m_b).insert(v);
    FidelityReport rep;
    rep.p_a = projector_expectation_tableau(tab, m_a, g);
    rep.p_b = projector_expectation_tableau(tab, m_b, g);
    rep.bound = fidelity_bound(rep.p_a, rep.p_b);
    rep.exact = projector_expectation_tableau(tab, region.interior, g);
    rep.exact_se = 0.0;
    rep.gme = gme_check(rep.bound);
    return rep;
}

std::string report_csv(const RunConfig& cfg, const std::string& command,
                       const std::vector<std::pair<double, FidelityReport>>& rows) {
    std::ostringstream out;
    out << provenance_line(cfg, command);
    out << "theta_prime,p_a,p_a_se,p_b,p_b_se,bound,bound_se,exact,exact_se,gme\n";
    for (const auto& [tp, rep] : rows) {
        out << format_double(tp) << "," << format_double(rep.p_a) << ","
            << format_double(rep.p_a_se) << "," << format_double(rep.p_b) << ","
            << format_double(rep.p_b_se) << "," << format_double(rep.bound) << ","
            << format_double(rep.bound_se) << ","
            << (rep.exact ? format_double(*rep.exact) : std::string("")) << ","
            << (rep.exact_se ? format_double(*rep.exact_se) : std::string("")) << ","
            << (rep.gme ? 1 : 0) << "\n";
    }
    return out.str();
}

}  // namespace

std::string RunConfig::canonical_text(const std::string& command) const {
    std::ostringstream out;
    out << "command=" << command << "\n"
        << "scheme=" << scheme << "\n"
        << "sequence=" << sequence_path << "\n"
        << "size=" << lx << "x" << ly << "\n"
        << "backend=" << backend << "\n"
        << "noise=" << noise << "\n"
        << "theta_prime=" << format_double(theta_prime) << "\n";
    out << "grid=";
    for (std::size_t i = 0; i < grid.size(); ++i)
        out << (i ? "," : "") << format_double(grid[i]);
    out << "\n"
        << "trajectories=" << trajectories << "\n"
        << "seed=" << seed << "\n"
        << "bipartition=" << bipartition_mode << "\n"
        << "block=" << block << "\n"
        << "shots=" << shots << "\n"
        << "postselect=" << (postselect_plus ? "plus" : "random") << "\n"
        << "shared_theta=" << (shared_theta ? 1 : 0) << "\n"
        << "max_qubits=" << max_qubits << "\n";
    return out.str();
}

std::string RunConfig::hash(const std::string& command) const {
    // FNV-1a over the canonical text.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : canonical_text(command)) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

int cmd_build(const RunConfig& cfg, std::ostream& out) {
    const Lattice lat = config_lattice(cfg);
    const ConstructionSequence seq = config_sequence(cfg, lat);
    const std::string backend = resolve_backend(cfg, out);
    const std::filesystem::path dir(cfg.out_dir);

    const Graph g = track_sequence(lat, strip_measurement(seq));
    write_file(dir / "graph_edges.csv",
               provenance_line(cfg, "build") + g.edge_list_csv());
    write_file(dir / "graph_adjacency.txt", g.adjacency_list_text());

    std::ostringstream mcsv;
    mcsv << provenance_line(cfg, "build") << "site,outcome,deterministic\n";

    if (backend == "tableau") {
        Rng rng(cfg.seed);
        auto [tab, rec] = run_sequence_clifford(lat, seq, rng, cfg.postselect_plus);
        write_file(dir / "stabilizers_canonical.txt", tab.canonical_dump());
        for (const auto& e : rec.entries)
            mcsv << e.site << "," << e.outcome << "," << (e.deterministic ? 1 : 0) << "\n";
    } else {
        Rng rng(cfg.seed);
        auto [sv, rec] = run_sequence_statevector(lat, seq, rng, cfg.postselect_plus,
                                                  cfg.max_qubits);
        for (const auto& e : rec.entries)
            mcsv << e.site << "," << e.outcome << "," << (e.deterministic ? 1 : 0) << "\n";
        if (cfg.dump_state) {
            std::ostringstream st;
            st << std::setprecision(17);
            for (std::size_t i = 0; i < sv.dim(); ++i) {
                const cplx a = sv.amplitude(i);
                st << i << " " << a.real() << " " << a.imag() << "\n";
            }
            write_file(dir / "state_amplitudes.txt", st.str());
        }
        // Canonical stabilizers are still well defined for Clifford
        // sequences; reuse the tableau backend for the dump.
        Rng rng2(cfg.seed);
        auto [tab, rec2] = run_sequence_clifford(lat, seq, rng2, cfg.postselect_plus);
        (void)rec2;
        write_file(dir / "stabilizers_canonical.txt", tab.canonical_dump());
    }
    if (seq.has_measurement()) write_file(dir / "measurements.csv", mcsv.str());
    out << "build: wrote graph and stabilizer artifacts to " << dir.string() << "\n";
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const Lattice lat = config_lattice(cfg);
    const ConstructionSequence seq = config_sequence(cfg, lat);
    const std::string backend = resolve_backend(cfg, out);
    const Graph g = track_sequence(lat, strip_measurement(seq));
    const Bipartition bp = bipartition(lat, g, config_bipartition(cfg));
    const LocalRegion region = config_block(cfg, lat, g);
    const std::filesystem::path dir(cfg.out_dir);

    FidelityReport rep;
    if (backend == "tableau") {
        rep = noiseless_report(lat, strip_measurement(seq), region, g, bp);
    } else {
        rep = local_fidelity(config_ensemble(cfg, lat, seq, cfg.theta_prime), region, g,
                             bp, true);
    }

    std::string json = fidelity_report_json(rep);
    if (cfg.shots > 0) {
        std::set<int> m_a, m_b;
        for (int v : region.interior) (bp.in_a(v) ? m_a : m_b).insert(v);
        SampledEstimate ea, eb;
        if (backend == "statevector") {
            const EnsembleSpec spec = config_ensemble(cfg, lat, seq, cfg.theta_prime);
            ea = projector_expectation_sampled(spec, m_a, g, bp, cfg.shots);
            eb = projector_expectation_sampled(spec, m_b, g, bp, cfg.shots);
        } else {
            Rng rng(cfg.seed);
            auto [sv, rec] = run_sequence_statevector(lat, strip_measurement(seq), rng,
                                                      cfg.postselect_plus, cfg.max_qubits);
            (void)rec;
            Rng srng(trajectory_seed(cfg.seed, 0));
            ea = projector_expectation_sampled(sv, m_a, g, bp, cfg.shots, srng);
            eb = projector_expectation_sampled(sv, m_b, g, bp, cfg.shots, srng);
        }
        std::ostringstream extra;
        extra << json.substr(0, json.rfind('}'))
              << ",\n  \"p_a_sampled\": " << format_double(ea.value)
              << ",\n  \"p_a_sampled_se\": " << format_double(ea.se)
              << ",\n  \"p_b_sampled\": " << format_double(eb.value)
              << ",\n  \"p_b_sampled_se\": " << format_double(eb.se) << "\n}\n";
        json = extra.str();
    }
    write_file(dir / "verify_report.json", json);
    write_file(dir / "verify_report.csv",
               report_csv(cfg, "verify", {{cfg.theta_prime, rep}}));
    out << "verify: bound=" << format_double(rep.bound) << " gme=" << (rep.gme ? 1 : 0)
        << "\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    if (cfg.grid.empty()) throw ConfigError("sweep needs a nonempty --grid");
    for (double tp : cfg.grid)
        if (tp < 0.0) throw ConfigError("grid values must be nonnegative");
    if (cfg.noise == "none") throw ConfigError("sweep needs a noise channel");
    const Lattice lat = config_lattice(cfg);
    const ConstructionSequence seq = config_sequence(cfg, lat);
    resolve_backend(cfg, out);
    const Graph g = track_sequence(lat, strip_measurement(seq));
    const Bipartition bp = bipartition(lat, g, config_bipartition(cfg));
    const LocalRegion region = config_block(cfg, lat, g);

    std::vector<std::pair<double, FidelityReport>> rows;
    for (double tp : cfg.grid)
        rows.emplace_back(tp, local_fidelity(config_ensemble(cfg, lat, seq, tp), region,
                                             g, bp, true));
    const std::string name =
        "sweep_" + cfg.scheme + "_" + cfg.noise + ".csv";
    write_file(std::filesystem::path(cfg.out_dir) / name,
               report_csv(cfg, "sweep", rows));
    out << "sweep: wrote " << name << " (" << rows.size() << " rows)\n";
    return kExitOk;
}

int cmd_witness(const RunConfig& cfg, std::ostream& out) {
    const Lattice lat = config_lattice(cfg);
    const ConstructionSequence seq = config_sequence(cfg, lat);
    const std::string backend = resolve_backend(cfg, out);
    const Graph g = track_sequence(lat, strip_measurement(seq));
    const LocalRegion region = config_block(cfg, lat, g);

    std::set<int> support = region.interior;
    support.insert(region.border.begin(), region.border.end());
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : g.edges())
        if (support.count(u) && support.count(v)) edges.emplace_back(u, v);

    WitnessMap map;
    if (backend == "tableau") {
        Rng rng(cfg.seed);
        auto [tab, rec] = run_sequence_clifford(lat, strip_measurement(seq), rng, true);
        (void)rec;
        for (const auto& [i, j] : edges) {
            PauliString si = PauliString::single(i, Pauli::X);
            for (int nb : g.neighbors(i)) si.set(nb, Pauli::Z);
            PauliString sj = PauliString::single(j, Pauli::X);
            for (int nb : g.neighbors(j)) sj.set(nb, Pauli::Z);
            map.entries.push_back(
                {i, j,
                 static_cast<double>(tab.pauli_expectation(si)) +
                     static_cast<double>(tab.pauli_expectation(sj)) - 1.0,
                 0.0});
        }
    } else {
        map = witness_map(config_ensemble(cfg, lat, seq, cfg.theta_prime), g, edges);
    }
    const std::string name = "witness_" + cfg.scheme + "_" + cfg.noise + ".csv";
    write_file(std::filesystem::path(cfg.out_dir) / name,
               provenance_line(cfg, "witness") + witness_map_csv(map));
    out << "witness: wrote " << name << " (" << map.entries.size() << " edges)\n";
    return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"graph-state construction and verification on interleaved optical "
                 "sublattices"};
    app.require_subcommand(1);
    app.set_config("--config")->configurable(false);

    RunConfig cfg;
    std::string size = "3x3";
    std::string postselect = "plus";
    std::string grid_text;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scheme", cfg.scheme, "i, ii or custom")->capture_default_str();
        sub->add_option("--sequence", cfg.sequence_path, "sequence file for --scheme custom");
        sub->add_option("--size", size, "lattice extents, e.g. 4x4")->capture_default_str();
        sub->add_option("--backend", cfg.backend, "tableau, statevector or auto")
            ->capture_default_str();
        sub->add_option("--noise", cfg.noise, "none, dephasing or ising_cz")
            ->capture_default_str();
        sub->add_option("--theta-prime", cfg.theta_prime, "noise angle bound (radians)")
            ->capture_default_str();
        sub->add_option("--grid", grid_text, "comma separated theta' grid (sweep)");
        sub->add_option("--trajectories", cfg.trajectories, "Monte Carlo trajectory count")
            ->capture_default_str();
        sub->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
        sub->add_option("--bipartition", cfg.bipartition_mode, "columns or species")
            ->capture_default_str();
        sub->add_option("--block", cfg.block, "default or all")->capture_default_str();
        sub->add_option("--shots", cfg.shots, "sampled estimator shots (0 = exact only)")
            ->capture_default_str();
        sub->add_option("--postselect", postselect, "plus or random")
            ->capture_default_str();
        sub->add_flag("--shared-theta", cfg.shared_theta,
                      "one angle per trajectory instead of fresh draws");
        sub->add_flag("--dump-state", cfg.dump_state, "write statevector amplitudes");
        sub->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
        sub->add_option("--max-qubits", cfg.max_qubits, "statevector qubit cap")
            ->capture_default_str();
    };

    CLI::App* build = app.add_subcommand("build", "run a construction sequence");
    CLI::App* verify = app.add_subcommand("verify", "fidelity bound for one setting");
    CLI::App* sweep = app.add_subcommand("sweep", "fidelity bound over a theta' grid");
    CLI::App* witness = app.add_subcommand("witness", "per-edge witness values");
    for (CLI::App* sub : {build, verify, sweep, witness}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kExitOk;
        }
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        try {
            const auto x = size.find('x');
            if (x == std::string::npos) throw ConfigError("size must look like 4x4");
            cfg.lx = std::stoi(size.substr(0, x));
            cfg.ly = std::stoi(size.substr(x + 1));
            if (!grid_text.empty()) {
                std::istringstream in(grid_text);
                std::string tok;
                while (std::getline(in, tok, ',')) cfg.grid.push_back(std::stod(tok));
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("malformed numeric option");
        }
        if (postselect == "plus") cfg.postselect_plus = true;
        else if (postselect == "random") cfg.postselect_plus = false;
        else throw ConfigError("postselect must be plus or random");

        if (app.got_subcommand(build)) return cmd_build(cfg, out);
        if (app.got_subcommand(verify)) return cmd_verify(cfg, out);
        if (app.got_subcommand(sweep)) return cmd_sweep(cfg, out);
        return cmd_witness(cfg, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SequenceError& e) {
        err << "sequence error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ResourceCapError& e) {
        err << "resource cap: " << e.what() << "\n";
        return kExitCap;
    } catch (const std::invalid_argument& e) {
        err << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    }
}

}  // namespace latticeweave
