// Acceptance suite: one criterion per invocation (argv[1] = 1..11), or all
// when no argument is given. Prints exactly one PASS/FAIL line per criterion
// with the measured values, and exits nonzero when the requested criteria
// do not all hold.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "latticeweave/cli.hpp"
#include "latticeweave/graph.hpp"
#include "latticeweave/lattice.hpp"
#include "latticeweave/noise.hpp"
#include "latticeweave/statevector.hpp"
#include "latticeweave/tableau.hpp"
#include "latticeweave/verification.hpp"

using namespace latticeweave;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<double> kGrid{0.0, kPi / 40.0, kPi / 20.0, kPi / 10.0, kPi / 5.0,
                                kPi / 2.0};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ConstructionSequence pre_measurement(const ConstructionSequence& seq) {
    ConstructionSequence out;
    out.init = seq.init;
    out.ops = seq.ops_before_measurement();
    return out;
}

struct VerifySetup {
    Lattice lat;
    ConstructionSequence seq;  // pre-measurement
    Graph g;
    Bipartition bp;
    LocalRegion block;
};

VerifySetup setup(const std::string& scheme) {
    Lattice lat(3, 3);
    const ConstructionSequence full =
        scheme == "i" ? scheme_i_sequence(lat) : scheme_ii_sequence(lat);
    const ConstructionSequence seq = pre_measurement(full);
    Graph g = track_sequence(lat, seq);
    Bipartition bp = bipartition(lat, g, BipartitionMode::ByColumns);
    LocalRegion block =
        scheme == "i" ? default_block_scheme_i(lat, g) : default_block_scheme_ii(lat, g);
    return {lat, seq, std::move(g), std::move(bp), std::move(block)};
}

NoiseModel channel(const std::string& name, double tp) {
    return name == "dephasing" ? NoiseModel::dephasing(tp) : NoiseModel::ising_cz(tp);
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(4);
    out << v;
    return out.str();
}

// --- criterion 1 -----------------------------------------------------------

bool criterion1(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    int checked = 0;
    for (auto [lx, ly] : std::vector<std::pair<int, int>>{
             {2, 2}, {3, 3}, {4, 4}, {5, 5}, {6, 6}, {7, 7}, {8, 8}, {3, 5}, {8, 3}}) {
        Lattice lat(lx, ly);
        for (const auto& full : {scheme_i_sequence(lat), scheme_ii_sequence(lat)}) {
            const ConstructionSequence seq = pre_measurement(full);
            const Graph g = track_sequence(lat, seq);
            Rng rng(1);
            auto [tab, rec] = run_sequence_clifford(lat, seq, rng);
            auto lhs =
                canonical_generator_set(tracked_state_stabilizers(lat, g), lat.n_sites());
            auto rhs = canonical_generator_set(tab.stabilizer_generators(), lat.n_sites());
            if (lhs != rhs) {
                detail = "group mismatch on " + std::to_string(lx) + "x" +
                         std::to_string(ly);
                return false;
            }
            ++checked;
        }
    }
    const double dt = seconds_since(t0);
    detail = std::to_string(checked) + " lattice/sequence pairs equal, " + fmt(dt) + " s";
    return dt < 10.0;
}

// --- criterion 2 -----------------------------------------------------------

bool criterion2(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng pauli_rng(12345);
    int compared = 0;
    for (auto [lx, ly] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 2}, {2, 2},
                                                          {3, 2}, {2, 3}, {1, 3}}) {
        Lattice lat(lx, ly);
        const int n = lat.n_sites();
        for (const auto& full : {scheme_i_sequence(lat), scheme_ii_sequence(lat)}) {
            for (std::size_t k = 0; k <= full.ops.size(); ++k) {
                ConstructionSequence prefix;
                prefix.init = full.init;
                prefix.ops.assign(full.ops.begin(), full.ops.begin() + k);
                Rng r1(7), r2(7);
                auto [tab, rec1] = run_sequence_clifford(lat, prefix, r1, true);
                auto [sv, rec2] = run_sequence_statevector(lat, prefix, r2, true);

                std::vector<PauliString> probes;
                for (int s = 0; s < n; ++s)
                    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z})
                        probes.push_back(PauliString::single(s, p));
                for (int t = 0; t < 20; ++t) {
                    PauliString p;
                    for (int w = 0; w < 4; ++w) {
                        const int site = static_cast<int>(pauli_rng() % n);
                        const Pauli op = static_cast<Pauli>(1 + pauli_rng() % 3);
                        p.set(site, op);
                    }
                    probes.push_back(p);
                }
                for (const auto& p : probes) {
                    const double tv = static_cast<double>(tab.pauli_expectation(p));
                    const double svv = sv.pauli_expectation(p);
                    if (std::abs(tv - svv) > 1e-10) {
                        detail = "disagreement " + p.str() + " tab=" + fmt(tv) +
                                 " sv=" + fmt(svv) + " on " + std::to_string(lx) + "x" +
                                 std::to_string(ly) + " prefix " + std::to_string(k);
                        return false;
                    }
                    ++compared;
                }
            }
        }
    }
    const double dt = seconds_since(t0);
    detail = std::to_string(compared) + " expectations agree, " + fmt(dt) + " s";
    return dt < 60.0;
}

// --- criterion 3 -----------------------------------------------------------

bool criterion3(std::string& detail) {
    Lattice lat(3, 3);
    const ConstructionSequence seq = scheme_ii_sequence(lat);
    std::vector<int> blues;
    for (int s = 0; s < lat.n_sites(); ++s)
        if (lat.species_of(s) == Species::BlueCs) blues.push_back(s);
    const auto surface = surface_code_stabilizers(lat, blues);

    // post-selected run: whole-register group = surface generators on the
    // retained sites plus +X on every measured-out site
    Rng rng(5);
    auto [tab, rec] = run_sequence_clifford(lat, seq, rng, true);
    std::vector<PauliString> expected = surface;
    for (int s = 0; s < lat.n_sites(); ++s)
        if (lat.species_of(s) == Species::RedLi)
            expected.push_back(PauliString::single(s, Pauli::X));
    const auto lhs = canonical_generator_set(expected, lat.n_sites());
    const auto rhs = canonical_generator_set(tab.stabilizer_generators(), lat.n_sites());
    if (lhs != rhs) {
        detail = "post-selected group does not match the generated code group";
        return false;
    }

    // recorded random outcomes: code generators stay sharp (+/-1, never 0)
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng r(seed);
        auto [t, record] = run_sequence_clifford(lat, seq, r, false);
        for (const auto& gen : surface) {
            const int e = t.pauli_expectation(gen);
            if (e == 0) {
                detail = "generator " + gen.str() + " unsharp at seed " +
                         std::to_string(seed);
                return false;
            }
        }
    }
    detail = "group equality holds; 9 generators sharp over 100 seeded runs";
    return true;
}

// --- criteria 4 and 5 ------------------------------------------------------

struct SweepPoint {
    std::string scheme, channel;
    double theta_prime;
    FidelityReport rep;
};

std::vector<SweepPoint> run_sweep_points(const std::vector<double>& grid, int n_traj) {
    std::vector<SweepPoint> points;
    for (const std::string scheme : {"i", "ii"}) {
        const VerifySetup s = setup(scheme);
        for (const std::string ch : {"dephasing", "ising_cz"}) {
            for (double tp : grid) {
                EnsembleSpec spec{s.lat, s.seq, channel(ch, tp),
                                  TrajectoryPlan{n_traj, 1000 + static_cast<std::uint64_t>(
                                                              tp * 1e6)},
                                  true, StateVector::kDefaultMaxQubits};
                points.push_back(
                    {scheme, ch, tp, local_fidelity(spec, s.block, s.g, s.bp, true)});
            }
        }
    }
    return points;
}

bool criterion4(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto points = run_sweep_points(kGrid, 2000);
    double worst_margin = 1e9;
    std::string worst;
    for (const auto& p : points) {
        const double se = 3.0 * std::sqrt(p.rep.bound_se * p.rep.bound_se +
                                          p.rep.exact_se.value_or(0.0) *
                                              p.rep.exact_se.value_or(0.0));
        const double margin = *p.rep.exact + se - p.rep.bound;
        if (margin < worst_margin) {
            worst_margin = margin;
            worst = p.scheme + "/" + p.channel + "@" + fmt(p.theta_prime) +
                    " bound=" + fmt(p.rep.bound) + " exact=" + fmt(*p.rep.exact);
        }
    }
    detail = std::to_string(points.size()) + " grid points, tightest margin " +
             fmt(worst_margin) + " (" + worst + "), " + fmt(seconds_since(t0)) + " s";
    return worst_margin >= -1e-12;
}

bool criterion5(std::string& detail) {
    const auto points = run_sweep_points({kPi / 20.0}, 2000);
    bool ok = true;
    std::ostringstream out;
    for (const auto& p : points) {
        const bool here = p.rep.bound >= 0.97 && *p.rep.exact >= 0.97;
        ok = ok && here;
        out << p.scheme << "/" << p.channel << " bound=" << fmt(p.rep.bound)
            << " exact=" << fmt(*p.rep.exact) << (here ? " ok; " : " below 0.97; ");
    }
    detail = out.str();
    return ok;
}

// --- criterion 6 -----------------------------------------------------------

bool criterion6(std::string& detail) {
    double worst = 1e9;
    std::string where;
    int edges_checked = 0;
    for (const std::string scheme : {"i", "ii"}) {
        const VerifySetup s = setup(scheme);
        std::set<int> support = s.block.interior;
        support.insert(s.block.border.begin(), s.block.border.end());
        std::vector<std::pair<int, int>> edges;
        for (const auto& [u, v] : s.g.edges())
            if (support.count(u) && support.count(v)) edges.emplace_back(u, v);
        EnsembleSpec spec{s.lat, s.seq, NoiseModel::dephasing(kPi / 5.0),
                          TrajectoryPlan{2000, 77}, true,
                          StateVector::kDefaultMaxQubits};
        const WitnessMap map = witness_map(spec, s.g, edges);
        for (const auto& e : map.entries) {
            ++edges_checked;
            const double margin = e.w - 3.0 * e.se;
            if (margin < worst) {
                worst = margin;
                where = "scheme " + scheme + " edge (" + std::to_string(e.i) + "," +
                        std::to_string(e.j) + ") w=" + fmt(e.w) + " se=" + fmt(e.se);
            }
        }
    }
    detail = std::to_string(edges_checked) + " edges, weakest w-3se=" + fmt(worst) +
             " at " + where;
    return worst > 0.0;
}

// --- criterion 7 -----------------------------------------------------------

bool criterion7(std::string& detail) {
    Lattice lat(1, 1);
    ConstructionSequence seq;  // both sites |+>, no gates
    const Observable obs{"x0", [](const StateVector& s, Rng&) {
                             return s.pauli_expectation(PauliString::single(0, Pauli::X));
                         }};
    const TrajectoryPlan plan{100000, 424242};

    const double tp1 = kPi / 5.0;
    const auto a =
        run_monte_carlo(lat, seq, NoiseModel::dephasing(tp1), plan, {obs}).stats.at("x0");
    const double target = std::sin(2.0 * tp1) / (2.0 * tp1);
    const bool ok1 = std::abs(a.mean - target) <= 3.0 * a.se;

    const auto b = run_monte_carlo(lat, seq, NoiseModel::dephasing(kPi / 2.0), plan, {obs})
                       .stats.at("x0");
    const bool ok2 = std::abs(b.mean) <= 3.0 * b.se;

    detail = "pi/5: mean=" + fmt(a.mean) + " target=" + fmt(target) + " se=" + fmt(a.se) +
             "; pi/2: mean=" + fmt(b.mean) + " se=" + fmt(b.se);
    return ok1 && ok2;
}

// --- criterion 8 -----------------------------------------------------------

bool criterion8(std::string& detail) {
    const VerifySetup s = setup("i");
    // the 2^-|M| limit needs every region site fully dephased, so restrict
    // to sites that are already in |+> when the channel inserts; sites the
    // sequence wakes up later only see a trivial phase
    std::vector<int> interior;
    for (int v : s.block.interior)
        if (s.seq.init.for_site(s.lat, v) == InitState::Plus) interior.push_back(v);
    std::ostringstream out;
    bool ok = true;
    for (int size = 1; size <= 3; ++size) {
        std::set<int> m(interior.begin(), interior.begin() + size);
        EnsembleSpec spec{s.lat, s.seq, NoiseModel::dephasing(kPi / 2.0),
                          TrajectoryPlan{2000, 300 + static_cast<std::uint64_t>(size)},
                          true, StateVector::kDefaultMaxQubits};
        const auto stats = run_monte_carlo(
            spec.lattice, spec.seq, spec.model, spec.plan,
            {{"p", [&](const StateVector& st, Rng&) {
                  return projector_expectation_exact(st, m, s.g);
              }}},
            spec.postselect_plus);
        const auto& st = stats.stats.at("p");
        const double target = std::pow(2.0, -size);
        const bool here = std::abs(st.mean - target) <= 3.0 * st.se;
        ok = ok && here;
        out << "|M|=" << size << ": " << fmt(st.mean) << " vs " << fmt(target)
            << " (se=" << fmt(st.se) << (here ? ") " : ", off) ");
    }
    detail = out.str();
    return ok;
}

// --- criterion 9 -----------------------------------------------------------

bool criterion9(std::string& detail) {
    const VerifySetup s = setup("i");
    std::set<int> m_a;
    for (int v : s.block.interior)
        if (s.bp.in_a(v)) m_a.insert(v);

    // noiseless: single state, sampled vs exact
    Rng rng(17);
    auto [sv, rec] = run_sequence_statevector(s.lat, s.seq, rng);
    Rng srng(18);
    const auto clean = projector_expectation_sampled(sv, m_a, s.g, s.bp, 10000, srng);
    const double clean_exact = projector_expectation_exact(sv, m_a, s.g);
    const bool ok1 = std::abs(clean.value - clean_exact) <= 3.0 * clean.se + 1e-12;

    // dephased ensemble
    EnsembleSpec spec{s.lat, s.seq, NoiseModel::dephasing(kPi / 5.0),
                      TrajectoryPlan{2000, 55}, true, StateVector::kDefaultMaxQubits};
    const auto sampled = projector_expectation_sampled(spec, m_a, s.g, s.bp, 10000);
    const auto stats = run_monte_carlo(
        spec.lattice, spec.seq, spec.model, spec.plan,
        {{"p", [&](const StateVector& st, Rng&) {
              return projector_expectation_exact(st, m_a, s.g);
          }}},
        spec.postselect_plus);
    const auto& ex = stats.stats.at("p");
    const double comb = 3.0 * std::sqrt(sampled.se * sampled.se + ex.se * ex.se);
    const bool ok2 = std::abs(sampled.value - ex.mean) <= comb;

    detail = "noiseless sampled=" + fmt(clean.value) + " exact=" + fmt(clean_exact) +
             "; dephased sampled=" + fmt(sampled.value) + " exact=" + fmt(ex.mean) +
             " (3se=" + fmt(comb) + ")";
    return ok1 && ok2;
}

// --- criterion 10 ----------------------------------------------------------

bool criterion10(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    Lattice big(50, 50);
    Rng rng(1);
    auto [tab, rec] = run_sequence_clifford(big, scheme_i_sequence(big), rng);
    tab.canonicalize();
    const double build_dt = seconds_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    Lattice mid(5, 2);  // 20 qubits
    auto [sv, rec2] = run_trajectory(mid, pre_measurement(scheme_i_sequence(mid)),
                                     NoiseModel::dephasing(kPi / 10.0), 9, false, 22);
    const double traj_dt = seconds_since(t1);

    detail = "5000-qubit build+canonical " + fmt(build_dt) + " s (<30); 20-qubit trajectory " +
             fmt(traj_dt) + " s (<0.5)";
    return build_dt < 30.0 && traj_dt < 0.5;
}

// --- criterion 11 ----------------------------------------------------------

bool criterion11(std::string& detail) {
    const fs::path base = fs::temp_directory_path() / "latticeweave_acceptance_11";
    fs::remove_all(base);
    RunConfig cfg;
    cfg.scheme = "ii";
    cfg.lx = cfg.ly = 3;
    cfg.noise = "dephasing";
    cfg.grid = {0.0, kPi / 20.0};
    cfg.trajectories = 100;
    cfg.seed = 31337;
    std::ostringstream sink;
    cfg.out_dir = (base / "a").string();
    if (cmd_sweep(cfg, sink) != kExitOk) {
        detail = "first sweep failed";
        return false;
    }
    cfg.out_dir = (base / "b").string();
    if (cmd_sweep(cfg, sink) != kExitOk) {
        detail = "second sweep failed";
        return false;
    }
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    const std::string a = slurp(base / "a" / "sweep_ii_dephasing.csv");
    const std::string b = slurp(base / "b" / "sweep_ii_dephasing.csv");
    fs::remove_all(base);
    detail = a == b ? "two seeded sweeps byte-identical (" +
                          std::to_string(a.size()) + " bytes)"
                    : "sweep outputs differ";
    return !a.empty() && a == b;
}

}  // namespace

int main(int argc, char** argv) {
    using CriterionFn = bool (*)(std::string&);
    const std::vector<std::pair<const char*, CriterionFn>> criteria{
        {"construction equivalence", criterion1},
        {"backend cross-validation", criterion2},
        {"surface-code extraction", criterion3},
        {"bound validity", criterion4},
        {"0.98 reproduction", criterion5},
        {"witness positivity", criterion6},
        {"dephasing oracle", criterion7},
        {"fully-dephased projector", criterion8},
        {"estimator consistency", criterion9},
        {"performance", criterion10},
        {"determinism", criterion11},
    };

    int first = 1, last = static_cast<int>(criteria.size());
    if (argc > 1) {
        first = last = std::atoi(argv[1]);
        if (first < 1 || first > static_cast<int>(criteria.size())) {
            std::cerr << "criterion must be 1.." << criteria.size() << "\n";
            return 2;
        }
    }

    bool all_ok = true;
    for (int k = first; k <= last; ++k) {
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[static_cast<std::size_t>(k - 1)].second(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << k << " ("
                  << criteria[static_cast<std::size_t>(k - 1)].first << "): " << detail
                  << std::endl;
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
