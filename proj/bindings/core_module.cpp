#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latticeweave/cli.hpp"
#include "latticeweave/graph.hpp"
#include "latticeweave/lattice.hpp"
#include "latticeweave/noise.hpp"
#include "latticeweave/statevector.hpp"
#include "latticeweave/tableau.hpp"
#include "latticeweave/verification.hpp"

namespace py = pybind11;
using namespace latticeweave;

namespace {

ConstructionSequence sequence_from(const std::string& scheme, const Lattice& lat,
                                   const std::string& text) {
    if (scheme == "i") return scheme_i_sequence(lat);
    if (scheme == "ii") return scheme_ii_sequence(lat);
    if (scheme == "custom") return parse_sequence(text);
    throw std::invalid_argument("unknown scheme '" + scheme + "'");
}

ConstructionSequence pre_measurement(const ConstructionSequence& seq) {
    ConstructionSequence out;
    out.init = seq.init;
    out.ops = seq.ops_before_measurement();
    return out;
}

NoiseModel noise_from(const std::string& kind, double theta_prime, bool shared) {
    if (kind == "none") return NoiseModel::none();
    if (kind == "dephasing") return NoiseModel::dephasing(theta_prime, shared);
    if (kind == "ising_cz") return NoiseModel::ising_cz(theta_prime, shared);
    throw std::invalid_argument("unknown noise kind '" + kind + "'");
}

LocalRegion block_for(const std::string& scheme, const Lattice& lat, const Graph& g) {
    if (scheme == "i") return default_block_scheme_i(lat, g);
    if (scheme == "ii") return default_block_scheme_ii(lat, g);
    return make_region(g, g.vertices());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "graph-state construction and verification on interleaved sublattices";

    m.def("version", []() { return std::string(kToolVersion); });

    m.def(
        "sequence_text",
        [](const std::string& scheme, int lx, int ly) {
            Lattice lat(lx, ly);
            return serialize_sequence(sequence_from(scheme, lat, ""));
        },
        py::arg("scheme"), py::arg("lx"), py::arg("ly"));

    m.def(
        "graph_edges",
        [](int lx, int ly, const std::string& scheme, const std::string& sequence_text) {
            Lattice lat(lx, ly);
            const Graph g =
                track_sequence(lat, pre_measurement(sequence_from(scheme, lat, sequence_text)));
            return std::vector<std::pair<int, int>>(g.edges().begin(), g.edges().end());
        },
        py::arg("lx"), py::arg("ly"), py::arg("scheme") = "i",
        py::arg("sequence_text") = "");

    m.def(
        "canonical_stabilizers",
        [](int lx, int ly, const std::string& scheme, const std::string& sequence_text,
           bool postselect_plus, std::uint64_t seed) {
            Lattice lat(lx, ly);
            Rng rng(seed);
            auto [tab, rec] = run_sequence_clifford(
                lat, sequence_from(scheme, lat, sequence_text), rng, postselect_plus);
            (void)rec;
            return tab.canonical_dump();
        },
        py::arg("lx"), py::arg("ly"), py::arg("scheme") = "i",
        py::arg("sequence_text") = "", py::arg("postselect_plus") = true,
        py::arg("seed") = 1);

    m.def(
        "fidelity_report",
        [](int lx, int ly, const std::string& scheme, const std::string& noise,
           double theta_prime, int trajectories, std::uint64_t seed, bool shared_theta) {
            Lattice lat(lx, ly);
            const ConstructionSequence seq =
                pre_measurement(sequence_from(scheme, lat, ""));
            const Graph g = track_sequence(lat, seq);
            const Bipartition bp = bipartition(lat, g, BipartitionMode::ByColumns);
            const LocalRegion region = block_for(scheme, lat, g);

            FidelityReport rep;
            if (noise == "none") {
                Rng rng(seed);
                auto [tab, rec] = run_sequence_clifford(lat, seq, rng, true);
                (void)rec;
                std::set<int> m_a, m_b;
                for (int v : region.interior) (bp.in_a(v) ? m_a : m_b).insert(v);
                rep.p_a = projector_expectation_tableau(tab, m_a, g);
                rep.p_b = projector_expectation_tableau(tab, m_b, g);
                rep.bound = fidelity_bound(rep.p_a, rep.p_b);
                rep.exact = projector_expectation_tableau(tab, region.interior, g);
                rep.gme = gme_check(rep.bound);
            } else {
                EnsembleSpec spec{lat, seq, noise_from(noise, theta_prime, shared_theta),
                                  TrajectoryPlan{trajectories, seed}, true,
                                  StateVector::kDefaultMaxQubits};
                rep = local_fidelity(spec, region, g, bp, true);
            }
            py::dict out;
            out["p_a"] = rep.p_a;
            out["p_a_se"] = rep.p_a_se;
            out["p_b"] = rep.p_b;
            out["p_b_se"] = rep.p_b_se;
            out["bound"] = rep.bound;
            out["bound_se"] = rep.bound_se;
            if (rep.exact) out["exact"] = *rep.exact;
            out["gme"] = rep.gme;
            return out;
        },
        py::arg("lx"), py::arg("ly"), py::arg("scheme") = "i", py::arg("noise") = "none",
        py::arg("theta_prime") = 0.0, py::arg("trajectories") = 200, py::arg("seed") = 1,
        py::arg("shared_theta") = false);

    m.def(
        "witness_edges",
        [](int lx, int ly, const std::string& scheme, const std::string& noise,
           double theta_prime, int trajectories, std::uint64_t seed) {
            Lattice lat(lx, ly);
            const ConstructionSequence seq =
                pre_measurement(sequence_from(scheme, lat, ""));
            const Graph g = track_sequence(lat, seq);
            const LocalRegion region = block_for(scheme, lat, g);
            std::set<int> support = region.interior;
            support.insert(region.border.begin(), region.border.end());
            std::vector<std::pair<int, int>> edges;
            for (const auto& [u, v] : g.edges())
                if (support.count(u) && support.count(v)) edges.emplace_back(u, v);

            std::vector<std::tuple<int, int, double, double>> out;
            if (noise == "none") {
                Rng rng(seed);
                auto [sv, rec] = run_sequence_statevector(lat, seq, rng, true);
                (void)rec;
                for (const auto& [i, j] : edges)
                    out.emplace_back(i, j, pairwise_witness_state(sv, i, j, g), 0.0);
            } else {
                EnsembleSpec spec{lat, seq, noise_from(noise, theta_prime, false),
                                  TrajectoryPlan{trajectories, seed}, true,
                                  StateVector::kDefaultMaxQubits};
                for (const auto& e : witness_map(spec, g, edges).entries)
                    out.emplace_back(e.i, e.j, e.w, e.se);
            }
            return out;
        },
        py::arg("lx"), py::arg("ly"), py::arg("scheme") = "i", py::arg("noise") = "none",
        py::arg("theta_prime") = 0.0, py::arg("trajectories") = 200, py::arg("seed") = 1);
}
