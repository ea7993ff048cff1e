#ifndef LATTICEWEAVE_VERIFICATION_HPP
#define LATTICEWEAVE_VERIFICATION_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "latticeweave/graph.hpp"
#include "latticeweave/lattice.hpp"
#include "latticeweave/noise.hpp"
#include "latticeweave/statevector.hpp"
#include "latticeweave/tableau.hpp"

namespace latticeweave {

/// Everything needed to (re)generate one trajectory ensemble.
struct EnsembleSpec {
    Lattice lattice;
    ConstructionSequence seq;
    NoiseModel model;
    TrajectoryPlan plan;
    bool postselect_plus = false;
    std::size_t max_qubits = StateVector::kDefaultMaxQubits;
};

/// Basis assignment for one global setting: X on one bipartition side,
/// Z on the other.
struct MeasurementSetting {
    std::map<int, Pauli> basis;
};

MeasurementSetting setting_x_on_a(const Bipartition& bp);
MeasurementSetting setting_x_on_b(const Bipartition& bp);

struct SampledEstimate {
    double value = 0.0;
    double se = 0.0;
    long shots = 0;
};

struct FidelityReport {
    double p_a = 0.0, p_a_se = 0.0;
    double p_b = 0.0, p_b_se = 0.0;
    double bound = 0.0, bound_se = 0.0;
    std::optional<double> exact;       // <P_M> over the full region interior
    std::optional<double> exact_se;
    bool gme = false;
};

struct WitnessEntry {
    int i = 0, j = 0;
    double w = 0.0;
    double se = 0.0;
};

struct WitnessMap {
    std::vector<WitnessEntry> entries;  // edge order (min, max) ascending
};

/// Throws when m has sites on both sides of the bipartition.
void require_one_sided(const std::set<int>& m, const Bipartition& bp);

/// <prod_{i in m} (1 + S_i)/2> by sequential projector application.
/// Exact for any m, mixed sides allowed (the measurement-side constraint
/// belongs to the sampled path).
double projector_expectation_exact(const StateVector& state, const std::set<int>& m,
                                   const Graph& graph);

/// Subset-expansion form 2^{-|m|} sum_{T subseteq m} <prod S_i>, |m| <= 20.
double projector_expectation_subsets(const StateVector& state, const std::set<int>& m,
                                     const Graph& graph);
double projector_expectation_tableau(const Tableau& tab, const std::set<int>& m,
                                     const Graph& graph);

/// Shot-sampled estimate from the single global setting covering m
/// (X on m's side, Z opposite). Per shot the value is 0 or 1.
SampledEstimate projector_expectation_sampled(const StateVector& state,
                                              const std::set<int>& m, const Graph& graph,
                                              const Bipartition& bp, long shots,
                                              Rng& rng);
/// Ensemble version; shots are spread round-robin over trajectories.
SampledEstimate projector_expectation_sampled(const EnsembleSpec& spec,
                                              const std::set<int>& m, const Graph& graph,
                                              const Bipartition& bp, long shots);

double fidelity_bound(double p_a, double p_b);
bool gme_check(double bound);  // strict: bound > 1/2

/// Trajectory-averaged |<G|psi>|^2.
ObservableStats exact_graph_fidelity(const EnsembleSpec& spec, const Graph& graph);

double pairwise_witness_state(const StateVector& state, int i, int j, const Graph& graph);

/// w_ij = <S_i> + <S_j> - 1 for each requested edge, trajectory averaged.
WitnessMap witness_map(const EnsembleSpec& spec, const Graph& graph,
                       const std::vector<std::pair<int, int>>& edges);

/// Bound and exact <P_M> for one region, M = region interior split across
/// the bipartition. Border sites only enter through the stabilizers of
/// interior sites, matching the two-setting protocol.
FidelityReport local_fidelity(const EnsembleSpec& spec, const LocalRegion& region,
                              const Graph& graph, const Bipartition& bp,
                              bool with_exact = true);

std::string fidelity_report_json(const FidelityReport& report);
std::string witness_map_csv(const WitnessMap& map);

}  // namespace latticeweave

#endif
