#include "latticeweave/verification.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace latticeweave {

namespace {

PauliString stabilizer_of(const Graph& graph, int v) {
    if (!graph.has_vertex(v)) throw std::invalid_argument("not a graph vertex");
    PauliString s = PauliString::single(v, Pauli::X);
    for (int nb : graph.neighbors(v)) s.set(nb, Pauli::Z);
    return s;
}

constexpr int kSubsetCap = 20;

std::vector<int> checked_region(const std::set<int>& m, const Graph& graph) {
    std::vector<int> sites;
    sites.reserve(m.size());
    for (int v : m) {
        if (!graph.has_vertex(v))
            throw std::invalid_argument("region site is not a graph vertex");
        sites.push_back(v);
    }
    return sites;
}

}  // namespace

MeasurementSetting setting_x_on_a(const Bipartition& bp) {
    MeasurementSetting s;
    for (int v : bp.a) s.basis[v] = Pauli::X;
    for (int v : bp.b) s.basis[v] = Pauli::Z;
    return s;
}

MeasurementSetting setting_x_on_b(const Bipartition& bp) {
    MeasurementSetting s;
    for (int v : bp.a) s.basis[v] = Pauli::Z;
    for (int v : bp.b) s.basis[v] = Pauli::X;
    return s;
}

void require_one_sided(const std::set<int>& m, const Bipartition& bp) {
    bool any_a = false, any_b = false;
    for (int v : m) {
        if (bp.a.count(v)) any_a = true;
        else if (bp.b.count(v)) any_b = true;
        else throw std::invalid_argument("region site is outside the bipartition");
    }
    if (any_a && any_b)
        throw std::invalid_argument("region spans both bipartition sides");
}

double projector_expectation_exact(const StateVector& state, const std::set<int>& m,
                                   const Graph& graph) {
    const auto sites = checked_region(m, graph);
    if (sites.empty()) return 1.0;
    StateVector copy = state;
    double w = 1.0;
    for (int v : sites) w = copy.project_pauli(stabilizer_of(graph, v), 1);
    return std::clamp(w, 0.0, 1.0);
}

namespace {

template <typename ExpectationFn>
double projector_by_subsets(const std::set<int>& m, const Graph& graph,
                            ExpectationFn&& expectation) {
    std::vector<int> sites(m.begin(), m.end());
    if (static_cast<int>(sites.size()) > kSubsetCap)
        throw std::invalid_argument("region exceeds the subset-expansion cap");
    const std::size_t count = std::size_t{1} << sites.size();
    double acc = 0.0;
    for (std::size_t mask = 0; mask < count; ++mask) {
        PauliString prod;
        for (std::size_t k = 0; k < sites.size(); ++k)
            if (mask & (std::size_t{1} << k)) prod *= stabilizer_of(graph, sites[k]);
        acc += expectation(prod);
    }
    return acc / static_cast<double>(count);
}

}  // namespace

double projector_expectation_subsets(const StateVector& state, const std::set<int>& m,
                                     const Graph& graph) {
    checked_region(m, graph);
    return projector_by_subsets(m, graph, [&](const PauliString& p) {
        return p.is_identity() ? 1.0 : state.pauli_expectation(p);
    });
}

double projector_expectation_tableau(const Tableau& tab, const std::set<int>& m,
                                     const Graph& graph) {
    checked_region(m, graph);
    return projector_by_subsets(m, graph, [&](const PauliString& p) {
        return p.is_identity() ? 1.0 : static_cast<double>(tab.pauli_expectation(p));
    });
}

namespace {

// Rotates X-side sites into the Z basis and evaluates one shot of the
// per-site parity products.
struct SettingSampler {
    StateVector rotated;
    std::vector<std::size_t> parity_masks;  // one mask per region site

    SettingSampler(const StateVector& state, const std::set<int>& m, const Graph& graph,
                   const Bipartition& bp)
        : rotated(state) {
        require_one_sided(m, bp);
        bool m_in_a = true;
        for (int v : m)
            if (bp.b.count(v)) m_in_a = false;
        const std::set<int>& x_side = m_in_a ? bp.a : bp.b;
        for (int v : x_side) rotated.apply_h(static_cast<std::size_t>(v));
        for (int v : m) {
            std::size_t mask = std::size_t{1} << static_cast<std::size_t>(v);
            for (int nb : graph.neighbors(v))
                mask |= std::size_t{1} << static_cast<std::size_t>(nb);
            parity_masks.push_back(mask);
        }
    }

    double shot(Rng& rng) const {
        const std::size_t idx = rotated.sample_bitstring(rng);
        for (std::size_t mask : parity_masks)
            if (std::popcount(idx & mask) & 1) return 0.0;
        return 1.0;
    }
};

}  // namespace

SampledEstimate projector_expectation_sampled(const StateVector& state,
                                              const std::set<int>& m, const Graph& graph,
                                              const Bipartition& bp, long shots,
                                              Rng& rng) {
    if (shots < 1) throw std::invalid_argument("need at least one shot");
    checked_region(m, graph);
    SettingSampler sampler(state, m, graph, bp);
    double sum = 0.0;
    for (long s = 0; s < shots; ++s) sum += sampler.shot(rng);
    SampledEstimate est;
    est.shots = shots;
    est.value = sum / static_cast<double>(shots);
    est.se = std::sqrt(std::max(est.value * (1.0 - est.value), 0.0) /
                       static_cast<double>(shots));
    return est;
}

SampledEstimate projector_expectation_sampled(const EnsembleSpec& spec,
                                              const std::set<int>& m, const Graph& graph,
                                              const Bipartition& bp, long shots) {
    if (shots < 1) throw std::invalid_argument("need at least one shot");
    checked_region(m, graph);
    const int n_traj = spec.plan.trajectories;
    const long base = shots / n_traj;
    const long rem = shots % n_traj;
    std::vector<double> sums(static_cast<std::size_t>(n_traj), 0.0);
    for_each_trajectory(
        spec.lattice, spec.seq, spec.model, spec.plan,
        [&](int t, const StateVector& state, Rng& rng) {
            const long st = base + (t < rem ? 1 : 0);
            if (st == 0) return;
            SettingSampler sampler(state, m, graph, bp);
            double s = 0.0;
            for (long k = 0; k < st; ++k) s += sampler.shot(rng);
            sums[static_cast<std::size_t>(t)] = s;
        },
        spec.postselect_plus, spec.max_qubits);
    double total = 0.0;
    for (double s : sums) total += s;
    SampledEstimate est;
    est.shots = shots;
    est.value = total / static_cast<double>(shots);
    est.se = std::sqrt(std::max(est.value * (1.0 - est.value), 0.0) /
                       static_cast<double>(shots));
    return est;
}

double fidelity_bound(double p_a, double p_b) {
    if (!(p_a >= 0.0 && p_a <= 1.0 && p_b >= 0.0 && p_b <= 1.0))
        throw std::invalid_argument("projector expectations must lie in [0, 1]");
    return p_a + p_b - 1.0;
}

bool gme_check(double bound) { return bound > 0.5; }

ObservableStats exact_graph_fidelity(const EnsembleSpec& spec, const Graph& graph) {
    const auto ideal = StateVector::ideal_graph_state(
        static_cast<std::size_t>(spec.lattice.n_sites()), graph, spec.max_qubits);
    const auto stats = run_monte_carlo(
        spec.lattice, spec.seq, spec.model, spec.plan,
        {{"fidelity",
          [&](const StateVector& s, Rng&) { return s.fidelity_to(ideal); }}},
        spec.postselect_plus, spec.max_qubits);
    return stats.stats.at("fidelity");
}

double pairwise_witness_state(const StateVector& state, int i, int j, const Graph& graph) {
    if (!graph.has_edge(i, j)) throw std::invalid_argument("not a graph edge");
    return state.pauli_expectation(stabilizer_of(graph, i)) +
           state.pauli_expectation(stabilizer_of(graph, j)) - 1.0;
}

namespace {

ObservableStats stats_of(const std::vector<double>& samples) {
    ObservableStats st;
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double v : samples) sum += v;
    st.mean = sum / n;
    if (samples.size() >= 2) {
        double ss = 0.0;
        for (double v : samples) ss += (v - st.mean) * (v - st.mean);
        st.sd = std::sqrt(ss / (n - 1.0));
        st.se = st.sd / std::sqrt(n);
    }
    return st;
}

}  // namespace

WitnessMap witness_map(const EnsembleSpec& spec, const Graph& graph,
                       const std::vector<std::pair<int, int>>& edges) {
    // evaluate each distinct site stabilizer once per trajectory, then form
    // the per-edge witnesses from the shared values
    std::vector<int> sites;
    for (const auto& [i, j] : edges) {
        if (!graph.has_edge(i, j)) throw std::invalid_argument("not a graph edge");
        sites.push_back(i);
        sites.push_back(j);
    }
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    std::vector<PauliString> gens;
    gens.reserve(sites.size());
    for (int v : sites) gens.push_back(stabilizer_of(graph, v));
    auto slot = [&](int v) {
        return static_cast<std::size_t>(
            std::lower_bound(sites.begin(), sites.end(), v) - sites.begin());
    };

    const std::size_t n_traj = static_cast<std::size_t>(spec.plan.trajectories);
    std::vector<std::vector<double>> per_edge(
        edges.size(), std::vector<double>(n_traj, 0.0));
    for_each_trajectory(
        spec.lattice, spec.seq, spec.model, spec.plan,
        [&](int t, const StateVector& state, Rng&) {
            std::vector<double> ev(sites.size());
            for (std::size_t k = 0; k < gens.size(); ++k)
                ev[k] = state.pauli_expectation(gens[k]);
            for (std::size_t k = 0; k < edges.size(); ++k)
                per_edge[k][static_cast<std::size_t>(t)] =
                    ev[slot(edges[k].first)] + ev[slot(edges[k].second)] - 1.0;
        },
        spec.postselect_plus, spec.max_qubits);

    WitnessMap out;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto st = stats_of(per_edge[k]);
        out.entries.push_back({edges[k].first, edges[k].second, st.mean, st.se});
    }
    return out;
}

FidelityReport local_fidelity(const EnsembleSpec& spec, const LocalRegion& region,
                              const Graph& graph, const Bipartition& bp,
                              bool with_exact) {
    const LocalRegion closure = make_region(graph, region.interior);
    if (closure.border != region.border)
        throw std::invalid_argument("region border is not the neighbour closure");
    std::set<int> m_a, m_b;
    for (int v : region.interior) {
        if (bp.a.count(v)) m_a.insert(v);
        else if (bp.b.count(v)) m_b.insert(v);
        else throw std::invalid_argument("interior site is outside the bipartition");
    }

    std::vector<PauliString> gens_a, gens_b;
    for (int v : m_a) gens_a.push_back(stabilizer_of(graph, v));
    for (int v : m_b) gens_b.push_back(stabilizer_of(graph, v));

    const std::size_t n_traj = static_cast<std::size_t>(spec.plan.trajectories);
    std::vector<double> sa(n_traj, 1.0), sb(n_traj, 1.0), sm(n_traj, 1.0);
    for_each_trajectory(
        spec.lattice, spec.seq, spec.model, spec.plan,
        [&](int t, const StateVector& state, Rng&) {
            // one scratch copy per thread, reused across trajectories; the
            // a-side projection continues into the full-interior one, since
            // the region projector factors as P_A * P_B
            thread_local std::optional<StateVector> scratch;
            if (!scratch || scratch->n() != state.n()) scratch = state;
            else *scratch = state;
            double w = 1.0;
            for (const auto& g : gens_a) w = scratch->project_pauli(g, 1);
            sa[static_cast<std::size_t>(t)] = std::clamp(w, 0.0, 1.0);
            if (with_exact) {
                for (const auto& g : gens_b) w = scratch->project_pauli(g, 1);
                sm[static_cast<std::size_t>(t)] = std::clamp(w, 0.0, 1.0);
            }
            *scratch = state;
            w = 1.0;
            for (const auto& g : gens_b) w = scratch->project_pauli(g, 1);
            sb[static_cast<std::size_t>(t)] = std::clamp(w, 0.0, 1.0);
        },
        spec.postselect_plus, spec.max_qubits);

    FidelityReport rep;
    const auto st_a = stats_of(sa);
    const auto st_b = stats_of(sb);
    rep.p_a = st_a.mean;
    rep.p_a_se = st_a.se;
    rep.p_b = st_b.mean;
    rep.p_b_se = st_b.se;
    rep.bound = fidelity_bound(std::clamp(rep.p_a, 0.0, 1.0), std::clamp(rep.p_b, 0.0, 1.0));

    if (n_traj >= 2) {
        std::vector<double> bt(n_traj);
        for (std::size_t t = 0; t < n_traj; ++t) bt[t] = sa[t] + sb[t] - 1.0;
        rep.bound_se = stats_of(bt).se;
    }
    if (with_exact) {
        const auto st_m = stats_of(sm);
        rep.exact = st_m.mean;
        rep.exact_se = st_m.se;
    }
    rep.gme = gme_check(rep.bound);
    return rep;
}

std::string fidelity_report_json(const FidelityReport& report) {
    nlohmann::json j;
    j["p_a"] = report.p_a;
    j["p_a_se"] = report.p_a_se;
    j["p_b"] = report.p_b;
    j["p_b_se"] = report.p_b_se;
    j["bound"] = report.bound;
    j["bound_se"] = report.bound_se;
    if (report.exact) {
        j["exact"] = *report.exact;
        j["exact_se"] = report.exact_se.value_or(0.0);
    }
    j["gme"] = report.gme;
    return j.dump(2) + "\n";
}

std::string witness_map_csv(const WitnessMap& map) {
    std::ostringstream out;
    out << "i,j,w,se\n";
    for (const auto& e : map.entries)
        out << e.i << "," << e.j << "," << e.w << "," << e.se << "\n";
    return out.str();
}

}  // namespace latticeweave
