#include "latticeweave/noise.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace latticeweave {

std::string noise_kind_name(NoiseKind k) {
    switch (k) {
        case NoiseKind::None: return "none";
        case NoiseKind::Dephasing: return "dephasing";
        case NoiseKind::IsingCZ: return "ising_cz";
    }
    throw std::logic_error("unknown noise kind");
}

NoiseModel NoiseModel::dephasing(double theta_prime, bool shared) {
    NoiseModel m;
    m.kind = NoiseKind::Dephasing;
    m.theta_prime = theta_prime;
    m.insertion = NoiseInsertion::AfterInit;
    m.shared_theta = shared;
    m.validate();
    return m;
}

NoiseModel NoiseModel::ising_cz(double theta_prime, bool shared) {
    NoiseModel m;
    m.kind = NoiseKind::IsingCZ;
    m.theta_prime = theta_prime;
    m.insertion = NoiseInsertion::PerCZGate;
    m.shared_theta = shared;
    m.validate();
    return m;
}

void NoiseModel::validate() const {
    if (!(theta_prime >= 0.0) || !std::isfinite(theta_prime))
        throw std::invalid_argument("theta_prime must be finite and nonnegative");
    if (kind == NoiseKind::IsingCZ && insertion != NoiseInsertion::PerCZGate)
        throw std::invalid_argument("the Ising CZ channel inserts per gate");
    if (kind == NoiseKind::Dephasing && insertion != NoiseInsertion::AfterInit)
        throw std::invalid_argument("the dephasing channel inserts after init");
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t z = master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void apply_dephasing(StateVector& state, std::size_t site, double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("non-finite angle");
    state.apply_z_rotation(site, theta);
}

void noisy_cz(StateVector& state, std::size_t a, std::size_t b, double theta) {
    state.apply_cz(a, b);
    state.apply_zz_phase(a, b, theta);
}

std::pair<StateVector, MeasurementRecord> run_trajectory(
    const Lattice& lat, const ConstructionSequence& seq, const NoiseModel& model,
    std::uint64_t seed, bool postselect_plus, std::size_t max_qubits) {
    model.validate();
    validate_sequence(seq);
    Rng rng(seed);
    std::uniform_real_distribution<double> angle(-model.theta_prime, model.theta_prime);
    const double shared = (model.shared_theta && model.kind != NoiseKind::None &&
                           model.theta_prime > 0.0)
                              ? angle(rng)
                              : 0.0;
    auto draw = [&]() {
        if (model.theta_prime == 0.0) return 0.0;
        return model.shared_theta ? shared : angle(rng);
    };

    StateVector sv = StateVector::from_init(lat, seq.init, max_qubits);
    if (model.kind == NoiseKind::Dephasing) {
        std::vector<double> thetas(static_cast<std::size_t>(lat.n_sites()));
        for (double& th : thetas) th = draw();
        sv.apply_z_rotation_layer(thetas);
    }

    MeasurementRecord rec;
    for (const auto& op : seq.ops) {
        if (const auto* cz = std::get_if<GlobalCZ>(&op)) {
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            for (auto [a, b] : cz_pairs(lat, *cz))
                pairs.emplace_back(static_cast<std::size_t>(a),
                                   static_cast<std::size_t>(b));
            if (model.kind == NoiseKind::IsingCZ) {
                std::vector<double> thetas(pairs.size());
                for (double& th : thetas) th = draw();
                sv.apply_cz_layer(pairs, &thetas);
            } else {
                sv.apply_cz_layer(pairs);
            }
        } else if (const auto* h = std::get_if<RowHadamard>(&op)) {
            for (int s : row_hadamard_sites(lat, *h)) sv.apply_h(static_cast<std::size_t>(s));
        } else if (const auto* mx = std::get_if<GlobalMeasureX>(&op)) {
            for (int s = 0; s < lat.n_sites(); ++s) {
                if (lat.species_of(s) != mx->species) continue;
                const PauliString obs = PauliString::single(s, Pauli::X);
                bool det = false;
                const int outcome = sv.measure_pauli(
                    obs, rng, postselect_plus ? std::optional<int>(1) : std::nullopt,
                    &det);
                rec.entries.push_back({s, obs, outcome, det});
            }
        }
    }
    return {std::move(sv), std::move(rec)};
}

namespace {

unsigned worker_count(int trajectories) {
    unsigned n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("LATTICEWEAVE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    if (n == 0) n = 1;
    if (trajectories > 0 && n > static_cast<unsigned>(trajectories))
        n = static_cast<unsigned>(trajectories);
    return n;
}

}  // namespace

void for_each_trajectory(
    const Lattice& lat, const ConstructionSequence& seq, const NoiseModel& model,
    const TrajectoryPlan& plan,
    const std::function<void(int, const StateVector&, Rng&)>& fn,
    bool postselect_plus, std::size_t max_qubits) {
    if (plan.trajectories <= 0) throw std::invalid_argument("need at least one trajectory");
    const unsigned workers = worker_count(plan.trajectories);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto body = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= plan.trajectories || failed.load()) return;
            try {
                auto [state, rec] = run_trajectory(
                    lat, seq, model,
                    trajectory_seed(plan.master_seed, static_cast<std::uint64_t>(t)),
                    postselect_plus, max_qubits);
                (void)rec;
                // Observer stream is keyed off the same (seed, index) pair
                // but kept distinct from the gate/measurement stream.
                Rng obs_rng(trajectory_seed(plan.master_seed ^ 0xA5A5A5A5A5A5A5A5ULL,
                                            static_cast<std::uint64_t>(t)));
                fn(t, state, obs_rng);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };

    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    if (failed.load() && first_error) std::rethrow_exception(first_error);
}

EnsembleStats run_monte_carlo(const Lattice& lat, const ConstructionSequence& seq,
                              const NoiseModel& model, const TrajectoryPlan& plan,
                              const std::vector<Observable>& observables,
                              bool postselect_plus, std::size_t max_qubits) {
    if (observables.empty()) throw std::invalid_argument("empty observable list");
    const std::size_t n_obs = observables.size();
    std::vector<std::vector<double>> values(
        static_cast<std::size_t>(plan.trajectories), std::vector<double>(n_obs, 0.0));

    for_each_trajectory(
        lat, seq, model, plan,
        [&](int t, const StateVector& state, Rng& rng) {
            for (std::size_t k = 0; k < n_obs; ++k)
                values[static_cast<std::size_t>(t)][k] = observables[k].eval(state, rng);
        },
        postselect_plus, max_qubits);

    EnsembleStats out;
    out.trajectories = plan.trajectories;
    const double n = static_cast<double>(plan.trajectories);
    for (std::size_t k = 0; k < n_obs; ++k) {
        const std::string& name = observables[k].name;
        out.names.push_back(name);
        std::vector<double> column(static_cast<std::size_t>(plan.trajectories));
        double sum = 0.0;
        for (int t = 0; t < plan.trajectories; ++t) {
            column[static_cast<std::size_t>(t)] = values[static_cast<std::size_t>(t)][k];
            sum += column[static_cast<std::size_t>(t)];
        }
        ObservableStats st;
        st.mean = sum / n;
        if (plan.trajectories >= 2) {
            double ss = 0.0;
            for (double v : column) ss += (v - st.mean) * (v - st.mean);
            st.sd = std::sqrt(ss / (n - 1.0));
            st.se = st.sd / std::sqrt(n);
        }
        out.stats[name] = st;
        out.samples[name] = std::move(column);
    }
    return out;
}

}  // namespace latticeweave
