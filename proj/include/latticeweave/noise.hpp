#ifndef LATTICEWEAVE_NOISE_HPP
#define LATTICEWEAVE_NOISE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "latticeweave/lattice.hpp"
#include "latticeweave/statevector.hpp"

namespace latticeweave {

enum class NoiseKind { None, Dephasing, IsingCZ };
enum class NoiseInsertion { AfterInit, PerCZGate };

std::string noise_kind_name(NoiseKind k);

/// One channel at a time; the two error models are never combined.
struct NoiseModel {
    NoiseKind kind = NoiseKind::None;
    double theta_prime = 0.0;
    NoiseInsertion insertion = NoiseInsertion::AfterInit;
    /// One angle per trajectory instead of fresh draws per site/gate.
    bool shared_theta = false;

    static NoiseModel none() { return {}; }
    static NoiseModel dephasing(double theta_prime, bool shared = false);
    static NoiseModel ising_cz(double theta_prime, bool shared = false);

    void validate() const;
};

struct TrajectoryPlan {
    int trajectories = 2000;
    std::uint64_t master_seed = 1;
};

/// splitmix64 output of (master_seed + (index+1) * golden-gamma); trajectory
/// t's stream depends only on (master_seed, t).
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

void apply_dephasing(StateVector& state, std::size_t site, double theta);
/// CZ followed by the residual Ising phase exp(i theta ZZ).
void noisy_cz(StateVector& state, std::size_t a, std::size_t b, double theta);

/// One noisy trajectory: init, dephasing rotations on every site (ascending
/// index), then the sequence gates with per-gate Ising phases when the
/// channel asks for them. Measurements draw from the same stream.
std::pair<StateVector, MeasurementRecord> run_trajectory(
    const Lattice& lat, const ConstructionSequence& seq, const NoiseModel& model,
    std::uint64_t seed, bool postselect_plus = false,
    std::size_t max_qubits = StateVector::kDefaultMaxQubits);

/// Runs all trajectories of a plan across a worker pool (LATTICEWEAVE_THREADS
/// env var, default hardware concurrency). fn may run concurrently; it is
/// called once per trajectory with the finished state and the trajectory's
/// random stream.
void for_each_trajectory(
    const Lattice& lat, const ConstructionSequence& seq, const NoiseModel& model,
    const TrajectoryPlan& plan,
    const std::function<void(int index, const StateVector& state, Rng& rng)>& fn,
    bool postselect_plus = false,
    std::size_t max_qubits = StateVector::kDefaultMaxQubits);

struct Observable {
    std::string name;
    std::function<double(const StateVector& state, Rng& rng)> eval;
};

struct ObservableStats {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation
    double se = 0.0;  // sd / sqrt(N), 0 when N < 2
};

struct EnsembleStats {
    int trajectories = 0;
    std::vector<std::string> names;  // evaluation order
    std::map<std::string, ObservableStats> stats;
    std::map<std::string, std::vector<double>> samples;  // per-trajectory values
};

/// Aggregation is a deterministic reduction in trajectory-index order.
EnsembleStats run_monte_carlo(const Lattice& lat, const ConstructionSequence& seq,
                              const NoiseModel& model, const TrajectoryPlan& plan,
                              const std::vector<Observable>& observables,
                              bool postselect_plus = false,
                              std::size_t max_qubits = StateVector::kDefaultMaxQubits);

}  // namespace latticeweave

#endif
