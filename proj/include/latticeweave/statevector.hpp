#ifndef LATTICEWEAVE_STATEVECTOR_HPP
#define LATTICEWEAVE_STATEVECTOR_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "latticeweave/graph.hpp"
#include "latticeweave/lattice.hpp"
#include "latticeweave/pauli.hpp"
#include "latticeweave/tableau.hpp"

namespace latticeweave {

using cplx = std::complex<double>;

struct Unitary2 {
    cplx m00, m01, m10, m11;
};

struct ResourceCapError : std::runtime_error {
    explicit ResourceCapError(const std::string& what) : std::runtime_error(what) {}
};

/// (-i)^k H^(k-1): k even applies a Hadamard with an extra (-i)^k phase,
/// k odd is the identity up to phase.
Unitary2 pseudo_hadamard(int k);

/// Pulse-sequence form Rz(pi/4) Ry(k*pi) Rz(pi/4), kept as a diagnostic.
Unitary2 pulse_pseudo_hadamard(int k);

/// Dense amplitude vector over n qubits, site 0 = least significant bit.
class StateVector {
public:
    explicit StateVector(std::size_t n, std::size_t max_qubits = kDefaultMaxQubits);
    static constexpr std::size_t kDefaultMaxQubits = 22;

    static StateVector from_init(const Lattice& lat, const InitPattern& init,
                                 std::size_t max_qubits = kDefaultMaxQubits);
    /// |+> and CZ on graph vertices, |0> on the remaining lattice sites.
    static StateVector ideal_graph_state(std::size_t n_sites, const Graph& g,
                                         std::size_t max_qubits = kDefaultMaxQubits);

    std::size_t n() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    cplx amplitude(std::size_t idx) const { return amps_[idx]; }
    double norm() const;

    void apply_1q(std::size_t q, const Unitary2& u);
    void apply_h(std::size_t q);
    void apply_cz(std::size_t a, std::size_t b);
    /// exp(i theta Z_a Z_b)
    void apply_zz_phase(std::size_t a, std::size_t b, double theta);
    /// exp(-i theta Z_q)
    void apply_z_rotation(std::size_t q, double theta);
    /// One fused sweep of exp(-i thetas[q] Z_q) over every qubit;
    /// thetas must have one entry per qubit (0 skips the site).
    void apply_z_rotation_layer(const std::vector<double>& thetas);
    /// One fused sweep applying CZ to every listed pair; when zz_thetas is
    /// given (one angle per pair) each CZ is followed by exp(i theta Z Z).
    void apply_cz_layer(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                        const std::vector<double>* zz_thetas = nullptr);
    /// |psi> -> P|psi>
    void apply_pauli(const PauliString& p);

    double pauli_expectation(const PauliString& p) const;

    /// Projective measurement; force post-selects, throwing if the forced
    /// branch has zero probability.
    int measure_pauli(const PauliString& p, Rng& rng,
                      std::optional<int> force = std::nullopt,
                      bool* deterministic = nullptr);

    /// Applies (1 + outcome*P)/2 without renormalising; returns the
    /// resulting squared norm (the branch probability when the input
    /// state was normalised).
    double project_pauli(const PauliString& p, int outcome);

    void normalize();

    double fidelity_to(const StateVector& other) const;

    /// Z-basis sample via the cumulative distribution.
    std::size_t sample_bitstring(Rng& rng) const;

private:
    std::size_t n_;
    std::vector<cplx> amps_;

    void masks_of(const PauliString& p, std::size_t& mx, std::size_t& mz,
                  int& y_count) const;
};

std::pair<StateVector, MeasurementRecord> run_sequence_statevector(
    const Lattice& lat, const ConstructionSequence& seq, Rng& rng,
    bool postselect_plus = false,
    std::size_t max_qubits = StateVector::kDefaultMaxQubits);

}  // namespace latticeweave

#endif
