#ifndef LATTICEWEAVE_TABLEAU_HPP
#define LATTICEWEAVE_TABLEAU_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "latticeweave/lattice.hpp"
#include "latticeweave/pauli.hpp"

namespace latticeweave {

using Rng = std::mt19937_64;

struct MeasurementEntry {
    int site;             // -1 for multi-site operators
    PauliString observable;
    int outcome;          // +1 / -1
    bool deterministic;
};

struct MeasurementRecord {
    std::vector<MeasurementEntry> entries;
};

/// Binary-symplectic stabilizer tableau with sign bits, bit-packed in
/// 64-bit words. Rows 0..n-1 are destabilizers, n..2n-1 stabilizers.
class Tableau {
public:
    explicit Tableau(std::size_t n);  // |0...0>
    static Tableau from_init(const Lattice& lat, const InitPattern& init);

    std::size_t n() const { return n_; }

    void apply_h(std::size_t q);
    void apply_cz(std::size_t a, std::size_t b);
    void apply_pauli(const PauliString& p);

    /// Measures a Hermitian +/-1-phase Pauli operator. Returns the outcome.
    /// force (+1/-1) post-selects the random branch; forcing against a
    /// deterministic outcome throws.
    int measure_pauli(const PauliString& p, Rng& rng,
                      std::optional<int> force = std::nullopt,
                      bool* deterministic = nullptr);

    /// +1 / -1 if +/-P is in the stabilizer group, 0 otherwise.
    int pauli_expectation(const PauliString& p) const;

    /// Reduces the stabilizer rows to the unique canonical basis
    /// (GF(2) RREF, X pass then Z pass, signs tracked).
    void canonicalize();

    std::vector<PauliString> stabilizer_generators() const;
    std::string canonical_dump() const;
    bool groups_equal(const Tableau& other) const;

    /// Debug invariant: rows form a symplectic basis. O(n^2) words.
    bool check_symplectic() const;

private:
    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> x_;   // 2n rows * words
    std::vector<std::uint64_t> z_;
    std::vector<std::uint8_t> sign_; // 2n, sign = (-1)^sign_[row]

    bool xbit(std::size_t row, std::size_t q) const;
    bool zbit(std::size_t row, std::size_t q) const;
    void row_mul(std::size_t h, std::size_t i);  // row_h *= row_i
    bool row_anticommutes(std::size_t row, const std::vector<std::uint64_t>& px,
                          const std::vector<std::uint64_t>& pz) const;
    void pauli_masks(const PauliString& p, std::vector<std::uint64_t>& px,
                     std::vector<std::uint64_t>& pz) const;
    friend class TableauScratch;
};

/// Runs a full construction sequence. GlobalMeasureX measures site by site
/// in ascending index order; postselect_plus forces every outcome to +1.
std::pair<Tableau, MeasurementRecord> run_sequence_clifford(
    const Lattice& lat, const ConstructionSequence& seq, Rng& rng,
    bool postselect_plus = false);

/// Unique canonical basis of the group generated by `gens` on n qubits.
/// Generators must be Hermitian with +/-1 phases and pairwise commuting.
std::vector<PauliString> canonical_generator_set(std::vector<PauliString> gens, int n);

/// Graph-tracker state as a stabilizer generator list over the whole
/// lattice: graph stabilizers on Plus vertices, +Z on the remaining sites.
class Graph;
std::vector<PauliString> tracked_state_stabilizers(const Lattice& lat, const Graph& g);

}  // namespace latticeweave

#endif
