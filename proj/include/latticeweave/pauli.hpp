#ifndef LATTICEWEAVE_PAULI_HPP
#define LATTICEWEAVE_PAULI_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <string>

namespace latticeweave {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);

/// Sparse Pauli operator: site -> non-identity factor, with a phase i^k.
/// Identity entries are never stored. Multiplication tracks the phase
/// through the single-site Pauli algebra.
struct PauliString {
    std::map<int, Pauli> factors;
    std::uint8_t phase_exp = 0;  // operator = i^phase_exp * product of factors

    PauliString() = default;

    static PauliString identity() { return {}; }
    static PauliString single(int site, Pauli p);

    bool is_identity() const { return factors.empty(); }
    bool is_hermitian() const { return phase_exp % 2 == 0; }
    int weight() const { return static_cast<int>(factors.size()); }
    Pauli at(int site) const;
    std::complex<double> phase() const;

    void set(int site, Pauli p);  // p == I erases
    void negate() { phase_exp = (phase_exp + 2) % 4; }

    PauliString& operator*=(const PauliString& other);
    friend PauliString operator*(PauliString a, const PauliString& b) {
        a *= b;
        return a;
    }

    bool commutes_with(const PauliString& other) const;

    bool operator==(const PauliString& other) const = default;
    std::string str() const;
};

}  // namespace latticeweave

#endif
