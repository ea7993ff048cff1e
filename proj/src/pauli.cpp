#include "latticeweave/pauli.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace latticeweave {

char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::I: return 'I';
        case Pauli::X: return 'X';
        case Pauli::Y: return 'Y';
        case Pauli::Z: return 'Z';
    }
    return '?';
}

PauliString PauliString::single(int site, Pauli p) {
    PauliString s;
    if (p != Pauli::I) s.factors[site] = p;
    return s;
}

Pauli PauliString::at(int site) const {
    auto it = factors.find(site);
    return it == factors.end() ? Pauli::I : it->second;
}

std::complex<double> PauliString::phase() const {
    static const std::array<std::complex<double>, 4> tab = {
        std::complex<double>{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return tab[phase_exp % 4];
}

void PauliString::set(int site, Pauli p) {
    if (p == Pauli::I)
        factors.erase(site);
    else
        factors[site] = p;
}

namespace {

// product[a][b] = {i-power, result} for single-site a*b
struct SingleProd {
    std::uint8_t ipow;
    Pauli result;
};

constexpr SingleProd kProd[4][4] = {
    // I            X            Y            Z
    {{0, Pauli::I}, {0, Pauli::X}, {0, Pauli::Y}, {0, Pauli::Z}},  // I*
    {{0, Pauli::X}, {0, Pauli::I}, {1, Pauli::Z}, {3, Pauli::Y}},  // X*
    {{0, Pauli::Y}, {3, Pauli::Z}, {0, Pauli::I}, {1, Pauli::X}},  // Y*
    {{0, Pauli::Z}, {1, Pauli::Y}, {3, Pauli::X}, {0, Pauli::I}},  // Z*
};

}  // namespace

PauliString& PauliString::operator*=(const PauliString& other) {
    phase_exp = (phase_exp + other.phase_exp) % 4;
    for (const auto& [site, p] : other.factors) {
        Pauli mine = at(site);
        const SingleProd& sp = kProd[static_cast<int>(mine)][static_cast<int>(p)];
        phase_exp = (phase_exp + sp.ipow) % 4;
        set(site, sp.result);
    }
    return *this;
}

bool PauliString::commutes_with(const PauliString& other) const {
    int anti = 0;
    for (const auto& [site, p] : factors) {
        Pauli q = other.at(site);
        if (q != Pauli::I && q != p) anti ^= 1;
    }
    return anti == 0;
}

std::string PauliString::str() const {
    std::ostringstream out;
    switch (phase_exp % 4) {
        case 0: out << "+"; break;
        case 1: out << "+i"; break;
        case 2: out << "-"; break;
        case 3: out << "-i"; break;
    }
    if (factors.empty()) {
        out << "I";
    } else {
        bool first = true;
        for (const auto& [site, p] : factors) {
            if (!first) out << " ";
            out << pauli_char(p) << site;
            first = false;
        }
    }
    return out.str();
}

}  // namespace latticeweave
