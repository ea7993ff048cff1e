#include "latticeweave/tableau.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

#include "latticeweave/graph.hpp"

namespace latticeweave {

namespace {

constexpr std::size_t kWordBits = 64;

inline std::size_t word_index(std::size_t q) { return q / kWordBits; }
inline std::uint64_t bit_mask(std::size_t q) { return std::uint64_t{1} << (q % kWordBits); }

}  // namespace

Tableau::Tableau(std::size_t n)
    : n_(n),
      words_((n + kWordBits - 1) / kWordBits),
      x_(2 * n * words_, 0),
      z_(2 * n * words_, 0),
      sign_(2 * n, 0) {
    if (n == 0) throw std::invalid_argument("empty tableau");
    for (std::size_t i = 0; i < n_; ++i) {
        x_[i * words_ + word_index(i)] |= bit_mask(i);            // destab X_i
        z_[(n_ + i) * words_ + word_index(i)] |= bit_mask(i);     // stab Z_i
    }
}

Tableau Tableau::from_init(const Lattice& lat, const InitPattern& init) {
    Tableau t(static_cast<std::size_t>(lat.n_sites()));
    for (int s = 0; s < lat.n_sites(); ++s)
        if (init.for_site(lat, s) == InitState::Plus) t.apply_h(static_cast<std::size_t>(s));
    return t;
}

bool Tableau::xbit(std::size_t row, std::size_t q) const {
    return (x_[row * words_ + word_index(q)] & bit_mask(q)) != 0;
}

bool Tableau::zbit(std::size_t row, std::size_t q) const {
    return (z_[row * words_ + word_index(q)] & bit_mask(q)) != 0;
}

void Tableau::apply_h(std::size_t q) {
    const std::size_t w = word_index(q);
    const std::uint64_t m = bit_mask(q);
    for (std::size_t row = 0; row < 2 * n_; ++row) {
        std::uint64_t& xw = x_[row * words_ + w];
        std::uint64_t& zw = z_[row * words_ + w];
        const bool xb = (xw & m) != 0;
        const bool zb = (zw & m) != 0;
        sign_[row] ^= static_cast<std::uint8_t>(xb && zb);
        if (xb != zb) {
            xw ^= m;
            zw ^= m;
        }
    }
}

void Tableau::apply_cz(std::size_t a, std::size_t b) {
    if (a == b) throw std::invalid_argument("cz needs two distinct qubits");
    const std::size_t wa = word_index(a), wb = word_index(b);
    const std::uint64_t ma = bit_mask(a), mb = bit_mask(b);
    for (std::size_t row = 0; row < 2 * n_; ++row) {
        std::uint64_t& xaw = x_[row * words_ + wa];
        std::uint64_t& xbw = x_[row * words_ + wb];
        std::uint64_t& zaw = z_[row * words_ + wa];
        std::uint64_t& zbw = z_[row * words_ + wb];
        const bool xa = (xaw & ma) != 0;
        const bool xb = (xbw & mb) != 0;
        const bool za = (zaw & ma) != 0;
        const bool zb = (zbw & mb) != 0;
        sign_[row] ^= static_cast<std::uint8_t>(xa && xb && (za != zb));
        if (xb) zaw ^= ma;
        if (xa) zbw ^= mb;
    }
}

void Tableau::pauli_masks(const PauliString& p, std::vector<std::uint64_t>& px,
                          std::vector<std::uint64_t>& pz) const {
    px.assign(words_, 0);
    pz.assign(words_, 0);
    for (const auto& [site, op] : p.factors) {
        if (site < 0 || static_cast<std::size_t>(site) >= n_)
            throw std::out_of_range("pauli operator acts outside the register");
        const std::size_t q = static_cast<std::size_t>(site);
        if (op == Pauli::X || op == Pauli::Y) px[word_index(q)] |= bit_mask(q);
        if (op == Pauli::Z || op == Pauli::Y) pz[word_index(q)] |= bit_mask(q);
    }
}

bool Tableau::row_anticommutes(std::size_t row,
                               const std::vector<std::uint64_t>& px,
                               const std::vector<std::uint64_t>& pz) const {
    const std::uint64_t* rx = &x_[row * words_];
    const std::uint64_t* rz = &z_[row * words_];
    int parity = 0;
    for (std::size_t w = 0; w < words_; ++w)
        parity ^= std::popcount((rx[w] & pz[w]) ^ (rz[w] & px[w])) & 1;
    return parity != 0;
}

void Tableau::apply_pauli(const PauliString& p) {
    if (!p.is_hermitian()) throw std::invalid_argument("non-Hermitian pauli operator");
    std::vector<std::uint64_t> px, pz;
    pauli_masks(p, px, pz);
    for (std::size_t row = 0; row < 2 * n_; ++row)
        if (row_anticommutes(row, px, pz)) sign_[row] ^= 1;
}

// row_h *= row_i, phase tracked mod 4 via the single-qubit product table:
// i-contributions come from (X,Y),(Y,Z),(Z,X) pairs, -i from the reverses.
void Tableau::row_mul(std::size_t h, std::size_t i) {
    std::uint64_t* xh = &x_[h * words_];
    std::uint64_t* zh = &z_[h * words_];
    const std::uint64_t* xi = &x_[i * words_];
    const std::uint64_t* zi = &z_[i * words_];
    long plus = 0, minus = 0;
    for (std::size_t w = 0; w < words_; ++w) {
        const std::uint64_t x1 = xh[w], z1 = zh[w], x2 = xi[w], z2 = zi[w];
        const std::uint64_t p = (x1 & ~z1 & x2 & z2) | (x1 & z1 & ~x2 & z2) |
                                (~x1 & z1 & x2 & ~z2);
        const std::uint64_t m = (x1 & z1 & x2 & ~z2) | (~x1 & z1 & x2 & z2) |
                                (x1 & ~z1 & ~x2 & z2);
        plus += std::popcount(p);
        minus += std::popcount(m);
        xh[w] ^= x2;
        zh[w] ^= z2;
    }
    const long exp = ((plus - minus) % 4 + 4 + 2 * (sign_[h] + sign_[i])) % 4;
    sign_[h] = static_cast<std::uint8_t>((exp >> 1) & 1);
}

int Tableau::measure_pauli(const PauliString& p, Rng& rng, std::optional<int> force,
                           bool* deterministic) {
    if (!p.is_hermitian()) throw std::invalid_argument("non-Hermitian observable");
    if (p.is_identity()) throw std::invalid_argument("identity observable");
    if (force && *force != 1 && *force != -1)
        throw std::invalid_argument("forced outcome must be +1 or -1");
    std::vector<std::uint64_t> px, pz;
    pauli_masks(p, px, pz);
    const std::uint8_t p_sign = (p.phase_exp == 2) ? 1 : 0;

    std::size_t pivot = 2 * n_;
    for (std::size_t row = n_; row < 2 * n_; ++row) {
        if (row_anticommutes(row, px, pz)) {
            pivot = row;
            break;
        }
    }

    if (pivot < 2 * n_) {
        for (std::size_t row = 0; row < 2 * n_; ++row)
            if (row != pivot && row_anticommutes(row, px, pz)) row_mul(row, pivot);
        const std::size_t d = pivot - n_;
        for (std::size_t w = 0; w < words_; ++w) {
            x_[d * words_ + w] = x_[pivot * words_ + w];
            z_[d * words_ + w] = z_[pivot * words_ + w];
            x_[pivot * words_ + w] = px[w];
            z_[pivot * words_ + w] = pz[w];
        }
        sign_[d] = sign_[pivot];
        const int outcome =
            force ? *force : ((rng() & 1) ? -1 : 1);
        sign_[pivot] = p_sign ^ static_cast<std::uint8_t>(outcome < 0);
        if (deterministic) *deterministic = false;
        return outcome;
    }

    // P commutes with every stabilizer: accumulate the matching group
    // element through the destabilizer pattern.
    std::vector<std::uint64_t> sx(words_, 0), sz(words_, 0);
    long plus = 0, minus = 0;
    std::uint8_t s_sign = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (!row_anticommutes(i, px, pz)) continue;
        const std::size_t row = n_ + i;
        const std::uint64_t* xi = &x_[row * words_];
        const std::uint64_t* zi = &z_[row * words_];
        for (std::size_t w = 0; w < words_; ++w) {
            const std::uint64_t x1 = sx[w], z1 = sz[w], x2 = xi[w], z2 = zi[w];
            plus += std::popcount((x1 & ~z1 & x2 & z2) | (x1 & z1 & ~x2 & z2) |
                                  (~x1 & z1 & x2 & ~z2));
            minus += std::popcount((x1 & z1 & x2 & ~z2) | (~x1 & z1 & x2 & z2) |
                                   (x1 & ~z1 & ~x2 & z2));
            sx[w] ^= x2;
            sz[w] ^= z2;
        }
        s_sign ^= sign_[row];
    }
    if (sx != px || sz != pz)
        throw std::logic_error("stabilizer group is not maximal");
    const long exp = (((plus - minus) % 4 + 4) % 4 + 2 * s_sign) % 4;
    if (exp & 1) throw std::logic_error("non-Hermitian accumulated stabilizer");
    const int outcome = (static_cast<std::uint8_t>(exp >> 1) == p_sign) ? 1 : -1;
    if (force && *force != outcome)
        throw std::runtime_error("post-selection conflicts with a deterministic outcome");
    if (deterministic) *deterministic = true;
    return outcome;
}

int Tableau::pauli_expectation(const PauliString& p) const {
    if (!p.is_hermitian()) throw std::invalid_argument("non-Hermitian observable");
    if (p.is_identity()) return 1;
    std::vector<std::uint64_t> px, pz;
    pauli_masks(p, px, pz);
    for (std::size_t row = n_; row < 2 * n_; ++row)
        if (row_anticommutes(row, px, pz)) return 0;
    Tableau copy = *this;
    Rng dummy(0);
    bool det = false;
    const int outcome = copy.measure_pauli(p, dummy, std::nullopt, &det);
    return outcome;
}

void Tableau::canonicalize() {
    auto swap_rows = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t w = 0; w < words_; ++w) {
            std::swap(x_[(n_ + a) * words_ + w], x_[(n_ + b) * words_ + w]);
            std::swap(z_[(n_ + a) * words_ + w], z_[(n_ + b) * words_ + w]);
            std::swap(x_[a * words_ + w], x_[b * words_ + w]);
            std::swap(z_[a * words_ + w], z_[b * words_ + w]);
        }
        std::swap(sign_[n_ + a], sign_[n_ + b]);
        std::swap(sign_[a], sign_[b]);
    };
    // S_a *= S_b needs D_b *= D_a to keep the basis symplectic.
    auto stab_mul = [&](std::size_t a, std::size_t b) {
        row_mul(n_ + a, n_ + b);
        row_mul(b, a);
    };

    std::size_t r = 0;
    for (std::size_t q = 0; q < n_ && r < n_; ++q) {
        std::size_t k = r;
        while (k < n_ && !xbit(n_ + k, q)) ++k;
        if (k == n_) continue;
        swap_rows(r, k);
        for (std::size_t j = 0; j < n_; ++j)
            if (j != r && xbit(n_ + j, q)) stab_mul(j, r);
        ++r;
    }
    for (std::size_t q = 0; q < n_ && r < n_; ++q) {
        std::size_t k = r;
        while (k < n_ && !zbit(n_ + k, q)) ++k;
        if (k == n_) continue;
        swap_rows(r, k);
        for (std::size_t j = 0; j < n_; ++j)
            if (j != r && zbit(n_ + j, q)) stab_mul(j, r);
        ++r;
    }
}

std::vector<PauliString> Tableau::stabilizer_generators() const {
    std::vector<PauliString> out;
    out.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t row = n_ + i;
        PauliString p;
        for (std::size_t q = 0; q < n_; ++q) {
            const bool xb = xbit(row, q);
            const bool zb = zbit(row, q);
            if (!xb && !zb) continue;
            p.set(static_cast<int>(q), xb ? (zb ? Pauli::Y : Pauli::X) : Pauli::Z);
        }
        if (sign_[row]) p.negate();
        out.push_back(std::move(p));
    }
    return out;
}

std::string Tableau::canonical_dump() const {
    Tableau copy = *this;
    copy.canonicalize();
    std::ostringstream out;
    for (std::size_t i = 0; i < copy.n_; ++i) {
        const std::size_t row = copy.n_ + i;
        out << (copy.sign_[row] ? '-' : '+');
        for (std::size_t q = 0; q < copy.n_; ++q) {
            const bool xb = copy.xbit(row, q);
            const bool zb = copy.zbit(row, q);
            out << (xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I'));
        }
        out << '\n';
    }
    return out.str();
}

bool Tableau::groups_equal(const Tableau& other) const {
    if (n_ != other.n_) return false;
    Tableau a = *this;
    Tableau b = other;
    a.canonicalize();
    b.canonicalize();
    for (std::size_t i = 0; i < n_; ++i) {
        if (a.sign_[n_ + i] != b.sign_[n_ + i]) return false;
        for (std::size_t w = 0; w < words_; ++w) {
            if (a.x_[(n_ + i) * words_ + w] != b.x_[(n_ + i) * words_ + w]) return false;
            if (a.z_[(n_ + i) * words_ + w] != b.z_[(n_ + i) * words_ + w]) return false;
        }
    }
    return true;
}

bool Tableau::check_symplectic() const {
    auto symp = [&](std::size_t r1, std::size_t r2) {
        int parity = 0;
        for (std::size_t w = 0; w < words_; ++w)
            parity ^= std::popcount((x_[r1 * words_ + w] & z_[r2 * words_ + w]) ^
                                    (z_[r1 * words_ + w] & x_[r2 * words_ + w])) &
                      1;
        return parity;
    };
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            if (symp(n_ + i, n_ + j) != 0) return false;
            if (symp(i, j) != 0) return false;
            if (symp(i, n_ + j) != (i == j ? 1 : 0)) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------

std::pair<Tableau, MeasurementRecord> run_sequence_clifford(
    const Lattice& lat, const ConstructionSequence& seq, Rng& rng,
    bool postselect_plus) {
    validate_sequence(seq);
    Tableau t = Tableau::from_init(lat, seq.init);
    MeasurementRecord rec;
    for (const auto& op : seq.ops) {
        if (const auto* cz = std::get_if<GlobalCZ>(&op)) {
            for (auto [a, b] : cz_pairs(lat, *cz))
                t.apply_cz(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        } else if (const auto* h = std::get_if<RowHadamard>(&op)) {
            for (int s : row_hadamard_sites(lat, *h)) t.apply_h(static_cast<std::size_t>(s));
        } else if (const auto* mx = std::get_if<GlobalMeasureX>(&op)) {
            for (int s = 0; s < lat.n_sites(); ++s) {
                if (lat.species_of(s) != mx->species) continue;
                const PauliString obs = PauliString::single(s, Pauli::X);
                bool det = false;
                const int outcome = t.measure_pauli(
                    obs, rng, postselect_plus ? std::optional<int>(1) : std::nullopt,
                    &det);
                rec.entries.push_back({s, obs, outcome, det});
            }
        }
    }
    return {std::move(t), std::move(rec)};
}

std::vector<PauliString> canonical_generator_set(std::vector<PauliString> gens, int n) {
    for (const auto& g : gens)
        if (!g.is_hermitian())
            throw std::invalid_argument("generators must carry +/-1 phases");
    auto has_x = [](const PauliString& g, int q) {
        const Pauli p = g.at(q);
        return p == Pauli::X || p == Pauli::Y;
    };
    auto has_z = [](const PauliString& g, int q) {
        const Pauli p = g.at(q);
        return p == Pauli::Z || p == Pauli::Y;
    };

    std::size_t r = 0;
    for (int q = 0; q < n && r < gens.size(); ++q) {
        std::size_t k = r;
        while (k < gens.size() && !has_x(gens[k], q)) ++k;
        if (k == gens.size()) continue;
        std::swap(gens[r], gens[k]);
        for (std::size_t j = 0; j < gens.size(); ++j)
            if (j != r && has_x(gens[j], q)) gens[j] *= gens[r];
        ++r;
    }
    for (int q = 0; q < n && r < gens.size(); ++q) {
        std::size_t k = r;
        while (k < gens.size() && !has_z(gens[k], q)) ++k;
        if (k == gens.size()) continue;
        std::swap(gens[r], gens[k]);
        for (std::size_t j = 0; j < gens.size(); ++j)
            if (j != r && has_z(gens[j], q)) gens[j] *= gens[r];
        ++r;
    }
    for (std::size_t j = r; j < gens.size(); ++j) {
        if (!gens[j].is_identity() || gens[j].phase_exp != 0)
            throw std::invalid_argument("generator list is inconsistent or dependent with sign");
    }
    gens.resize(r);
    return gens;
}

std::vector<PauliString> tracked_state_stabilizers(const Lattice& lat, const Graph& g) {
    std::vector<PauliString> gens;
    gens.reserve(lat.n_sites());
    for (int s = 0; s < lat.n_sites(); ++s) {
        if (g.has_vertex(s)) {
            PauliString p = PauliString::single(s, Pauli::X);
            for (int nb : g.neighbors(s)) p.set(nb, Pauli::Z);
            gens.push_back(std::move(p));
        } else {
            gens.push_back(PauliString::single(s, Pauli::Z));
        }
    }
    return gens;
}

}  // namespace latticeweave
