#include "latticeweave/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace latticeweave {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

Unitary2 pseudo_hadamard(int k) {
    if (k < 1) throw std::invalid_argument("pulse count must be positive");
    const cplx ph = i_pow(-k);  // (-i)^k
    if (k % 2 == 1) return {ph, 0.0, 0.0, ph};
    const double s = 1.0 / std::sqrt(2.0);
    return {ph * s, ph * s, ph * s, -ph * s};
}

Unitary2 pulse_pseudo_hadamard(int k) {
    if (k < 1) throw std::invalid_argument("pulse count must be positive");
    const double a = std::numbers::pi / 4.0;
    const cplx em = std::exp(-kI * (a / 2.0));
    const cplx ep = std::exp(kI * (a / 2.0));
    const Unitary2 rz{em, 0.0, 0.0, ep};
    const double hy = k * std::numbers::pi / 2.0;
    const Unitary2 ry{std::cos(hy), -std::sin(hy), std::sin(hy), std::cos(hy)};
    auto mul = [](const Unitary2& l, const Unitary2& r) {
        return Unitary2{l.m00 * r.m00 + l.m01 * r.m10, l.m00 * r.m01 + l.m01 * r.m11,
                        l.m10 * r.m00 + l.m11 * r.m10, l.m10 * r.m01 + l.m11 * r.m11};
    };
    return mul(mul(rz, ry), rz);
}

StateVector::StateVector(std::size_t n, std::size_t max_qubits) : n_(n) {
    if (n == 0) throw std::invalid_argument("empty register");
    if (n > max_qubits)
        throw ResourceCapError("statevector register exceeds the qubit cap (" +
                                 std::to_string(n) + " > " + std::to_string(max_qubits) +
                                 ")");
    amps_.assign(std::size_t{1} << n, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::from_init(const Lattice& lat, const InitPattern& init,
                                   std::size_t max_qubits) {
    StateVector sv(static_cast<std::size_t>(lat.n_sites()), max_qubits);
    // uniform superposition over the |+> sites, |0> elsewhere, written
    // directly instead of one Hadamard sweep per site
    std::size_t plus_mask = 0;
    for (int s = 0; s < lat.n_sites(); ++s)
        if (init.for_site(lat, s) == InitState::Plus)
            plus_mask |= std::size_t{1} << static_cast<std::size_t>(s);
    const double c =
        1.0 / std::sqrt(static_cast<double>(std::size_t{1} << std::popcount(plus_mask)));
    sv.amps_[0] = 0.0;
    for (std::size_t sub = plus_mask;; sub = (sub - 1) & plus_mask) {
        sv.amps_[sub] = c;
        if (sub == 0) break;
    }
    return sv;
}

StateVector StateVector::ideal_graph_state(std::size_t n_sites, const Graph& g,
                                           std::size_t max_qubits) {
    StateVector sv(n_sites, max_qubits);
    for (int v : g.vertices()) sv.apply_h(static_cast<std::size_t>(v));
    for (const auto& [a, b] : g.edges())
        sv.apply_cz(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    return sv;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

void StateVector::apply_1q(std::size_t q, const Unitary2& u) {
    if (q >= n_) throw std::out_of_range("qubit index");
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        if (idx & bit) continue;
        const cplx a0 = amps_[idx];
        const cplx a1 = amps_[idx | bit];
        amps_[idx] = u.m00 * a0 + u.m01 * a1;
        amps_[idx | bit] = u.m10 * a0 + u.m11 * a1;
    }
}

void StateVector::apply_h(std::size_t q) {
    const double s = 1.0 / std::sqrt(2.0);
    apply_1q(q, {s, s, s, -s});
}

void StateVector::apply_cz(std::size_t a, std::size_t b) {
    if (a >= n_ || b >= n_ || a == b) throw std::out_of_range("qubit pair");
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t idx = 0; idx < amps_.size(); ++idx)
        if ((idx & mask) == mask) amps_[idx] = -amps_[idx];
}

void StateVector::apply_zz_phase(std::size_t a, std::size_t b, double theta) {
    if (a >= n_ || b >= n_ || a == b) throw std::out_of_range("qubit pair");
    const cplx plus = std::exp(kI * theta);
    const cplx minus = std::exp(-kI * theta);
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        const int pc = std::popcount(idx & mask);
        amps_[idx] *= (pc == 1) ? minus : plus;
    }
}

void StateVector::apply_z_rotation(std::size_t q, double theta) {
    if (q >= n_) throw std::out_of_range("qubit index");
    const cplx down = std::exp(-kI * theta);
    const cplx up = std::exp(kI * theta);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t idx = 0; idx < amps_.size(); ++idx)
        amps_[idx] *= (idx & bit) ? up : down;
}

void StateVector::apply_z_rotation_layer(const std::vector<double>& thetas) {
    if (thetas.size() != n_) throw std::invalid_argument("one angle per qubit required");
    // phase(idx) factorises over qubits, so build split lookup tables for the
    // low and high halves of the index and apply both in a single sweep
    const std::size_t lo_bits = n_ / 2;
    const std::size_t lo_mask = (std::size_t{1} << lo_bits) - 1;
    auto build = [&](std::size_t first, std::size_t count) {
        std::vector<cplx> table(std::size_t{1} << count);
        cplx base{1.0, 0.0};
        for (std::size_t q = 0; q < count; ++q) base *= std::exp(-kI * thetas[first + q]);
        table[0] = base;
        for (std::size_t m = 1; m < table.size(); ++m) {
            const std::size_t b = static_cast<std::size_t>(std::countr_zero(m));
            table[m] = table[m & (m - 1)] * std::exp(2.0 * kI * thetas[first + b]);
        }
        return table;
    };
    const std::vector<cplx> lo = build(0, lo_bits);
    const std::vector<cplx> hi = build(lo_bits, n_ - lo_bits);
    for (std::size_t idx = 0; idx < amps_.size(); ++idx)
        amps_[idx] *= lo[idx & lo_mask] * hi[idx >> lo_bits];
}

void StateVector::apply_cz_layer(
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
    const std::vector<double>* zz_thetas) {
    if (zz_thetas && zz_thetas->size() != pairs.size())
        throw std::invalid_argument("one angle per pair required");
    struct PairMasks {
        std::size_t both;
        cplx even, odd;  // zz factors for equal / unequal bits
    };
    std::vector<PairMasks> prep;
    prep.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [a, b] = pairs[k];
        if (a >= n_ || b >= n_ || a == b) throw std::out_of_range("qubit pair");
        const double th = zz_thetas ? (*zz_thetas)[k] : 0.0;
        prep.push_back({(std::size_t{1} << a) | (std::size_t{1} << b),
                        std::exp(kI * th), std::exp(-kI * th)});
    }
    if (zz_thetas) {
        for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
            cplx f{1.0, 0.0};
            for (const auto& p : prep) {
                const int pc = std::popcount(idx & p.both);
                f *= (pc == 1) ? p.odd : p.even;
                if (pc == 2) f = -f;
            }
            amps_[idx] *= f;
        }
    } else {
        for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
            int flips = 0;
            for (const auto& p : prep) flips += ((idx & p.both) == p.both);
            if (flips & 1) amps_[idx] = -amps_[idx];
        }
    }
}

void StateVector::masks_of(const PauliString& p, std::size_t& mx, std::size_t& mz,
                           int& y_count) const {
    mx = 0;
    mz = 0;
    y_count = 0;
    for (const auto& [site, op] : p.factors) {
        if (site < 0 || static_cast<std::size_t>(site) >= n_)
            throw std::out_of_range("pauli operator acts outside the register");
        const std::size_t bit = std::size_t{1} << static_cast<std::size_t>(site);
        if (op == Pauli::X || op == Pauli::Y) mx |= bit;
        if (op == Pauli::Z || op == Pauli::Y) mz |= bit;
        if (op == Pauli::Y) ++y_count;
    }
}

void StateVector::apply_pauli(const PauliString& p) {
    std::size_t mx, mz;
    int ny;
    masks_of(p, mx, mz, ny);
    const cplx base = i_pow(static_cast<int>(p.phase_exp) + ny);
    std::vector<cplx> out(amps_.size());
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        const double sgn = (std::popcount(idx & mz) & 1) ? -1.0 : 1.0;
        out[idx ^ mx] = base * sgn * amps_[idx];
    }
    amps_ = std::move(out);
}

double StateVector::pauli_expectation(const PauliString& p) const {
    if (!p.is_hermitian()) throw std::invalid_argument("non-Hermitian observable");
    std::size_t mx, mz;
    int ny;
    masks_of(p, mx, mz, ny);
    const cplx base = i_pow(static_cast<int>(p.phase_exp) + ny);
    cplx acc{0.0, 0.0};
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        const double sgn = (std::popcount(idx & mz) & 1) ? -1.0 : 1.0;
        acc += std::conj(amps_[idx ^ mx]) * base * sgn * amps_[idx];
    }
    return acc.real();
}

double StateVector::project_pauli(const PauliString& p, int outcome) {
    if (outcome != 1 && outcome != -1)
        throw std::invalid_argument("projector outcome must be +1 or -1");
    std::size_t mx, mz;
    int ny;
    masks_of(p, mx, mz, ny);
    const cplx base = static_cast<double>(outcome) * i_pow(static_cast<int>(p.phase_exp) + ny);
    double w = 0.0;
    if (mx == 0) {
        for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
            const double sgn = (std::popcount(idx & mz) & 1) ? -1.0 : 1.0;
            amps_[idx] = 0.5 * (amps_[idx] + base * sgn * amps_[idx]);
            w += std::norm(amps_[idx]);
        }
        return w;
    }
    // update both members of each (idx, idx^mx) pair in place
    const std::size_t pivot = mx & (~mx + 1);  // lowest x bit
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        if (idx & pivot) continue;
        const std::size_t partner = idx ^ mx;
        const double sgn_i = (std::popcount(idx & mz) & 1) ? -1.0 : 1.0;
        const double sgn_j = (std::popcount(partner & mz) & 1) ? -1.0 : 1.0;
        const cplx ai = amps_[idx];
        const cplx aj = amps_[partner];
        amps_[idx] = 0.5 * (ai + base * sgn_j * aj);
        amps_[partner] = 0.5 * (aj + base * sgn_i * ai);
        w += std::norm(amps_[idx]) + std::norm(amps_[partner]);
    }
    return w;
}

void StateVector::normalize() {
    const double nrm = norm();
    if (nrm < 1e-300) throw std::runtime_error("cannot normalise a null state");
    for (cplx& a : amps_) a /= nrm;
}

int StateVector::measure_pauli(const PauliString& p, Rng& rng, std::optional<int> force,
                               bool* deterministic) {
    if (!p.is_hermitian()) throw std::invalid_argument("non-Hermitian observable");
    const double exp = pauli_expectation(p);
    const double p_plus = std::clamp(0.5 * (1.0 + exp), 0.0, 1.0);
    constexpr double kEps = 1e-12;
    const bool det = p_plus < kEps || p_plus > 1.0 - kEps;
    int outcome;
    if (force) {
        if (*force != 1 && *force != -1)
            throw std::invalid_argument("forced outcome must be +1 or -1");
        const double branch = (*force == 1) ? p_plus : 1.0 - p_plus;
        if (branch < kEps)
            throw std::runtime_error("post-selected branch has zero probability");
        outcome = *force;
    } else if (det) {
        outcome = p_plus > 0.5 ? 1 : -1;
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        outcome = (u(rng) < p_plus) ? 1 : -1;
    }
    project_pauli(p, outcome);
    normalize();
    if (deterministic) *deterministic = det;
    return outcome;
}

double StateVector::fidelity_to(const StateVector& other) const {
    if (n_ != other.n_) throw std::invalid_argument("register size mismatch");
    cplx ov{0.0, 0.0};
    for (std::size_t idx = 0; idx < amps_.size(); ++idx)
        ov += std::conj(other.amps_[idx]) * amps_[idx];
    return std::norm(ov);
}

std::size_t StateVector::sample_bitstring(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = u(rng);
    double acc = 0.0;
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        acc += std::norm(amps_[idx]);
        if (r < acc) return idx;
    }
    return amps_.size() - 1;
}

std::pair<StateVector, MeasurementRecord> run_sequence_statevector(
    const Lattice& lat, const ConstructionSequence& seq, Rng& rng,
    bool postselect_plus, std::size_t max_qubits) {
    validate_sequence(seq);
    StateVector sv = StateVector::from_init(lat, seq.init, max_qubits);
    MeasurementRecord rec;
    for (const auto& op : seq.ops) {
        if (const auto* cz = std::get_if<GlobalCZ>(&op)) {
            for (auto [a, b] : cz_pairs(lat, *cz))
                sv.apply_cz(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
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

}  // namespace latticeweave
