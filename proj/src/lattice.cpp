#include "latticeweave/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "latticeweave/graph.hpp"

namespace latticeweave {

std::string species_name(Species s) {
    return s == Species::RedLi ? "red" : "blue";
}

Lattice::Lattice(int lx, int ly) : lx_(lx), ly_(ly) {
    if (lx < 1 || ly < 1)
        throw std::invalid_argument("lattice extents must be >= 1");
}

int Lattice::index_of(Species s, int ix, int iy) const {
    if (!contains(s, ix, iy))
        throw std::out_of_range("site coordinate outside lattice");
    int base = s == Species::BlueCs ? lx_ * ly_ : 0;
    return base + iy * lx_ + ix;
}

bool Lattice::contains(Species, int ix, int iy) const {
    return ix >= 0 && ix < lx_ && iy >= 0 && iy < ly_;
}

SiteCoord Lattice::coord(int site) const {
    if (site < 0 || site >= n_sites())
        throw std::out_of_range("site index outside lattice");
    int per = lx_ * ly_;
    Species s = site < per ? Species::RedLi : Species::BlueCs;
    int local = site % per;
    return SiteCoord{s, local % lx_, local / lx_};
}

Species Lattice::species_of(int site) const { return coord(site).species; }

std::pair<int, int> Lattice::position2(int site) const {
    SiteCoord c = coord(site);
    int off = c.species == Species::BlueCs ? 1 : 0;
    return {2 * c.ix + off, 2 * c.iy + off};
}

std::optional<int> Lattice::site_at_position2(int px2, int py2) const {
    if ((px2 & 1) != (py2 & 1)) return std::nullopt;
    Species s = (px2 & 1) ? Species::BlueCs : Species::RedLi;
    int off = (px2 & 1) ? 1 : 0;
    if ((px2 - off) % 2 != 0 || (py2 - off) % 2 != 0) return std::nullopt;
    int ix = (px2 - off) / 2;
    int iy = (py2 - off) / 2;
    // negative doubled coords round wrong with integer division; check range
    if (px2 - off < 0 || py2 - off < 0) return std::nullopt;
    if (!contains(s, ix, iy)) return std::nullopt;
    return index_of(s, ix, iy);
}

Lattice build_lattice(int lx, int ly) { return Lattice(lx, ly); }

// ---------------------------------------------------------------------------

InitPattern InitPattern::all_plus() {
    InitPattern p;
    p.states = {{{InitState::Plus, InitState::Plus}, {InitState::Plus, InitState::Plus}}};
    return p;
}

InitState InitPattern::for_site(const Lattice& lat, int site) const {
    return at(lat.species_of(site), lat.row_parity(site));
}

std::vector<GlobalOp> ConstructionSequence::ops_before_measurement() const {
    std::vector<GlobalOp> out;
    for (const auto& op : ops) {
        if (std::holds_alternative<GlobalMeasureX>(op)) break;
        out.push_back(op);
    }
    return out;
}

bool ConstructionSequence::has_measurement() const {
    return std::any_of(ops.begin(), ops.end(), [](const GlobalOp& op) {
        return std::holds_alternative<GlobalMeasureX>(op);
    });
}

std::vector<std::pair<int, int>> cz_pairs(const Lattice& lat, const GlobalCZ& op) {
    if ((op.dx2 & 1) == 0 || (op.dy2 & 1) == 0)
        throw SequenceError("displacement maps within one species");
    std::vector<std::pair<int, int>> pairs;
    int per = lat.sites_per_species();
    int base = op.source == Species::BlueCs ? per : 0;
    for (int local = 0; local < per; ++local) {
        int src = base + local;
        auto [px2, py2] = lat.position2(src);
        auto dst = lat.site_at_position2(px2 + op.dx2, py2 + op.dy2);
        if (dst) pairs.emplace_back(src, *dst);
    }
    return pairs;
}

std::vector<int> row_hadamard_sites(const Lattice& lat, const RowHadamard& op) {
    std::vector<int> out;
    int per = lat.sites_per_species();
    int base = op.species == Species::BlueCs ? per : 0;
    for (int local = 0; local < per; ++local) {
        int site = base + local;
        if (lat.row_parity(site) == (op.row_parity & 1)) out.push_back(site);
    }
    return out;
}

void validate_sequence(const ConstructionSequence& seq) {
    bool measured = false;
    for (const auto& op : seq.ops) {
        if (std::holds_alternative<GlobalMeasureX>(op)) {
            measured = true;
        } else if (std::holds_alternative<GlobalCZ>(op)) {
            const auto& cz = std::get<GlobalCZ>(op);
            if ((cz.dx2 & 1) == 0 || (cz.dy2 & 1) == 0)
                throw SequenceError("displacement maps within one species");
            if (measured)
                throw SequenceError("entangling operation after measurement");
        }
    }
}

ConstructionSequence scheme_i_sequence(const Lattice&) {
    ConstructionSequence seq;
    // First patterned Hadamard is folded into the init pattern: Red even
    // rows start in |0>, everything else in |+>.
    seq.init = InitPattern::all_plus();
    seq.init.states[static_cast<int>(Species::RedLi)][0] = InitState::Zero;
    Species red = Species::RedLi;
    // (b) two CZ waves form 1D chains along the odd Red rows.
    seq.ops.push_back(GlobalCZ{red, +1, -1});
    seq.ops.push_back(GlobalCZ{red, -1, -1});
    // Second patterned Hadamard brings the even Red rows into play.
    seq.ops.push_back(RowHadamard{red, 0});
    // (c) repeating the first displacement cancels its odd-row edges
    // (U_CZ^2 = 1) and entangles the freshly rotated even rows pairwise.
    seq.ops.push_back(GlobalCZ{red, +1, -1});
    // (d) four diagonal waves close the effective 3D structure.
    seq.ops.push_back(GlobalCZ{red, -1, +1});
    seq.ops.push_back(GlobalCZ{red, +1, +1});
    seq.ops.push_back(GlobalCZ{red, +1, +3});
    seq.ops.push_back(GlobalCZ{red, -1, +3});
    return seq;
}

ConstructionSequence scheme_ii_sequence(const Lattice&) {
    ConstructionSequence seq;
    seq.init = InitPattern::all_plus();
    Species red = Species::RedLi;
    seq.ops.push_back(GlobalCZ{red, -1, -1});
    seq.ops.push_back(GlobalCZ{red, +1, -1});
    seq.ops.push_back(GlobalCZ{red, -1, +1});
    seq.ops.push_back(GlobalCZ{red, +1, +1});
    seq.ops.push_back(GlobalMeasureX{red});
    return seq;
}

// ---------------------------------------------------------------------------
// Sequence file format

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

[[noreturn]] void fail(int lineno, const std::string& msg) {
    throw SequenceError("line " + std::to_string(lineno) + ": " + msg);
}

Species parse_species(int lineno, const std::string& t) {
    if (t == "red") return Species::RedLi;
    if (t == "blue") return Species::BlueCs;
    fail(lineno, "unknown species '" + t + "'");
}

int parse_parity(int lineno, const std::string& t) {
    if (t == "even") return 0;
    if (t == "odd") return 1;
    fail(lineno, "unknown row parity '" + t + "'");
}

int parse_half_integer2(int lineno, const std::string& t) {
    double v = 0;
    try {
        size_t used = 0;
        v = std::stod(t, &used);
        if (used != t.size()) fail(lineno, "malformed number '" + t + "'");
    } catch (const std::invalid_argument&) {
        fail(lineno, "malformed number '" + t + "'");
    }
    double doubled = v * 2.0;
    double rounded = std::round(doubled);
    if (std::abs(doubled - rounded) > 1e-9)
        fail(lineno, "displacement component '" + t + "' is not a half-integer");
    return static_cast<int>(rounded);
}

std::string format_half2(int v2) {
    std::ostringstream out;
    if (v2 < 0) {
        out << "-";
        v2 = -v2;
    }
    out << v2 / 2 << "." << (v2 % 2 ? "5" : "0");
    return out.str();
}

}  // namespace

ConstructionSequence parse_sequence(const std::string& text) {
    ConstructionSequence seq;
    std::array<std::array<bool, 2>, 2> init_seen{};
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto toks = split_tokens(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (kw == "init") {
            if (toks.size() != 4) fail(lineno, "init takes <species> <even|odd> <zero|plus>");
            Species s = parse_species(lineno, toks[1]);
            int par = parse_parity(lineno, toks[2]);
            InitState st;
            if (toks[3] == "zero")
                st = InitState::Zero;
            else if (toks[3] == "plus")
                st = InitState::Plus;
            else
                fail(lineno, "unknown init state '" + toks[3] + "'");
            seq.init.states[static_cast<int>(s)][par] = st;
            init_seen[static_cast<int>(s)][par] = true;
        } else if (kw == "hadamard") {
            if (toks.size() != 3) fail(lineno, "hadamard takes <species> <even|odd>");
            seq.ops.push_back(RowHadamard{parse_species(lineno, toks[1]),
                                          parse_parity(lineno, toks[2])});
        } else if (kw == "cz") {
            if (toks.size() != 4) fail(lineno, "cz takes <species> <dx> <dy>");
            GlobalCZ cz{parse_species(lineno, toks[1]),
                        parse_half_integer2(lineno, toks[2]),
                        parse_half_integer2(lineno, toks[3])};
            if ((cz.dx2 & 1) == 0 || (cz.dy2 & 1) == 0)
                fail(lineno, "displacement maps within one species");
            seq.ops.push_back(cz);
        } else if (kw == "measure_x") {
            if (toks.size() != 2) fail(lineno, "measure_x takes <species>");
            seq.ops.push_back(GlobalMeasureX{parse_species(lineno, toks[1])});
        } else {
            fail(lineno, "unknown directive '" + kw + "'");
        }
    }
    // measurement ordering invariant
    bool measured = false;
    for (const auto& op : seq.ops) {
        if (std::holds_alternative<GlobalMeasureX>(op)) measured = true;
        else if (measured && std::holds_alternative<GlobalCZ>(op))
            throw SequenceError("cz after measure_x violates sequence ordering");
    }
    (void)init_seen;  // unspecified entries default to plus
    return seq;
}

std::string serialize_sequence(const ConstructionSequence& seq) {
    std::ostringstream out;
    const Species order[2] = {Species::RedLi, Species::BlueCs};
    for (Species s : order) {
        for (int par = 0; par < 2; ++par) {
            out << "init " << species_name(s) << " " << (par ? "odd" : "even") << " "
                << (seq.init.at(s, par) == InitState::Zero ? "zero" : "plus") << "\n";
        }
    }
    for (const auto& op : seq.ops) {
        if (const auto* h = std::get_if<RowHadamard>(&op)) {
            out << "hadamard " << species_name(h->species) << " "
                << (h->row_parity ? "odd" : "even") << "\n";
        } else if (const auto* cz = std::get_if<GlobalCZ>(&op)) {
            out << "cz " << species_name(cz->source) << " " << format_half2(cz->dx2)
                << " " << format_half2(cz->dy2) << "\n";
        } else if (const auto* m = std::get_if<GlobalMeasureX>(&op)) {
            out << "measure_x " << species_name(m->species) << "\n";
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Bipartitions and regions

Bipartition bipartition(const Lattice& lat, const Graph& graph, BipartitionMode mode) {
    Bipartition part;
    part.mode = mode;
    for (int v : graph.vertices()) {
        if (v < 0 || v >= lat.n_sites())
            throw std::runtime_error("graph vertex outside lattice");
        bool side_a;
        if (mode == BipartitionMode::BySpecies)
            side_a = lat.species_of(v) == Species::RedLi;
        else
            side_a = lat.column(v) % 2 == 0;
        (side_a ? part.a : part.b).insert(v);
    }
    for (const auto& [u, v] : graph.edges()) {
        bool ua = part.in_a(u), va = part.in_a(v);
        if (ua == va)
            throw std::runtime_error("graph is not bipartite under requested mode");
    }
    return part;
}

LocalRegion make_region(const Graph& graph, const std::set<int>& interior) {
    LocalRegion region;
    region.interior = interior;
    for (int v : interior) {
        if (!graph.has_vertex(v))
            throw std::runtime_error("region interior site is not a graph vertex");
        for (int nb : graph.neighbors(v))
            if (!interior.count(nb)) region.border.insert(nb);
    }
    return region;
}

LocalRegion default_block_scheme_i(const Lattice& lat, const Graph& graph) {
    if (lat.lx() < 3 || lat.ly() < 3)
        throw std::runtime_error("default scheme (i) block needs a lattice of at least 3x3");
    std::set<int> interior;
    for (auto [ix, iy] : {std::pair{1, 1}, {2, 1}, {1, 2}, {2, 2}}) {
        interior.insert(lat.index_of(Species::RedLi, ix, iy));
        interior.insert(lat.index_of(Species::BlueCs, ix, iy));
    }
    return make_region(graph, interior);
}

LocalRegion default_block_scheme_ii(const Lattice& lat, const Graph& graph) {
    if (lat.lx() < 3 || lat.ly() < 3)
        throw std::runtime_error("default scheme (ii) block needs a lattice of at least 3x3");
    std::set<int> interior;
    int r1 = lat.index_of(Species::RedLi, 1, 1);
    int r2 = lat.index_of(Species::RedLi, 2, 1);
    interior.insert(r1);
    interior.insert(r2);
    for (int r : {r1, r2})
        for (int nb : graph.neighbors(r)) interior.insert(nb);
    return make_region(graph, interior);
}

}  // namespace latticeweave
