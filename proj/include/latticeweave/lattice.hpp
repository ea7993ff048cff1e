#ifndef LATTICEWEAVE_LATTICE_HPP
#define LATTICEWEAVE_LATTICE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace latticeweave {

enum class Species : std::uint8_t { RedLi = 0, BlueCs = 1 };

inline Species other_species(Species s) {
    return s == Species::RedLi ? Species::BlueCs : Species::RedLi;
}

std::string species_name(Species s);  // "red" / "blue"

/// Sublattice coordinate of one site. Positions are kept in doubled units
/// so that half-integers stay exact: Red (ix,iy) sits at (2ix, 2iy),
/// Blue (ix,iy) at (2ix+1, 2iy+1) -- the two interpenetrating square
/// lattices offset by (1/2, 1/2).
struct SiteCoord {
    Species species;
    int ix;
    int iy;

    bool operator==(const SiteCoord&) const = default;
};

/// Two Lx x Ly square sublattices, open boundary. Site indices are
/// deterministic: Red block row-major first (index = iy*Lx + ix), then
/// the Blue block row-major.
class Lattice {
public:
    Lattice(int lx, int ly);

    int lx() const { return lx_; }
    int ly() const { return ly_; }
    int n_sites() const { return 2 * lx_ * ly_; }
    int sites_per_species() const { return lx_ * ly_; }

    int index_of(Species s, int ix, int iy) const;
    bool contains(Species s, int ix, int iy) const;
    SiteCoord coord(int site) const;
    Species species_of(int site) const;

    /// Doubled-unit physical position (px2, py2) = (2x, 2y).
    std::pair<int, int> position2(int site) const;
    std::optional<int> site_at_position2(int px2, int py2) const;

    /// 0-based per-species row index; "even"/"odd" row selectors refer to
    /// the parity of this value.
    int row(int site) const { return coord(site).iy; }
    int row_parity(int site) const { return coord(site).iy & 1; }

    /// Physical column index = doubled x coordinate. Columns alternate
    /// species under the (1/2,1/2) offset, so column parity coincides
    /// with species.
    int column(int site) const { return position2(site).first; }

private:
    int lx_;
    int ly_;
};

Lattice build_lattice(int lx, int ly);

// ---------------------------------------------------------------------------
// Global operations and construction sequences

enum class InitState : std::uint8_t { Zero = 0, Plus = 1 };

/// Initial single-site state per (species, row parity).
struct InitPattern {
    // indexed by [species][row_parity]
    std::array<std::array<InitState, 2>, 2> states;

    static InitPattern all_plus();
    InitState at(Species s, int row_parity) const {
        return states[static_cast<int>(s)][row_parity & 1];
    }
    InitState for_site(const Lattice& lat, int site) const;
    bool operator==(const InitPattern&) const = default;
};

struct RowHadamard {
    Species species;
    int row_parity;  // 0 = even rows, 1 = odd rows
    bool operator==(const RowHadamard&) const = default;
};

/// CZ wave: every source-species site is paired with the opposite-species
/// site displaced by (dx2/2, dy2/2) lattice constants. Both doubled
/// components must be odd, otherwise the displacement maps a sublattice
/// onto itself. Pairs falling outside the lattice are skipped.
struct GlobalCZ {
    Species source;
    int dx2;
    int dy2;
    bool operator==(const GlobalCZ&) const = default;
};

struct GlobalMeasureX {
    Species species;
    bool operator==(const GlobalMeasureX&) const = default;
};

using GlobalOp = std::variant<RowHadamard, GlobalCZ, GlobalMeasureX>;

struct ConstructionSequence {
    InitPattern init = InitPattern::all_plus();
    std::vector<GlobalOp> ops;

    bool operator==(const ConstructionSequence&) const = default;
    std::vector<GlobalOp> ops_before_measurement() const;
    bool has_measurement() const;
};

/// Site pairs affected by one CZ wave, each (source, target), sorted by
/// source site index. No site appears twice.
std::vector<std::pair<int, int>> cz_pairs(const Lattice& lat, const GlobalCZ& op);

/// Sites addressed by a row Hadamard, ascending.
std::vector<int> row_hadamard_sites(const Lattice& lat, const RowHadamard& op);

/// Throws SequenceError on invalid displacement or measurement ordering.
void validate_sequence(const ConstructionSequence& seq);

ConstructionSequence scheme_i_sequence(const Lattice& lat);
ConstructionSequence scheme_ii_sequence(const Lattice& lat);

// ---------------------------------------------------------------------------
// Sequence file format (canonical, line oriented):
//   init <red|blue> <even|odd> <zero|plus>
//   hadamard <red|blue> <even|odd>
//   cz <red|blue> <dx> <dy>        (half-integer decimals, e.g. 0.5 -1.5)
//   measure_x <red|blue>
// '#' starts a comment. The serializer is canonical: four init lines in
// fixed order (red even, red odd, blue even, blue odd), then ops in order.

struct SequenceError : std::runtime_error {
    explicit SequenceError(const std::string& what) : std::runtime_error(what) {}
};

ConstructionSequence parse_sequence(const std::string& text);
std::string serialize_sequence(const ConstructionSequence& seq);

// ---------------------------------------------------------------------------
// Regions and bipartitions

struct LocalRegion {
    std::set<int> interior;
    std::set<int> border;
};

enum class BipartitionMode { ByColumns, BySpecies };

struct Bipartition {
    std::set<int> a;
    std::set<int> b;
    BipartitionMode mode;

    bool in_a(int site) const { return a.count(site) != 0; }
};

class Graph;  // graph.hpp

/// Splits the graph's vertices per mode and validates that no edge stays
/// inside one set. Throws SequenceError-style std::runtime_error if the
/// graph is not bipartite under the requested mode.
Bipartition bipartition(const Lattice& lat, const Graph& graph, BipartitionMode mode);

/// Interior plus its exact neighbour closure in the graph.
LocalRegion make_region(const Graph& graph, const std::set<int>& interior);

/// Default verification blocks (8 interior sites each) on lattices of at
/// least 3x3.
LocalRegion default_block_scheme_i(const Lattice& lat, const Graph& graph);
LocalRegion default_block_scheme_ii(const Lattice& lat, const Graph& graph);

}  // namespace latticeweave

#endif
