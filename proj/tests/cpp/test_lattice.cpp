#include <doctest.h>

#include "latticeweave/graph.hpp"
#include "latticeweave/lattice.hpp"

using namespace latticeweave;

TEST_CASE("site indexing is red block then blue block, row-major") {
    Lattice lat(3, 2);
    CHECK(lat.n_sites() == 12);
    CHECK(lat.index_of(Species::RedLi, 0, 0) == 0);
    CHECK(lat.index_of(Species::RedLi, 2, 1) == 5);
    CHECK(lat.index_of(Species::BlueCs, 0, 0) == 6);
    CHECK(lat.index_of(Species::BlueCs, 1, 1) == 10);
    for (int s = 0; s < lat.n_sites(); ++s) {
        SiteCoord c = lat.coord(s);
        CHECK(lat.index_of(c.species, c.ix, c.iy) == s);
    }
    CHECK_THROWS_AS(lat.index_of(Species::RedLi, 3, 0), std::out_of_range);
    CHECK_THROWS_AS(Lattice(0, 2), std::invalid_argument);
}

TEST_CASE("doubled positions interleave the sublattices") {
    Lattice lat(2, 2);
    CHECK(lat.position2(lat.index_of(Species::RedLi, 1, 0)) == std::pair{2, 0});
    CHECK(lat.position2(lat.index_of(Species::BlueCs, 1, 0)) == std::pair{3, 1});
    for (int s = 0; s < lat.n_sites(); ++s) {
        auto [px2, py2] = lat.position2(s);
        CHECK(lat.site_at_position2(px2, py2) == s);
        // column parity coincides with species under the (1/2,1/2) offset
        CHECK((lat.column(s) % 2 == 1) == (lat.species_of(s) == Species::BlueCs));
    }
    CHECK(!lat.site_at_position2(0, 1));   // mixed parity
    CHECK(!lat.site_at_position2(-1, -1));
    CHECK(!lat.site_at_position2(5, 5));   // outside 2x2
}

TEST_CASE("cz waves pair sublattices along half-odd displacements") {
    Lattice lat(2, 2);
    auto pairs = cz_pairs(lat, GlobalCZ{Species::RedLi, +1, +1});
    REQUIRE(pairs.size() == 4);
    for (auto [a, b] : pairs) {
        CHECK(lat.species_of(a) == Species::RedLi);
        CHECK(lat.species_of(b) == Species::BlueCs);
        auto [ax, ay] = lat.position2(a);
        auto [bx, by] = lat.position2(b);
        CHECK(bx - ax == 1);
        CHECK(by - ay == 1);
    }
    // boundary pairs are skipped
    CHECK(cz_pairs(lat, GlobalCZ{Species::RedLi, -1, -1}).size() == 1);
    CHECK_THROWS_AS(cz_pairs(lat, GlobalCZ{Species::RedLi, 2, 1}), SequenceError);
}

TEST_CASE("row hadamards select per-species row parity") {
    Lattice lat(2, 3);
    auto sites = row_hadamard_sites(lat, RowHadamard{Species::RedLi, 0});
    CHECK(sites == std::vector<int>{0, 1, 4, 5});  // rows 0 and 2
    auto odd = row_hadamard_sites(lat, RowHadamard{Species::BlueCs, 1});
    CHECK(odd == std::vector<int>{8, 9});
}

TEST_CASE("sequence files round-trip through the canonical serializer") {
    Lattice lat(3, 3);
    for (const auto& seq : {scheme_i_sequence(lat), scheme_ii_sequence(lat)}) {
        const std::string text = serialize_sequence(seq);
        CHECK(parse_sequence(text) == seq);
    }
}

TEST_CASE("parser rejects malformed input with line numbers") {
    CHECK_THROWS_WITH_AS(parse_sequence("frobnicate red\n"),
                         doctest::Contains("line 1"), SequenceError);
    CHECK_THROWS_WITH_AS(parse_sequence("# fine\ncz red 0.4 0.5\n"),
                         doctest::Contains("half-integer"), SequenceError);
    CHECK_THROWS_WITH_AS(parse_sequence("cz red 1.0 0.5\n"),
                         doctest::Contains("one species"), SequenceError);
    CHECK_THROWS_AS(parse_sequence("measure_x red\ncz red 0.5 0.5\n"), SequenceError);
    CHECK_THROWS_AS(parse_sequence("init red even sideways\n"), SequenceError);
    // comments and blank lines are fine
    CHECK(parse_sequence("# nothing\n\n").ops.empty());
}

TEST_CASE("validate_sequence enforces displacement and ordering invariants") {
    ConstructionSequence seq;
    seq.ops.push_back(GlobalMeasureX{Species::RedLi});
    seq.ops.push_back(GlobalCZ{Species::RedLi, 1, 1});
    CHECK_THROWS_AS(validate_sequence(seq), SequenceError);
    seq.ops.clear();
    seq.ops.push_back(GlobalCZ{Species::RedLi, 0, 1});
    CHECK_THROWS_AS(validate_sequence(seq), SequenceError);
}

TEST_CASE("bipartitions split the scheme graphs with no internal edges") {
    Lattice lat(3, 3);
    const Graph g = track_sequence(lat, scheme_i_sequence(lat));
    for (auto mode : {BipartitionMode::ByColumns, BipartitionMode::BySpecies}) {
        Bipartition bp = bipartition(lat, g, mode);
        CHECK(bp.a.size() + bp.b.size() == g.vertices().size());
        for (const auto& [u, v] : g.edges()) CHECK(bp.in_a(u) != bp.in_a(v));
    }
}

TEST_CASE("regions close over graph neighbours") {
    Lattice lat(3, 3);
    const Graph g = track_sequence(lat, scheme_i_sequence(lat));
    const LocalRegion block = default_block_scheme_i(lat, g);
    CHECK(block.interior.size() == 8);
    for (int v : block.interior)
        for (int nb : g.neighbors(v))
            CHECK((block.interior.count(nb) || block.border.count(nb)));
    for (int b : block.border) CHECK(!block.interior.count(b));

    ConstructionSequence pre;
    pre.init = scheme_ii_sequence(lat).init;
    pre.ops = scheme_ii_sequence(lat).ops_before_measurement();
    const Graph g2 = track_sequence(lat, pre);
    const LocalRegion block2 = default_block_scheme_ii(lat, g2);
    CHECK(block2.interior.size() == 8);

    CHECK_THROWS(default_block_scheme_i(Lattice(2, 2), g));
}
