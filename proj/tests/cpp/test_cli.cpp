#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <unistd.h>

#include "latticeweave/cli.hpp"
#include "latticeweave/lattice.hpp"
#include "latticeweave/tableau.hpp"

using namespace latticeweave;
namespace fs = std::filesystem;

namespace {

int run(std::initializer_list<const char*> args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
    std::vector<const char*> argv{"latticeweave"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("latticeweave_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;
};

}  // namespace

TEST_CASE("build emits graph and canonical stabilizer artifacts") {
    TempDir dir;
    std::string out;
    const std::string outflag = dir.path.string();
    CHECK(run({"build", "--scheme", "i", "--size", "4x4", "--backend", "tableau",
               "--out", outflag.c_str()},
              &out) == kExitOk);
    CHECK(fs::exists(dir.path / "graph_edges.csv"));
    CHECK(fs::exists(dir.path / "graph_adjacency.txt"));

    // dump matches a direct run of the tableau backend
    Lattice lat(4, 4);
    Rng rng(1);
    auto [tab, rec] = run_sequence_clifford(lat, scheme_i_sequence(lat), rng);
    CHECK(slurp(dir.path / "stabilizers_canonical.txt") == tab.canonical_dump());
}

TEST_CASE("build with a custom empty sequence emits an edgeless graph") {
    TempDir dir;
    const fs::path seq = dir.path / "empty.seq";
    std::ofstream(seq) << "# nothing here\n";
    const std::string seqflag = seq.string();
    const std::string outflag = dir.path.string();
    CHECK(run({"build", "--scheme", "custom", "--sequence", seqflag.c_str(), "--size",
               "2x2", "--out", outflag.c_str()}) == kExitOk);
    CHECK(slurp(dir.path / "graph_edges.csv").find("u,v\n") != std::string::npos);
    std::istringstream lines(slurp(dir.path / "graph_edges.csv"));
    int count = 0;
    std::string line;
    while (std::getline(lines, line)) ++count;
    CHECK(count == 2);  // provenance + header, no edges
}

TEST_CASE("build records measurement outcomes for scheme (ii)") {
    TempDir dir;
    const std::string outflag = dir.path.string();
    CHECK(run({"build", "--scheme", "ii", "--size", "3x3", "--postselect", "plus",
               "--out", outflag.c_str()}) == kExitOk);
    const std::string csv = slurp(dir.path / "measurements.csv");
    CHECK(csv.find("site,outcome,deterministic") != std::string::npos);
    int plus_rows = 0;
    std::istringstream lines(csv);
    std::string line;
    while (std::getline(lines, line))
        if (line.find(",1,") != std::string::npos) ++plus_rows;
    CHECK(plus_rows == 9);
}

TEST_CASE("verify on the noiseless pipeline reports a perfect bound") {
    TempDir dir;
    std::string out;
    const std::string outflag = dir.path.string();
    CHECK(run({"verify", "--scheme", "i", "--size", "3x3", "--out", outflag.c_str()},
              &out) == kExitOk);
    CHECK(out.find("backend auto -> tableau") != std::string::npos);
    const std::string json = slurp(dir.path / "verify_report.json");
    CHECK(json.find("\"bound\": 1.0") != std::string::npos);
    CHECK(json.find("\"gme\": true") != std::string::npos);
    const std::string csv = slurp(dir.path / "verify_report.csv");
    CHECK(csv.rfind("# latticeweave", 0) == 0);
    CHECK(csv.find("theta_prime,p_a") != std::string::npos);
}

TEST_CASE("config errors exit with code 2") {
    std::string err;
    CHECK(run({"sweep", "--scheme", "i"}, nullptr, &err) == kExitConfig);  // no grid
    CHECK(run({"sweep", "--scheme", "i", "--grid", "0.1", "--noise", "none"}, nullptr,
              &err) == kExitConfig);
    CHECK(run({"verify", "--backend", "tableau", "--noise", "dephasing"}, nullptr,
              &err) == kExitConfig);
    CHECK(run({"verify", "--scheme", "nope"}, nullptr, &err) == kExitConfig);
    CHECK(run({"verify", "--size", "banana"}, nullptr, &err) == kExitConfig);
    CHECK(run({"frobnicate"}, nullptr, &err) == kExitConfig);
}

TEST_CASE("resource cap exits with code 4") {
    std::string err;
    CHECK(run({"build", "--scheme", "i", "--size", "4x4", "--backend", "statevector"},
              nullptr, &err) == kExitCap);
    CHECK(err.find("resource cap") != std::string::npos);
}

TEST_CASE("invariant violations exit with code 3") {
    TempDir dir;
    const fs::path seq = dir.path / "bad.seq";
    std::ofstream(seq) << "cz red 0.5 0.5\nhadamard red even\n";
    const std::string seqflag = seq.string();
    std::string err;
    CHECK(run({"build", "--scheme", "custom", "--sequence", seqflag.c_str(), "--size",
               "2x2"},
              nullptr, &err) == kExitInvariant);
}

TEST_CASE("sweep and witness outputs are deterministic per seed") {
    TempDir d1, d2;
    const std::string o1 = d1.path.string(), o2 = d2.path.string();
    auto sweep_args = [&](const std::string& out) {
        return std::vector<const char*>{
            "latticeweave", "sweep", "--scheme", "ii",   "--size",         "3x3",
            "--noise",      "dephasing", "--grid",  "0.0,0.157", "--trajectories", "40",
            "--seed",       "9",     "--out",   out.c_str()};
    };
    std::ostringstream sink;
    CHECK(run_cli(static_cast<int>(sweep_args(o1).size()), sweep_args(o1).data(), sink,
                  sink) == kExitOk);
    CHECK(run_cli(static_cast<int>(sweep_args(o2).size()), sweep_args(o2).data(), sink,
                  sink) == kExitOk);
    CHECK(slurp(d1.path / "sweep_ii_dephasing.csv") ==
          slurp(d2.path / "sweep_ii_dephasing.csv"));

    CHECK(run({"witness", "--scheme", "i", "--size", "3x3", "--out", o1.c_str()}) ==
          kExitOk);
    const std::string wcsv = slurp(d1.path / "witness_i_none.csv");
    CHECK(wcsv.find("i,j,w,se") != std::string::npos);
    CHECK(wcsv.find(",1,") != std::string::npos);  // noiseless edges witness 1
}
