#ifndef LATTICEWEAVE_CLI_HPP
#define LATTICEWEAVE_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace latticeweave {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 2 config error, 3 invariant violation,
// 4 resource cap exceeded.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitCap = 4;

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    std::string scheme = "i";          // i | ii | custom
    std::string sequence_path;         // required for custom
    int lx = 3, ly = 3;
    std::string backend = "auto";      // tableau | statevector | auto
    std::string noise = "none";        // none | dephasing | ising_cz
    double theta_prime = 0.0;
    std::vector<double> grid;          // sweep theta' values
    int trajectories = 2000;
    std::uint64_t seed = 1;
    std::string bipartition_mode = "columns";  // columns | species
    std::string block = "default";     // default | all
    long shots = 0;                    // 0 = exact only
    bool postselect_plus = true;
    bool shared_theta = false;
    bool dump_state = false;
    std::string out_dir = ".";
    std::size_t max_qubits = 22;

    /// Canonical key=value text; also the basis of the provenance hash.
    std::string canonical_text(const std::string& command) const;
    std::string hash(const std::string& command) const;
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_build(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_witness(const RunConfig& cfg, std::ostream& out);

}  // namespace latticeweave

#endif
