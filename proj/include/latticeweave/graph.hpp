#ifndef LATTICEWEAVE_GRAPH_HPP
#define LATTICEWEAVE_GRAPH_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "latticeweave/lattice.hpp"
#include "latticeweave/pauli.hpp"

namespace latticeweave {

/// Undirected simple graph over site indices.
class Graph {
public:
    Graph() = default;

    void add_vertex(int v) { vertices_.insert(v); }
    bool has_vertex(int v) const { return vertices_.count(v) != 0; }
    void remove_vertex(int v);

    bool has_edge(int a, int b) const;
    void toggle_edge(int a, int b);
    void set_edge(int a, int b, bool present);

    int degree(int v) const;
    std::vector<int> neighbors(int v) const;

    const std::set<int>& vertices() const { return vertices_; }
    const std::set<std::pair<int, int>>& edges() const { return edges_; }

    bool operator==(const Graph&) const = default;

    std::string adjacency_list_text() const;
    std::string edge_list_csv() const;

private:
    std::set<int> vertices_;
    std::set<std::pair<int, int>> edges_;  // (min, max) pairs
};

struct TrackerError : std::runtime_error {
    explicit TrackerError(const std::string& what) : std::runtime_error(what) {}
};

/// Edge-toggle tracker. Rules:
///   CZ(a,b): no-op if either endpoint is Zero, else toggle the edge.
///   H(s): Zero -> Plus; degree-0 Plus -> Zero; H on an entangled vertex
///         is outside the tracker's domain and throws TrackerError.
/// The result contains the Plus vertices and their edges. Sequences with
/// measurement ops are rejected; strip them first
/// (ConstructionSequence::ops_before_measurement).
Graph track_sequence(const Lattice& lat, const ConstructionSequence& seq);

/// One generator per vertex: S_i = X_i prod_{j in N(i)} Z_j, phase +1.
std::vector<PauliString> graph_stabilizers(const Graph& graph);

/// Complements the edge set inside N(vertex); everything else unchanged.
Graph local_complementation(const Graph& graph, int vertex);

/// Graph rule for a +1 X measurement: tau_b0(tau_v(tau_b0(G))) with v
/// deleted, b0 in N(v). Degree-0 vertices are simply deleted. When
/// special_neighbor is not given, the lowest index in N(v) is used.
Graph measure_x_graph_rule(const Graph& graph, int vertex,
                           std::optional<int> special_neighbor = std::nullopt);

/// Stabilizer generators of the state scheme (ii) leaves on the retained
/// (Blue) sites after the global +1-postselected X measurement:
///   * one Z-type operator per Red site, acting on its retained diagonal
///     Blue neighbours (weight 4 in the bulk, lower at the boundary);
///   * X-type loop operators spanning the GF(2) nullspace of the
///     Red x Blue diagonal adjacency matrix (canonical RREF basis).
/// All phases +1; generators pairwise commute. retained_sites must be
/// exactly the Blue sites of the lattice.
std::vector<PauliString> surface_code_stabilizers(const Lattice& lat,
                                                  const std::vector<int>& retained_sites);

}  // namespace latticeweave

#endif
