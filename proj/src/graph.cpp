#include "latticeweave/graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace latticeweave {

void Graph::remove_vertex(int v) {
    vertices_.erase(v);
    for (auto it = edges_.begin(); it != edges_.end();) {
        if (it->first == v || it->second == v)
            it = edges_.erase(it);
        else
            ++it;
    }
}

bool Graph::has_edge(int a, int b) const {
    return edges_.count({std::min(a, b), std::max(a, b)}) != 0;
}

void Graph::toggle_edge(int a, int b) {
    if (a == b) throw std::invalid_argument("self-loop");
    auto e = std::make_pair(std::min(a, b), std::max(a, b));
    auto [it, inserted] = edges_.insert(e);
    if (!inserted) edges_.erase(it);
}

void Graph::set_edge(int a, int b, bool present) {
    if (a == b) throw std::invalid_argument("self-loop");
    auto e = std::make_pair(std::min(a, b), std::max(a, b));
    if (present)
        edges_.insert(e);
    else
        edges_.erase(e);
}

int Graph::degree(int v) const {
    int d = 0;
    for (const auto& [a, b] : edges_)
        if (a == v || b == v) ++d;
    return d;
}

std::vector<int> Graph::neighbors(int v) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges_) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string Graph::adjacency_list_text() const {
    std::ostringstream out;
    for (int v : vertices_) {
        out << v << ":";
        for (int nb : neighbors(v)) out << " " << nb;
        out << "\n";
    }
    return out.str();
}

std::string Graph::edge_list_csv() const {
    std::ostringstream out;
    out << "u,v\n";
    for (const auto& [a, b] : edges_) out << a << "," << b << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------

Graph track_sequence(const Lattice& lat, const ConstructionSequence& seq) {
    std::vector<InitState> status(lat.n_sites());
    for (int s = 0; s < lat.n_sites(); ++s) status[s] = seq.init.for_site(lat, s);

    Graph g;
    for (int s = 0; s < lat.n_sites(); ++s) g.add_vertex(s);

    for (const auto& op : seq.ops) {
        if (const auto* cz = std::get_if<GlobalCZ>(&op)) {
            for (auto [a, b] : cz_pairs(lat, *cz)) {
                if (status[a] == InitState::Zero || status[b] == InitState::Zero) continue;
                g.toggle_edge(a, b);
            }
        } else if (const auto* h = std::get_if<RowHadamard>(&op)) {
            for (int s : row_hadamard_sites(lat, *h)) {
                if (status[s] == InitState::Zero) {
                    status[s] = InitState::Plus;
                } else if (g.degree(s) == 0) {
                    status[s] = InitState::Zero;
                } else {
                    throw TrackerError("Hadamard on entangled vertex " + std::to_string(s));
                }
            }
        } else {
            throw TrackerError("tracker cannot process measurement ops; strip them first");
        }
    }

    Graph out;
    for (int s = 0; s < lat.n_sites(); ++s)
        if (status[s] == InitState::Plus) out.add_vertex(s);
    for (const auto& [a, b] : g.edges()) out.set_edge(a, b, true);
    return out;
}

std::vector<PauliString> graph_stabilizers(const Graph& graph) {
    std::vector<PauliString> gens;
    gens.reserve(graph.vertices().size());
    for (int v : graph.vertices()) {
        PauliString s = PauliString::single(v, Pauli::X);
        for (int nb : graph.neighbors(v)) s.set(nb, Pauli::Z);
        gens.push_back(std::move(s));
    }
    return gens;
}

Graph local_complementation(const Graph& graph, int vertex) {
    if (!graph.has_vertex(vertex)) throw std::invalid_argument("unknown vertex");
    Graph out = graph;
    auto nb = graph.neighbors(vertex);
    for (size_t i = 0; i < nb.size(); ++i)
        for (size_t j = i + 1; j < nb.size(); ++j)
            out.toggle_edge(nb[i], nb[j]);
    return out;
}

Graph measure_x_graph_rule(const Graph& graph, int vertex,
                           std::optional<int> special_neighbor) {
    if (!graph.has_vertex(vertex)) throw std::invalid_argument("unknown vertex");
    auto nb = graph.neighbors(vertex);
    if (nb.empty()) {
        Graph out = graph;
        out.remove_vertex(vertex);
        return out;
    }
    int b0 = special_neighbor.value_or(nb.front());
    if (std::find(nb.begin(), nb.end(), b0) == nb.end())
        throw std::invalid_argument("special neighbor is not adjacent to measured vertex");
    Graph out = local_complementation(graph, b0);
    out = local_complementation(out, vertex);
    out = local_complementation(out, b0);
    out.remove_vertex(vertex);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// RREF over GF(2); returns pivot columns, matrix reduced in place.
std::vector<int> gf2_rref(std::vector<std::vector<uint8_t>>& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && !m[piv][c]) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        for (size_t i = 0; i < rows; ++i) {
            if (i != r && m[i][c])
                for (size_t j = 0; j < cols; ++j) m[i][j] ^= m[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

}  // namespace

std::vector<PauliString> surface_code_stabilizers(const Lattice& lat,
                                                  const std::vector<int>& retained_sites) {
    std::vector<int> blues;
    for (int s = 0; s < lat.n_sites(); ++s)
        if (lat.species_of(s) == Species::BlueCs) blues.push_back(s);
    std::vector<int> sorted_retained = retained_sites;
    std::sort(sorted_retained.begin(), sorted_retained.end());
    if (sorted_retained != blues)
        throw std::invalid_argument(
            "retained sites do not match the Blue edge-qubit pattern");

    std::map<int, int> col_of;  // blue site -> column
    for (size_t i = 0; i < blues.size(); ++i) col_of[blues[i]] = static_cast<int>(i);

    std::vector<PauliString> gens;
    std::vector<std::vector<uint8_t>> adj;  // reds x blues over GF(2)
    for (int s = 0; s < lat.n_sites(); ++s) {
        if (lat.species_of(s) != Species::RedLi) continue;
        auto [px2, py2] = lat.position2(s);
        PauliString z;
        std::vector<uint8_t> row(blues.size(), 0);
        for (int dx : {-1, 1})
            for (int dy : {-1, 1}) {
                auto b = lat.site_at_position2(px2 + dx, py2 + dy);
                if (!b) continue;
                z.set(*b, Pauli::Z);
                row[col_of[*b]] = 1;
            }
        if (!z.is_identity()) gens.push_back(std::move(z));
        adj.push_back(std::move(row));
    }

    // X-type loop generators: canonical nullspace basis of adj.
    auto pivots = gf2_rref(adj);
    std::vector<bool> is_pivot(blues.size(), false);
    for (int p : pivots) is_pivot[p] = true;
    for (size_t f = 0; f < blues.size(); ++f) {
        if (is_pivot[f]) continue;
        PauliString x = PauliString::single(blues[f], Pauli::X);
        for (size_t i = 0; i < pivots.size(); ++i)
            if (adj[i][f]) x.set(blues[pivots[i]], Pauli::X);
        gens.push_back(std::move(x));
    }
    return gens;
}

}  // namespace latticeweave
