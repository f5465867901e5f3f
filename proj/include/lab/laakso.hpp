#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lab/rational.hpp"

namespace lab {

// Parameters of a depth-n Laakso approximation. N has length n+1: the graph
// lives on the height grid of step 1/(N_1...N_{n+1}) and carries n digit
// levels. All N_i must be even and >= 4, M >= 2.
struct LaaksoParams {
    std::int64_t M = 2;
    std::vector<std::int64_t> N;
    int n = 0;
    std::int64_t vertex_cap = 5'000'000;

    void validate() const;

    // D = N_1 ... N_{n+1}; all heights are integers in units of 1/D.
    std::int64_t D() const;
    // N_{i+1} ... N_{n+1}, the grid step of level i in units of 1/D (i <= n+1).
    std::int64_t level_step(int i) const;
    Rational delta(int i) const { return Rational(1, prefix_product(i)); }
    // N_1 ... N_i.
    std::int64_t prefix_product(int i) const;

    bool constant_N() const;
    double theta() const;  // 1/N for constant N, else 1/geomean(N), approximate
    double hausdorff_dim() const;  // s with M*theta^(s-1) = 1
    bool dim_exact() const { return constant_N(); }
};

// Wormhole level of grid height idx: the unique i in [1, n+1] with
// idx/D in W_i^h, or nullopt for non-wormhole heights (including 0 and D).
std::optional<int> wormhole_level(const LaaksoParams& p, std::int64_t idx);

// W_i^h as sorted rationals, 1 <= i <= n+1.
std::vector<Rational> wormholes(const LaaksoParams& p, int i);

// Vertex of the metric graph: height index plus a digit word of length n over
// [M], with digit 0 acting as the wildcard slot at the vertex's wormhole
// level. Digits are packed base (M+1), least-significant = level 1.
struct LVertex {
    std::int64_t h_idx = 0;
    std::uint64_t code = 0;

    bool operator==(const LVertex&) const = default;
};

class LaaksoGraph {
  public:
    explicit LaaksoGraph(LaaksoParams params);

    const LaaksoParams& params() const { return params_; }
    int vertex_count() const { return static_cast<int>(verts_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<LVertex>& vertices() const { return verts_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    const LVertex& vertex(int id) const { return verts_[id]; }
    int digit(int id, int level) const;  // 0 = wildcard
    std::int64_t height_idx(int id) const { return verts_[id].h_idx; }
    Rational height(int id) const { return Rational(verts_[id].h_idx, params_.D()); }

    // Degree-adjacency over CSR arrays.
    const int* adj_begin(int v) const { return adj_.data() + adj_off_[v]; }
    const int* adj_end(int v) const { return adj_.data() + adj_off_[v + 1]; }

    Rational edge_length() const { return Rational(1, params_.D()); }
    Rational edge_weight() const;  // edge_length * M^-n; weights sum to 1
    Rational vertex_measure(int v) const;  // half-sum of incident edge weights

    // Lookup by (height index, digit word); digit word must be canonical
    // (wildcard exactly at the wormhole level, if any). Throws lookup_error.
    int vertex_id(std::int64_t h_idx, const std::vector<int>& digits) const;
    int find(const LVertex& v) const;
    // Base vertex: height 0, all digits 1.
    int base_vertex() const { return base_; }

    std::vector<int> digits_of(int id) const;
    std::string vertex_label(int id) const;  // "idx/D:digits", wildcard as '*'

    // Exact shortest-path distance (all edges have length 1/D, so BFS).
    Rational dist(int x, int y) const;
    // Hop counts from a set of sources; -1 for unreachable.
    std::vector<std::int64_t> hops_from(const std::vector<int>& sources) const;

    // Distance via the interval formula 2l - |h(x)-h(y)|, enumerating minimal
    // intervals that meet W_j^h for every digit level j where x, y differ.
    // Falls back to dist() when more than 12 levels differ.
    Rational dist_formula(int x, int y) const;

  private:
    LaaksoParams params_;
    std::vector<LVertex> verts_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<int> adj_;
    std::vector<int> adj_off_;
    std::unordered_map<std::uint64_t, int> index_;
    int base_ = 0;

    std::uint64_t key(std::int64_t h_idx, std::uint64_t code) const;
};

// Cube Q_{I,a}: height interval I = [m, m+1] * delta_i times a digit prefix
// a of length i. Boundary vertices are shared between neighbouring cubes.
struct Cube {
    int level = 0;
    std::int64_t m = 0;
    std::vector<int> prefix;

    std::string label() const;
};

std::vector<Cube> cubes(const LaaksoGraph& g, int level);
Rational cube_measure(const LaaksoGraph& g, const Cube& q);
// Vertices with height in I and digits compatible with the prefix; includes
// boundary vertices (which belong to every closed cube containing them).
std::vector<int> vertices_in(const LaaksoGraph& g, const Cube& q);
// Interior == height strictly inside I (digits then determine a unique cube).
std::vector<int> boundary_vertices(const LaaksoGraph& g, const Cube& q);
// Edges whose interior lies in the cube; every edge lands in exactly one cube
// per level. Returned as edge indices into g.edges().
std::vector<int> edges_in(const LaaksoGraph& g, const Cube& q);
// Cube index at `level` containing a given edge (by edge id).
int cube_of_edge(const LaaksoGraph& g, int level, int edge_id);

}  // namespace lab
