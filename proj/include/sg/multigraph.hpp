#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sg/error.hpp"

namespace sg {

// Finite multigraph. Loops (u == v) and parallel edges are allowed.
struct GraphEdge {
    int id;
    int u;
    int v;
    bool is_loop() const { return u == v; }
};

struct MultiGraph {
    std::string name = "g";
    std::vector<int> vertices;
    std::vector<GraphEdge> edges;

    bool has_vertex(int v) const;
    const GraphEdge* edge(int id) const;
    int degree(int v) const; // loops count twice
    std::vector<int> neighbors(int v) const;

    void add_vertex(int v);
    void add_edge(int id, int u, int v);
    int fresh_vertex_id() const;
    int fresh_edge_id() const;

    // Throws Error(Validate) if ids clash or an endpoint is missing.
    void check() const;
};

// A cycle: closed walk visiting each of its vertices exactly once.
// A loop edge is a 1-edge cycle; a pair of parallel edges is a 2-edge cycle.
struct Cycle {
    std::vector<int> edge_ids;
    std::vector<int> vertex_seq; // visiting order, size == edge count for >=1 edges

    std::set<int> vertex_set() const;
    std::set<int> edge_set() const;
};

std::vector<Cycle> cycles(const MultiGraph& g);
std::vector<std::pair<Cycle, Cycle>> disjoint_cycle_pairs(const MultiGraph& g);

// Triangle = 3-cycle on three distinct vertices; checked.
MultiGraph nabla_y(const MultiGraph& g, const Cycle& triangle);
// v must have degree exactly 3 with three distinct neighbors; checked.
MultiGraph y_nabla(const MultiGraph& g, int v);

// Drop duplicate parallel edges (keeps one per endpoint pair) and loops.
MultiGraph simplified(const MultiGraph& g);

// Canonical certificate for isomorphism of simple graphs (<= ~12 vertices).
std::string canonical_form(const MultiGraph& g);
bool isomorphic(const MultiGraph& a, const MultiGraph& b);

// Closure of {K6} under nabla-Y / Y-nabla exchanges, up to isomorphism.
std::vector<MultiGraph> petersen_family();

MultiGraph complete_graph(int n);
MultiGraph petersen_graph();
MultiGraph handcuff_graph();

// Disjoint union of p and q joined by k bridge edges given as (p-vertex, q-vertex)
// pairs; bridge endpoints must be pairwise distinct. Bridge edge ids are returned
// through *bridge_ids when non-null. Vertices/edges of q are renumbered above p's.
MultiGraph star_connect(const MultiGraph& p, const MultiGraph& q, int k,
                        const std::vector<std::pair<int, int>>& attachment,
                        std::vector<int>* bridge_ids = nullptr,
                        std::vector<int>* q_vertex_map = nullptr);

struct MinorWitness {
    // h-vertex id -> connected branch set of g-vertices (pairwise disjoint)
    std::map<int, std::vector<int>> branch_sets;
};

struct MinorOptions {
    long long node_budget = 10'000'000;
};

// Complete search for h as a minor of g (intended for |V(g)| <= ~15).
// Throws Error(Budget) when the node budget is exhausted before an answer.
std::optional<MinorWitness> find_minor(const MultiGraph& g, const MultiGraph& h,
                                       const MinorOptions& opts = {});
bool has_minor(const MultiGraph& g, const MultiGraph& h, const MinorOptions& opts = {});

enum class LinkedStatus { CertifiedLinked, NotLinked, Unknown };

struct LinkedCert {
    LinkedStatus status = LinkedStatus::Unknown;
    std::string family_member;  // name of the Petersen family member found
    MinorWitness witness;
};

LinkedCert is_intrinsically_linked_cert(const MultiGraph& g, const MinorOptions& opts = {});

// Text format: "graph <name>" header, "v <id>" lines, "e <id> <u> <v>" lines.
MultiGraph parse_graph(const std::string& text);
std::string serialize_graph(const MultiGraph& g);

} // namespace sg
