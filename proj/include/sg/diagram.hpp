#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sg/error.hpp"
#include "sg/multigraph.hpp"

namespace sg {

using ArcId = int;

// One crossing of the diagram. The four slots are listed in counterclockwise
// order around the crossing. The under-strand enters at slot `under_in` and
// leaves at the opposite slot; the over-strand occupies the other two slots
// and enters at `over_in`. Crossing sign is positive when the under-strand
// runs right-to-left as seen along the over-strand's orientation, which here
// comes down to the relative position of the two entry slots.
struct Crossing {
    std::array<ArcId, 4> slot{-1, -1, -1, -1};
    int under_in = 0;
    int over_in = 1;

    int under_out() const { return (under_in + 2) % 4; }
    int over_out() const { return (over_in + 2) % 4; }
    int sign() const { return over_in == (under_in + 3) % 4 ? +1 : -1; }
    bool incoming(int s) const { return s == under_in || s == over_in; }
    bool on_under(int s) const { return s == under_in || s == under_out(); }
    bool well_formed() const {
        return (over_in == (under_in + 1) % 4 || over_in == (under_in + 3) % 4);
    }
};

// Flat (graph) vertex: incident arc ends in counterclockwise order, with an
// explicit incoming flag per slot. An arc may appear twice (a crossing-free
// loop edge).
struct FlatVertex {
    std::vector<ArcId> slot;
    std::vector<char> in;
    int degree() const { return (int)slot.size(); }
};

// Extended planar diagram code: crossings plus flat vertices, with directed
// arcs. Free loops are closed components meeting no crossing or vertex.
// `label` ties arcs to abstract edge ids of the underlying multigraph;
// `roles` names special edges (loop1/loop2/edge for handcuffs, e1..e6 for
// the P4 diagrams).
struct Diagram {
    std::map<int, Crossing> crossings;
    std::map<int, FlatVertex> vertices;
    std::set<ArcId> free_loops;
    std::map<ArcId, int> label;
    std::map<std::string, std::set<int>> roles;
    std::optional<ArcId> basepoint;

    std::set<ArcId> arcs() const;
    int fresh_arc_id() const;
    int fresh_crossing_id() const;
    int fresh_vertex_id() const;
    std::set<int> edge_ids() const;
    std::set<ArcId> arcs_of_edge(int edge_id) const;
    std::set<ArcId> arcs_of_edges(const std::set<int>& edge_ids) const;

    bool operator==(const Diagram& o) const {
        return crossings_equal(o) && vertices == o.vertices && free_loops == o.free_loops &&
               label == o.label && roles == o.roles;
    }

private:
    bool crossings_equal(const Diagram& o) const;
};

// Rotate slot storage so under_in == 0; all constructors normalize, which
// makes structural equality a plain field comparison.
inline Crossing normalized(const Crossing& c) {
    if (c.under_in == 0) return c;
    Crossing out;
    for (int i = 0; i < 4; i++) out.slot[i] = c.slot[(c.under_in + i) % 4];
    out.under_in = 0;
    out.over_in = ((c.over_in - c.under_in) % 4 + 4) % 4;
    return out;
}

inline bool operator==(const Crossing& a, const Crossing& b) {
    return a.slot == b.slot && a.under_in == b.under_in && a.over_in == b.over_in;
}
inline bool operator==(const FlatVertex& a, const FlatVertex& b) {
    return a.slot == b.slot && a.in == b.in;
}

// Arc endpoint bookkeeping. Every arc in a structurally sound diagram has
// exactly one tail (outgoing occurrence) and one head (incoming occurrence).
struct End {
    enum Kind { None, Cross, Vert } kind = None;
    int node = -1;
    int slot = -1;
    bool valid() const { return kind != None; }
};

struct ArcEnds {
    End tail, head;
};

// Throws Error(Validate) on arc multiplicity or orientation inconsistencies.
std::map<ArcId, ArcEnds> arc_endpoints(const Diagram& d);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate(const Diagram& d);
void require_valid(const Diagram& d);

// Dart = one arc end sitting in a node slot.
struct Dart {
    bool at_vertex = false;
    int node = -1;
    int slot = -1;
    auto operator<=>(const Dart&) const = default;
};

// Faces of the underlying combinatorial map, free loops excluded (each free
// loop bounds two faces of its own). Dart order within a face follows the
// face permutation sigma(alpha(.)).
std::vector<std::vector<Dart>> faces(const Diagram& d);

// Connected pieces of the diagram, free loops counted as their own pieces.
int connected_pieces(const Diagram& d);

// Closed strand chains through crossings and degree-2 flat vertices, in
// traversal order. Fails if a vertex of degree != 2 is present. Free loops
// are single-arc chains.
std::vector<std::vector<ArcId>> components(const Diagram& d);

// Number of link components (closed strands), counting through vertices of
// any degree by pairing each vertex slot with nothing (edges terminate).
// Only meaningful helpers below need it; see invariants for lk.

MultiGraph underlying_graph(const Diagram& d);

Diagram smooth_deg2(const Diagram& d);
Diagram mirror(const Diagram& d);
// Flip the stored direction of every arc in the set. The set must be closed
// under strand-mates at crossings (full chains or components).
Diagram reverse_arcs(const Diagram& d, const std::set<ArcId>& arcs);
Diagram reverse_component(const Diagram& d, const std::vector<ArcId>& comp);

// Ordered traversal of the arcs carrying the given edge labels. The walk
// passes through crossings and turns at vertices into the next slot whose
// label belongs to the set. forward[i] says whether the walk follows arc[i]'s
// stored direction.
struct ChainWalk {
    std::vector<ArcId> arcs;
    std::vector<char> forward;
    bool closed = false;
    int start_vertex = -1; // junction vertices for open chains
    int end_vertex = -1;
    bool coherent() const {
        for (char f : forward)
            if (!f) return false;
        return true;
    }
};
ChainWalk walk_edges(const Diagram& d, const std::set<int>& edges);

// Reorient arcs so the given edge set becomes one coherently directed chain.
Diagram orient_edge_chain(const Diagram& d, const std::set<int>& edges);
Diagram switch_crossing(const Diagram& d, int crossing_id);
Diagram smooth_crossing(const Diagram& d, int crossing_id);

// Crossing-count reducing kink/bigon removals (ambient isotopies).
Diagram simplify_r1r2(const Diagram& d, int max_rounds = 1 << 20);

// Remove the given crossings together with the inside arcs (both ends on
// removed crossings); outside strands are rewired straight through.
Diagram dissolve_region(const Diagram& d, const std::set<int>& region,
                        const std::set<ArcId>& inside_arcs);

// Restriction to a subgraph of the underlying multigraph: arcs of deleted
// edges vanish, crossings with one surviving strand dissolve (arcs merge to
// the smaller id), flat vertices of deleted vertices vanish.
Diagram restrict_to(const Diagram& d, const std::set<int>& keep_vertices,
                    const std::set<int>& keep_edges,
                    std::map<ArcId, ArcId>* arc_map = nullptr);
// Convenience: keep the named edges and every vertex they touch.
Diagram restrict_to_edges(const Diagram& d, const std::set<int>& keep_edges,
                          std::map<ArcId, ArcId>* arc_map = nullptr);

// Contract non-loop edges: each contracted edge's arc chain is collapsed by
// sliding an endpoint vertex past every crossing on the chain, then merging
// the endpoint vertices (cyclic orders spliced at the contracted slots).
Diagram contract_edges(const Diagram& d, const std::vector<int>& edge_labels);

std::string serialize(const Diagram& d);
Diagram parse_diagram(const std::string& text);

// Structure-faithful string for memoization (identical string => identical
// diagram). Not canonical across relabelings.
std::string skein_key(const Diagram& d);

} // namespace sg
