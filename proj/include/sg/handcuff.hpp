#pragma once

#include <array>

#include "sg/diagram.hpp"

namespace sg {

// A spatial handcuff diagram: two oriented loop cycles joined by an edge
// path. Role edge sets come from the diagram's `role` records; loops must be
// coherently oriented chains (their stored arrows are the loop orientations).
struct HandcuffDiagram {
    Diagram d;
    std::set<int> loop1, loop2, edge; // edge ids per role
    std::vector<ArcId> loop1_chain, loop2_chain;
    std::vector<ArcId> edge_chain; // ordered from the loop1 junction to the loop2 junction
    int v1 = -1, v2 = -1;          // junction vertices

    std::set<ArcId> loop1_arcs() const { return {loop1_chain.begin(), loop1_chain.end()}; }
    std::set<ArcId> loop2_arcs() const { return {loop2_chain.begin(), loop2_chain.end()}; }
};

// Builds and checks the handcuff structure. With auto_orient, incoherent
// loop/edge chains are reoriented first (used when cycles come from
// arbitrarily directed graph edges).
HandcuffDiagram as_handcuff(const Diagram& d, bool auto_orient = false);

// Spatial embedding of the graph with two loops (e5, e6) joined to a path of
// doubled edges (e1,e2 parallel; e3,e4 parallel). Roles e1..e6 may be chains.
struct P4Diagram {
    Diagram d;
    std::array<std::set<int>, 6> e; // e[0] = role e1, ..., e[5] = role e6

    std::set<int> cycle_edges(int c) const { // c in 1..4
        switch (c) {
            case 1: return e[4];
            case 2: {
                std::set<int> s = e[0];
                s.insert(e[1].begin(), e[1].end());
                return s;
            }
            case 3: {
                std::set<int> s = e[2];
                s.insert(e[3].begin(), e[3].end());
                return s;
            }
            default: return e[5];
        }
    }
};

P4Diagram as_p4(const Diagram& d, bool auto_orient = false);

// Restriction of a P4 diagram to the handcuff H_ij = c1 + e_i + e_j + c4,
// i in {1,2}, j in {3,4}.
HandcuffDiagram p4_sub_handcuff(const P4Diagram& p, int i, int j);

} // namespace sg
