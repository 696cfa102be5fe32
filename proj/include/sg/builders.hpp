#pragma once

#include <vector>

#include "sg/diagram.hpp"

namespace sg {

// Closure of an n-strand braid word. Letters: +k / -k for the generator on
// positions k, k+1 (1-based), the positive letter giving positive crossings
// when strands run coherently. Unused strands close into free loops.
Diagram braid_closure(int n, const std::vector<int>& word);

// (2, q) torus link as a 2-braid closure; |q| crossings, sign(q) chirality.
Diagram torus_two_strand(int q);

Diagram unknot_diagram();
Diagram hopf_link(int sign);
Diagram trefoil(int sign = +1);
Diagram figure_eight();

// Two round oriented loops joined by a straight edge; labels follow
// handcuff_graph(): loop1 = 0, loop2 = 1, edge = 2. Loop orientations are
// chosen so the blackboard D-sum of the untwisted diagram closes coherently.
Diagram trivial_handcuff();

// Ids of d shifted by fixed offsets; used to put two diagrams side by side.
Diagram shifted(const Diagram& d, int arc_off, int cross_off, int vert_off);
Diagram disjoint_union(const Diagram& a, const Diagram& b,
                       std::map<ArcId, ArcId>* b_arc_map = nullptr);

// Connected sum: cut arc at1 of a and arc at2 of b and splice respecting
// orientations. Both arcs must belong to closed strands.
Diagram connect_sum(const Diagram& a, ArcId at1, const Diagram& b, ArcId at2);

// Straight-line diagram of a simple graph: vertices in convex position,
// edges as chords, crossings from segment intersections. over_rule picks
// which edge passes over at a crossing given the two edge ids.
struct StraightLineOptions {
    // Returns true when edge e1 goes over edge e2.
    bool lexicographic_over = true; // smaller (u,v) pair passes over
};
Diagram straight_line_diagram(const MultiGraph& g, const StraightLineOptions& opts = {});

} // namespace sg
