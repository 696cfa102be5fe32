#pragma once

#include "sg/handcuff.hpp"

namespace sg {

// Result of the blackboard D-sum: the joining edge doubled into a parallel
// band, spliced into the loops at both junctions.
struct DSumRecord {
    Diagram knot;                     // K_D(f), a one-component link diagram
    ArcId band_a = -1, band_b = -1;   // first parallel band arc pair (for twisting)
    bool half_twisted = false;        // a half twist was needed to close coherently
    int doubled_crossings = 0;        // crossings created by doubling the edge
};

DSumRecord d_sum(const HandcuffDiagram& f);

// k extra full twists in the band; models a different choice of the disk D.
DSumRecord band_twist(const DSumRecord& rec, int k);

// f_{r,s}: round loops, the joining edge running through a clasp of r full
// twists with loop 1's strand and s full twists with loop 2's. Pinned values:
// L_f is a split trivial link and n(f_{r,s}) = 2rs.
Diagram gen_frs(int r, int s);

// h_{r,s}: spatial P4 with lk(c1,c4) = 0, lk(c1,c3) = s, lk(c2,c4) = r,
// trivial sub-handcuffs except H24; xi = 2rs.
Diagram gen_hrs(int r, int s);

} // namespace sg
