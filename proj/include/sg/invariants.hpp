#pragma once

#include "sg/handcuff.hpp"
#include "sg/poly.hpp"

namespace sg {

// Half the signed crossing count between two disjoint closed oriented
// strands, identified by their arc sets; orientations are the stored arrows.
long long linking_number(const Diagram& d, const std::set<ArcId>& comp_a,
                         const std::set<ArcId>& comp_b);

struct SkeinOptions {
    long long node_budget = 1'000'000;
    bool parallel = false;    // evaluate skein branches as OpenMP tasks
    bool presimplify = true;  // crossing-reducing kink/bigon removal per node
    bool a2_via_skein = true; // handcuff/xi pipelines: full Conway route
};

// Conway polynomial of a link diagram (no flat vertices), by skein recursion
// toward descending diagrams. Throws Error(Budget) past the node budget.
ConwayPoly conway(const Diagram& d, const SkeinOptions& opts = {});

// z^2 coefficient via the skein route.
long long a2_skein(const Diagram& d, const SkeinOptions& opts = {});

// z^2 coefficient of a knot via the Gauss-diagram pair formula (the two
// crossings interleave as U_i O_j O_i U_j from the basepoint; signs
// multiply). Serial fast path, cross-validated against the skein route.
long long a2_gauss(const Diagram& d);

// Dispatcher used by the invariant pipelines.
long long a2(const Diagram& d, const SkeinOptions& opts = {});

struct HandcuffInvariant {
    long long n_value = 0; // n(f, D) for the blackboard disk
    long long modulus = 0; // |lk(L_f)|
    long long reduced = 0; // residue in [0, modulus), or n_value when modulus = 0
};

HandcuffInvariant n_invariant(const HandcuffDiagram& f, const SkeinOptions& opts = {});

// xi = n(H13) - n(H14) - n(H23) + n(H24); requires lk(c1, c4) = 0.
long long xi(const P4Diagram& f, const SkeinOptions& opts = {});

enum class Irreducibility { IrreducibleCertified, Unknown };
Irreducibility irreducibility_certificate(const HandcuffDiagram& f,
                                          const SkeinOptions& opts = {});

} // namespace sg
