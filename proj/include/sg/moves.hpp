#pragma once

#include <vector>

#include "sg/diagram.hpp"

namespace sg {

enum class MoveKind { R1Insert, R1Remove, R2Insert, R2Remove, R3, Delta };

// A matched move site. Removal/flip sites reference existing crossings and
// side arcs; insertion sites reference target arcs plus parameters.
struct MoveSite {
    MoveKind kind;
    std::vector<int> crossings; // R1Remove: 1; R2Remove: 2; R3/Delta: 3
    std::vector<ArcId> arcs;    // side arcs / insertion targets
    int param = 0;              // R1Insert: sign (+1/-1) * variant; R2Insert: which lane is over
};

// Sites currently matching the move's left-hand side. Insert kinds enumerate
// target arcs (R1Insert: every arc, four variants via param = +-1, +-2;
// R2Insert: co-facial arc pairs with param 0/1 selecting the over lane).
std::vector<MoveSite> find_sites(const Diagram& d, MoveKind kind);

Diagram apply_move(const Diagram& d, const MoveSite& site);

// Report of a lane-word insertion: the ladder's crossings and the arc pieces
// of each lane from top to bottom.
struct LaneReport {
    std::vector<int> crossings;
    std::vector<std::vector<ArcId>> lane_arcs;
};

// Insert a braid word across parallel lanes pulled together inside shared
// faces: lanes[i] and lanes[i+1] must bound a common face (on alternating
// sides, as parallel strands do). Letters +-(i+1) act on lanes i, i+1; a
// positive letter crosses the current right strand over the left.
Diagram insert_lane_word(const Diagram& d, const std::vector<ArcId>& lanes,
                         const std::vector<int>& word, LaneReport* report = nullptr);

// k full twists between two co-facial arcs; 2|k| crossings of equal sign.
Diagram insert_twists(const Diagram& d, ArcId a, ArcId b, int k, LaneReport* report = nullptr);

// Push strand a across strand b (two cancelling crossings, a over b when
// a_over). The middle piece of a pokes into the face beyond b.
Diagram insert_r2(const Diagram& d, ArcId a, ArcId b, bool a_over, LaneReport* report = nullptr);

// Kink on one arc; sign = crossing sign, variant picks the side.
Diagram insert_r1(const Diagram& d, ArcId a, int sign, bool left);

// The two chiralities of the three-strand Delta pattern across lanes a,b,c.
Diagram insert_delta(const Diagram& d, ArcId a, ArcId b, ArcId c, bool flipped,
                     LaneReport* report = nullptr);

// Repeatedly push a strand of src_edges across faces (R2 pairs, pushed strand
// over) until it shares a face with an arc of dst_edges. Returns the new
// diagram and the transported tip arc.
std::pair<Diagram, ArcId> transport_strand(const Diagram& d, const std::set<int>& src_edges,
                                           const std::set<int>& dst_edges);

// First co-facial (arc of edgesA, arc of edgesB) pair, deterministic order.
std::optional<std::pair<ArcId, ArcId>> cofacial_pair(const Diagram& d,
                                                     const std::set<int>& edges_a,
                                                     const std::set<int>& edges_b);

} // namespace sg
