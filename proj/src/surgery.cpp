#include "sg/surgery.hpp"

#include <algorithm>

#include "sg/invariants.hpp"
#include "sg/builders.hpp"
#include "sg/moves.hpp"
#include "sg/surgeon.hpp"

namespace sg {

namespace {

int add_grid_crossing(Surgeon& s, ArcId e, ArcId w, bool westward, ArcId n, ArcId sa,
                      bool southward, bool ew_under) {
    std::array<std::pair<ArcId, bool>, 4> ends;
    ends[0] = {e, westward};
    ends[2] = {w, !westward};
    ends[1] = {n, southward};
    ends[3] = {sa, !southward};
    int under_in = ew_under ? (westward ? 0 : 2) : (southward ? 1 : 3);
    int over_in = ew_under ? (southward ? 1 : 3) : (westward ? 0 : 2);
    return s.add_crossing(ends, under_in, over_in);
}

struct Passage {
    int crossing;
    int entry_slot; // slot where the chain walk enters
    int segment;    // chain segment index before this passage
};

} // namespace

DSumRecord d_sum(const HandcuffDiagram& f0) {
    // Interior degree-2 vertices get in the way of the band; smooth them out.
    Diagram base = smooth_deg2(f0.d);
    HandcuffDiagram f = as_handcuff(base);
    const Diagram& d = f.d;

    const FlatVertex& v1 = d.vertices.at(f.v1);
    const FlatVertex& v2 = d.vertices.at(f.v2);
    if (v1.degree() != 3 || v2.degree() != 3)
        fail(ErrorKind::Domain, "d_sum: junction vertices must have degree 3");

    auto edge_slot_at = [&](const FlatVertex& v, ArcId chain_arc) {
        for (int s = 0; s < v.degree(); s++)
            if (v.slot[s] == chain_arc) return s;
        fail(ErrorKind::Domain, "d_sum: edge chain does not reach its junction");
    };
    int es1 = edge_slot_at(v1, f.edge_chain.front());
    int es2 = edge_slot_at(v2, f.edge_chain.back());

    // Feet: copy A rides the left side of the edge's v1->v2 direction, which
    // is the ccw-next slot at the departure vertex and ccw-prev at arrival.
    int a_slot1 = (es1 + 1) % 3, b_slot1 = (es1 + 2) % 3;
    int a_slot2 = (es2 + 2) % 3, b_slot2 = (es2 + 1) % 3;
    bool forward_a = v1.in[a_slot1] != 0; // attached to the incoming loop arc => runs v1->v2
    bool forward_b = v1.in[b_slot1] != 0;
    if (forward_a == forward_b) fail(ErrorKind::Domain, "d_sum: malformed junction orientation");

    // Coherence at v2: a piece flowing into v2 must meet an outgoing loop end.
    auto compatible = [&](bool flows_in, int slot) { return flows_in != (v2.in[slot] != 0); };
    bool half = !compatible(forward_a, a_slot2);
    if (half && !compatible(forward_b, a_slot2))
        fail(ErrorKind::Domain, "d_sum: inconsistent splice polarities");

    // Walk the chain, recording crossing passages.
    ChainWalk walk = walk_edges(d, f.edge);
    if (walk.closed) fail(ErrorKind::Domain, "d_sum: edge chain closed");
    std::vector<ArcId> chain = f.edge_chain;
    int m = (int)chain.size();
    auto ends = arc_endpoints(d);
    std::vector<Passage> passages;
    for (int j = 0; j + 1 < m; j++) {
        // Between segment j and j+1 the chain passes one crossing.
        // Figure out which end of chain[j] leads toward chain[j+1].
        const ArcEnds& ae = ends.at(chain[j]);
        const End* cand[2] = {&ae.head, &ae.tail};
        bool found = false;
        for (const End* e : cand) {
            if (e->kind != End::Cross) continue;
            const Crossing& c = d.crossings.at(e->node);
            if (c.slot[(e->slot + 2) % 4] == chain[j + 1] && !found) {
                passages.push_back({e->node, e->slot, j});
                found = true;
            }
        }
        if (!found) fail(ErrorKind::Domain, "d_sum: chain segments not crossing-adjacent");
    }

    Surgeon s(d);
    // Copy arcs per segment.
    std::vector<ArcId> ca(m), cb(m);
    for (int j = 0; j < m; j++) {
        ca[j] = s.fresh_arc();
        cb[j] = s.fresh_arc();
    }

    // Remove the old structure.
    std::set<int> chain_crossings;
    for (auto& p : passages) chain_crossings.insert(p.crossing);
    std::map<int, std::vector<Passage>> by_crossing;
    for (auto& p : passages) by_crossing[p.crossing].push_back(p);
    // Old crossing data is still needed while building; keep a copy.
    std::map<int, Crossing> oldc;
    for (int c : chain_crossings) oldc[c] = d.crossings.at(c);

    s.remove_vertex(f.v1);
    s.remove_vertex(f.v2);
    for (int c : chain_crossings) s.remove_crossing(c);
    for (ArcId a : chain) s.delete_arc(a);

    int doubled = 0;
    for (auto& [cid, ps] : by_crossing) {
        const Crossing& X = oldc[cid];
        if (ps.size() == 1) {
            const Passage& p = ps[0];
            int sp = p.entry_slot;
            int tN = (sp + 1) % 4, tS = (sp + 3) % 4;
            ArcId rN = X.slot[tN], rS = X.slot[tS];
            bool southward = X.incoming(tN); // transversal enters at the north slot
            ArcId r_in = southward ? rN : rS;
            ArcId r_out = southward ? rS : rN;
            ArcId mid = s.fresh_arc();
            bool ew_under = X.on_under(sp);
            int j = p.segment;
            // Copy B rides the north lane, A the south lane; the transversal
            // meets the lane on its entry side first.
            ArcId bn = southward ? s.resolve(r_in) : s.resolve(r_out);
            ArcId bs = mid;
            add_grid_crossing(s, cb[j], cb[j + 1], forward_b, bn, bs, southward, ew_under);
            ArcId an = mid;
            ArcId as = southward ? s.resolve(r_out) : s.resolve(r_in);
            add_grid_crossing(s, ca[j], ca[j + 1], forward_a, an, as, southward, ew_under);
            doubled += 2;
        } else if (ps.size() == 2) {
            const Passage& p = ps[0];
            const Passage& q = ps[1];
            int sp = p.entry_slot, sq = q.entry_slot;
            if (sq != (sp + 1) % 4 && sq != (sp + 3) % 4)
                fail(ErrorKind::Domain, "d_sum: malformed self-crossing");
            bool southward_q = (sq == (sp + 1) % 4); // q enters from the frame north
            bool ew_under = X.on_under(sp);
            int jp = p.segment, jq = q.segment;
            // Rows: copy B north, copy A south. Columns: q's copy A sits on
            // q's left (east when q heads south, west otherwise).
            ArcId mid_row_a = s.fresh_arc(), mid_row_b = s.fresh_arc();
            ArcId mid_col_a = s.fresh_arc(), mid_col_b = s.fresh_arc();
            bool a_east = southward_q;
            // Row pieces east/west per column.
            auto row_e = [&](bool rowA, bool east_col) {
                if (east_col) return rowA ? ca[jp] : cb[jp];
                return rowA ? mid_row_a : mid_row_b;
            };
            auto row_w = [&](bool rowA, bool east_col) {
                if (east_col) return rowA ? mid_row_a : mid_row_b;
                return rowA ? ca[jp + 1] : cb[jp + 1];
            };
            // Column pieces north/south per row (colA = q's copy A).
            auto col_piece = [&](bool colA, bool north_row, bool north_side) {
                ArcId approach = colA ? ca[jq] : cb[jq];
                ArcId exit = colA ? ca[jq + 1] : cb[jq + 1];
                ArcId mid = colA ? mid_col_a : mid_col_b;
                if (southward_q) {
                    if (north_row) return north_side ? approach : mid;
                    return north_side ? mid : exit;
                }
                if (north_row) return north_side ? exit : mid;
                return north_side ? mid : approach;
            };
            bool row_dir_a = forward_a, row_dir_b = forward_b;
            auto col_southward = [&](bool colA) {
                bool fwd = colA ? forward_a : forward_b;
                return fwd == southward_q;
            };
            for (bool rowA : {false, true}) {       // north row (B) first
                for (bool east_col : {true, false}) {
                    bool colA = (east_col == a_east);
                    bool north_row = !rowA;
                    add_grid_crossing(s, row_e(rowA, east_col), row_w(rowA, east_col),
                                      rowA ? row_dir_a : row_dir_b,
                                      col_piece(colA, north_row, true),
                                      col_piece(colA, north_row, false), col_southward(colA),
                                      ew_under);
                }
            }
            doubled += 4;
        } else {
            fail(ErrorKind::Domain, "d_sum: more than two passages through one crossing");
        }
    }

    // Splice at v1.
    auto attach = [&](ArcId piece, bool flows_in, ArcId loop_arc, bool loop_in) {
        if (flows_in == loop_in)
            fail(ErrorKind::Domain, "d_sum: splice polarity clash");
        if (flows_in) s.join(piece, loop_arc);
        else s.join(loop_arc, piece);
    };
    // At v1 copy X's near piece flows in iff the copy runs v2->v1 there.
    attach(ca[0], !forward_a, v1.slot[a_slot1], v1.in[a_slot1] != 0);
    attach(cb[0], !forward_b, v1.slot[b_slot1], v1.in[b_slot1] != 0);

    ArcId last_left = ca[m - 1], last_right = cb[m - 1];
    bool flag_left = forward_a, flag_right = forward_b;
    if (half) {
        // One crossing between the copies swaps the feet; left passes over.
        ArcId fsw = s.fresh_arc(), fse = s.fresh_arc();
        std::array<std::pair<ArcId, bool>, 4> hx;
        hx[0] = {last_right, flag_right};
        hx[1] = {last_left, flag_left};
        hx[2] = {fsw, !flag_right};
        hx[3] = {fse, !flag_left};
        int over_in = flag_left ? 1 : 3;
        int under_in = flag_right ? 0 : 2;
        s.add_crossing(hx, under_in, over_in);
        last_left = fsw;
        std::swap(flag_left, flag_right);
        last_right = fse;
        doubled += 1;
    }
    attach(last_left, flag_left, v2.slot[a_slot2], v2.in[a_slot2] != 0);
    attach(last_right, flag_right, v2.slot[b_slot2], v2.in[b_slot2] != 0);

    DSumRecord rec;
    std::map<ArcId, ArcId> amap;
    rec.knot = s.finish(&amap);
    rec.knot.label.clear();
    rec.knot.roles.clear();
    rec.band_a = amap.count(ca[0]) ? amap[ca[0]] : ca[0];
    rec.band_b = amap.count(cb[0]) ? amap[cb[0]] : cb[0];
    rec.half_twisted = half;
    rec.doubled_crossings = doubled;
    return rec;
}

DSumRecord band_twist(const DSumRecord& rec, int k) {
    DSumRecord out = rec;
    if (k == 0) return out;
    if (rec.band_a < 0 || rec.band_b < 0)
        fail(ErrorKind::Domain, "band_twist: band arcs unavailable");
    out.knot = insert_twists(rec.knot, rec.band_a, rec.band_b, k);
    return out;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

// Clasp the first co-facial arc pair of the two edge sets with k full twists.
Diagram clasp(const Diagram& d, const std::set<int>& edges_a, const std::set<int>& edges_b,
              int k) {
    if (k == 0) return d;
    auto p = cofacial_pair(d, edges_a, edges_b);
    if (!p) fail(ErrorKind::Domain, "clasp: no co-facial arc pair");
    return insert_twists(d, p->first, p->second, k);
}

} // namespace

Diagram gen_frs(int r, int s) {
    // Clasp order matters: the loop-1 clasp goes onto the pristine outer
    // face, the loop-2 clasp onto the remaining edge piece. The loop-1 clasp
    // runs with opposite chirality so that n comes out at +2rs.
    Diagram d = trivial_handcuff();
    if (r != 0) d = clasp(d, {2}, {0}, -r);
    if (s != 0) {
        if (!cofacial_pair(d, {2}, {1}))
            std::tie(d, std::ignore) = transport_strand(d, {2}, {1});
        d = clasp(d, {2}, {1}, s);
    }
    return d;
}

Diagram gen_hrs(int r, int s) {
    // Planar base: loops at the ends of a row of two lens pairs.
    Diagram base;
    {
        Diagram empty;
        Surgeon sg(empty);
        ArcId a1 = sg.fresh_arc(1); // e1: upper arc v_a -> v_b
        ArcId a2 = sg.fresh_arc(2); // e2: lower arc v_a -> v_b
        ArcId a3 = sg.fresh_arc(3); // e3: upper arc v_b -> v_c
        ArcId a4 = sg.fresh_arc(4); // e4: lower arc v_b -> v_c
        ArcId a5 = sg.fresh_arc(5); // e5: loop at v_a
        ArcId a6 = sg.fresh_arc(6); // e6: loop at v_c
        // ccw slot orders for a flat drawing.
        sg.add_vertex({{a1, false}, {a5, false}, {a5, true}, {a2, false}}); // v_a
        sg.add_vertex({{a3, false}, {a1, true}, {a2, true}, {a4, false}});  // v_b
        sg.add_vertex({{a6, false}, {a3, true}, {a4, true}, {a6, true}});   // v_c
        base = sg.finish();
        for (int i = 1; i <= 6; i++) base.roles["e" + std::to_string(i)] = {i};
    }
    Diagram d = base;
    if (r != 0) {
        // r full twists between e2 and the c4 loop.
        if (!cofacial_pair(d, {2}, {6})) std::tie(d, std::ignore) = transport_strand(d, {6}, {2});
        d = clasp(d, {2}, {6}, r);
    }
    if (s != 0) {
        // s full twists between e4 and the c1 loop; route c1 across if needed.
        if (!cofacial_pair(d, {4}, {5})) std::tie(d, std::ignore) = transport_strand(d, {5}, {4});
        d = clasp(d, {4}, {5}, s);
    }
    return d;
}

} // namespace sg
