#include "sg/moves.hpp"

#include <algorithm>

#include "sg/surgeon.hpp"

namespace sg {

namespace {

ArcId arc_at(const Diagram& d, const Dart& dt) {
    return dt.at_vertex ? d.vertices.at(dt.node).slot[dt.slot] : d.crossings.at(dt.node).slot[dt.slot];
}

// Is the face-boundary traversal starting at this dart running with the
// arc's arrow? (The dart is one end of the arc; the walk leaves from it.)
bool with_arrow(const Diagram& d, const Dart& dt) {
    if (dt.at_vertex) return !d.vertices.at(dt.node).in[dt.slot];
    return !d.crossings.at(dt.node).incoming(dt.slot);
}

int add_crossing_signed(Surgeon& s, ArcId uin, ArcId uout, ArcId oin, ArcId oout, int sign) {
    std::array<std::pair<ArcId, bool>, 4> ends;
    ends[0] = {uin, true};
    ends[2] = {uout, false};
    if (sign > 0) {
        ends[3] = {oin, true};
        ends[1] = {oout, false};
        return s.add_crossing(ends, 0, 3);
    }
    ends[1] = {oin, true};
    ends[3] = {oout, false};
    return s.add_crossing(ends, 0, 1);
}

} // namespace

Diagram insert_lane_word(const Diagram& d, const std::vector<ArcId>& lanes,
                         const std::vector<int>& word, LaneReport* report) {
    int n = (int)lanes.size();
    if (n < 2) fail(ErrorKind::Domain, "insert_lane_word: need at least two lanes");
    for (int i = 0; i < n; i++)
        for (int j = i + 1; j < n; j++)
            if (lanes[i] == lanes[j]) fail(ErrorKind::Domain, "insert_lane_word: repeated lane arc");
    if (word.empty()) {
        if (report) *report = {};
        return d;
    }
    for (int w : word) {
        int k = std::abs(w);
        if (k < 1 || k > n - 1) fail(ErrorKind::Domain, "insert_lane_word: letter out of range");
    }

    // Frame: the face between lanes i and i+1 walks lane i upward and lane
    // i+1 downward; consecutive faces sit on alternating sides. Lanes from
    // different connected pieces (split parts float freely on the sphere)
    // may be pulled together regardless of faces.
    auto fs = faces(d);
    std::map<ArcId, int> piece;
    {
        std::map<std::pair<int, int>, int> nid;
        int nn = 0;
        for (auto& [id, c] : d.crossings) nid[{0, id}] = nn++;
        for (auto& [id, v] : d.vertices) nid[{1, id}] = nn++;
        std::vector<int> uf(nn);
        for (int i = 0; i < nn; i++) uf[i] = i;
        auto find = [&](auto&& self, int x) -> int {
            return uf[x] == x ? x : uf[x] = self(self, uf[x]);
        };
        auto ends = arc_endpoints(d);
        for (auto& [a, ae] : ends) {
            if (!ae.tail.valid()) continue;
            int x = nid[{ae.tail.kind == End::Vert ? 1 : 0, ae.tail.node}];
            int y = nid[{ae.head.kind == End::Vert ? 1 : 0, ae.head.node}];
            uf[find(find, x)] = find(find, y);
        }
        int free_piece = nn;
        for (auto& [a, ae] : ends)
            piece[a] = ae.tail.valid()
                           ? find(find, nid[{ae.tail.kind == End::Vert ? 1 : 0, ae.tail.node}])
                           : free_piece++;
        for (ArcId a : d.free_loops) piece[a] = free_piece++;
    }
    std::vector<char> arrow_up(n, 0);
    {
        auto face_has = [&](const std::vector<Dart>& f, ArcId a, int want_with /*-1 any*/) {
            for (auto& dt : f) {
                if (arc_at(d, dt) != a) continue;
                bool w = with_arrow(d, dt);
                if (want_with < 0 || (int)w == want_with) return std::optional<bool>(w);
            }
            return std::optional<bool>();
        };
        bool found = false;
        for (auto& f : fs) {
            auto w0 = face_has(f, lanes[0], -1);
            auto w1 = face_has(f, lanes[1], -1);
            if (!w0 || !w1) continue;
            arrow_up[0] = *w0 ? 1 : 0; // walk on lane0 is up
            arrow_up[1] = *w1 ? 0 : 1; // walk on lane1 is down
            found = true;
            break;
        }
        if (!found) {
            if (piece.at(lanes[0]) == piece.at(lanes[1]))
                fail(ErrorKind::Domain, "insert_lane_word: lanes 0,1 share no face");
            arrow_up[0] = 1;
            arrow_up[1] = 1;
        }
        for (int i = 1; i + 1 < n; i++) {
            bool ok = false;
            for (auto& f : fs) {
                auto wi = face_has(f, lanes[i], arrow_up[i] ? 1 : 0);
                auto wj = face_has(f, lanes[i + 1], -1);
                if (!wi || !wj) continue;
                arrow_up[i + 1] = *wj ? 0 : 1;
                ok = true;
                break;
            }
            if (!ok) {
                if (piece.at(lanes[i]) == piece.at(lanes[i + 1]))
                    fail(ErrorKind::Domain, "insert_lane_word: lanes " + std::to_string(i) + "," +
                                                std::to_string(i + 1) +
                                                " share no face on the required side");
                arrow_up[i + 1] = 1;
            }
        }
    }

    Surgeon s(d);
    struct LaneState {
        ArcId arc;
        bool flag; // incoming at the next crossing's upper slot
    };
    std::vector<LaneState> state(n);
    std::vector<ArcId> lower(n);
    LaneReport rep;
    rep.lane_arcs.assign(n, {});
    for (int j = 0; j < n; j++) {
        if (d.free_loops.count(lanes[j])) {
            // The loop closes around the ladder through its own arc.
            s.materialize_free_loop(lanes[j]);
            state[j] = {lanes[j], true};
            lower[j] = lanes[j];
            arrow_up[j] = 0;
            rep.lane_arcs[j].push_back(lanes[j]);
            continue;
        }
        ArcId fresh = s.split(lanes[j]);
        if (arrow_up[j]) {
            state[j] = {fresh, false};
            lower[j] = lanes[j];
        } else {
            state[j] = {lanes[j], true};
            lower[j] = fresh;
        }
        rep.lane_arcs[j].push_back(state[j].arc);
    }
    for (int letter : word) {
        int i = std::abs(letter) - 1;
        LaneState left = state[i], right = state[i + 1];
        ArcId fsw = s.fresh_arc(s.label_of(right.arc));
        ArcId fse = s.fresh_arc(s.label_of(left.arc));
        std::array<std::pair<ArcId, bool>, 4> ends;
        ends[0] = {right.arc, right.flag};
        ends[1] = {left.arc, left.flag};
        ends[2] = {fsw, !right.flag};
        ends[3] = {fse, !left.flag};
        int under_in, over_in;
        if (letter > 0) {
            over_in = right.flag ? 0 : 2;
            under_in = left.flag ? 1 : 3;
        } else {
            over_in = left.flag ? 1 : 3;
            under_in = right.flag ? 0 : 2;
        }
        rep.crossings.push_back(s.add_crossing(ends, under_in, over_in));
        state[i] = {fsw, right.flag};
        state[i + 1] = {fse, left.flag};
        rep.lane_arcs[i].push_back(fsw);
        rep.lane_arcs[i + 1].push_back(fse);
    }
    for (int j = 0; j < n; j++) {
        if (arrow_up[j]) s.join(lower[j], state[j].arc);
        else s.join(state[j].arc, lower[j]);
        rep.lane_arcs[j].push_back(lower[j]);
    }
    Diagram out = s.finish();
    for (auto& lane : rep.lane_arcs)
        for (auto& a : lane) a = s.resolve(a);
    if (report) *report = rep;
    return out;
}

Diagram insert_twists(const Diagram& d, ArcId a, ArcId b, int k, LaneReport* report) {
    if (k == 0) {
        if (report) *report = {};
        return d;
    }
    std::vector<int> word(2 * std::abs(k), k > 0 ? 1 : -1);
    return insert_lane_word(d, {a, b}, word, report);
}

Diagram insert_r2(const Diagram& d, ArcId a, ArcId b, bool a_over, LaneReport* report) {
    std::vector<int> word = a_over ? std::vector<int>{-1, 1} : std::vector<int>{1, -1};
    return insert_lane_word(d, {a, b}, word, report);
}

Diagram insert_r1(const Diagram& d, ArcId a, int sign, bool left) {
    Surgeon s(d);
    ArcId f = s.split(a);
    ArcId g = s.fresh_arc(s.label_of(a));
    if (left) add_crossing_signed(s, a, g, g, f, sign);
    else add_crossing_signed(s, g, f, a, g, sign);
    return s.finish();
}

Diagram insert_delta(const Diagram& d, ArcId a, ArcId b, ArcId c, bool flipped,
                     LaneReport* report) {
    std::vector<int> word = flipped ? std::vector<int>{-2, 1, -2} : std::vector<int>{-1, 2, -1};
    return insert_lane_word(d, {a, b, c}, word, report);
}

std::optional<std::pair<ArcId, ArcId>> cofacial_pair(const Diagram& d,
                                                     const std::set<int>& edges_a,
                                                     const std::set<int>& edges_b) {
    auto fs = faces(d);
    for (auto& f : fs) {
        ArcId best_a = -1, best_b = -1;
        for (auto& dt : f) {
            ArcId x = arc_at(d, dt);
            auto it = d.label.find(x);
            if (it == d.label.end()) continue;
            if (edges_a.count(it->second) && (best_a < 0 || x < best_a)) best_a = x;
            if (edges_b.count(it->second) && (best_b < 0 || x < best_b)) best_b = x;
        }
        if (best_a >= 0 && best_b >= 0 && best_a != best_b) return std::make_pair(best_a, best_b);
    }
    return std::nullopt;
}

std::pair<Diagram, ArcId> transport_strand(const Diagram& d0, const std::set<int>& src_edges,
                                           const std::set<int>& dst_edges) {
    Diagram d = d0;
    for (int round = 0; round < 64; round++) {
        if (auto p = cofacial_pair(d, src_edges, dst_edges)) return {d, p->first};
        auto fs = faces(d);
        int nf = (int)fs.size();
        std::vector<std::vector<ArcId>> face_arcs(nf);
        std::map<ArcId, std::vector<int>> arc_faces;
        for (int i = 0; i < nf; i++) {
            for (auto& dt : fs[i]) {
                ArcId x = arc_at(d, dt);
                face_arcs[i].push_back(x);
                arc_faces[x].push_back(i);
            }
        }
        auto has_label_in = [&](ArcId x, const std::set<int>& edges) {
            auto it = d.label.find(x);
            return it != d.label.end() && edges.count(it->second) > 0;
        };
        // BFS over faces from src-containing to dst-containing.
        std::vector<int> prev_face(nf, -2);
        std::vector<ArcId> via_arc(nf, -1);
        std::vector<int> queue;
        for (int i = 0; i < nf; i++) {
            bool has_src = false;
            for (ArcId x : face_arcs[i])
                if (has_label_in(x, src_edges)) has_src = true;
            if (has_src) {
                prev_face[i] = -1;
                queue.push_back(i);
            }
        }
        int goal = -1;
        for (size_t qi = 0; qi < queue.size() && goal < 0; qi++) {
            int f = queue[qi];
            for (ArcId x : face_arcs[f]) {
                for (int g : arc_faces[x]) {
                    if (g == f || prev_face[g] != -2) continue;
                    prev_face[g] = f;
                    via_arc[g] = x;
                    bool has_dst = false;
                    for (ArcId y : face_arcs[g])
                        if (has_label_in(y, dst_edges)) has_dst = true;
                    if (has_dst) {
                        goal = g;
                        break;
                    }
                    queue.push_back(g);
                }
                if (goal >= 0) break;
            }
        }
        if (goal < 0) fail(ErrorKind::Domain, "transport: no face route to the target");
        // Walk back to the first step out of a source face.
        int cur = goal;
        while (prev_face[prev_face[cur]] != -1) cur = prev_face[cur];
        int start_face = prev_face[cur];
        ArcId barrier = via_arc[cur];
        // Source arc on the start face.
        ArcId push = -1;
        for (ArcId x : face_arcs[start_face])
            if (has_label_in(x, src_edges) && (push < 0 || x < push)) push = x;
        if (push < 0 || barrier < 0 || push == barrier)
            fail(ErrorKind::Domain, "transport: malformed route");
        LaneReport rep;
        d = insert_r2(d, push, barrier, true, &rep);
    }
    fail(ErrorKind::Domain, "transport: exceeded push budget");
}

// ---------------------------------------------------------------------------
// Site search and application

namespace {

struct TriangleInfo {
    std::array<int, 3> corner;   // crossings X1, X2, X3 in face order
    std::array<ArcId, 3> side;   // s1 = X1->X2, s2 = X2->X3, s3 = X3->X1
    bool cyclic = false;         // over/under pattern around the triangle
};

std::optional<TriangleInfo> triangle_at(const Diagram& d, const std::vector<Dart>& f) {
    if (f.size() != 3) return std::nullopt;
    for (auto& dt : f)
        if (dt.at_vertex) return std::nullopt;
    TriangleInfo t;
    for (int i = 0; i < 3; i++) {
        t.corner[i] = f[i].node;
        t.side[i] = arc_at(d, f[i]);
    }
    if (t.corner[0] == t.corner[1] || t.corner[1] == t.corner[2] || t.corner[0] == t.corner[2])
        return std::nullopt;
    if (t.side[0] == t.side[1] || t.side[1] == t.side[2] || t.side[0] == t.side[2])
        return std::nullopt;
    // Mixed = a side that is over at one of its corners and under at the other.
    int mixed = 0;
    for (int i = 0; i < 3; i++) {
        ArcId sarc = t.side[i];
        int c1 = t.corner[i], c2 = t.corner[(i + 1) % 3];
        auto status = [&](int cid) {
            const Crossing& c = d.crossings.at(cid);
            for (int s = 0; s < 4; s++)
                if (c.slot[s] == sarc) return c.on_under(s);
            fail(ErrorKind::Domain, "triangle side does not reach its corner");
        };
        if (status(c1) != status(c2)) mixed++;
    }
    t.cyclic = (mixed == 3);
    return t;
}

Diagram flip_triangle(const Diagram& d, const TriangleInfo& t) {
    auto ends = arc_endpoints(d);
    // Strands: S[i] carries side[i]; its corners are corner[i], corner[(i+1)%3].
    struct StrandInfo {
        ArcId entry_outer, exit_outer; // outer arcs along the strand direction
        int first_corner, second_corner; // crossings in strand order (old)
    };
    std::array<StrandInfo, 3> S;
    for (int i = 0; i < 3; i++) {
        ArcId sarc = t.side[i];
        const ArcEnds& ae = ends.at(sarc);
        int from = -1, to = -1;
        // Direction of the strand follows the side arc's arrow.
        if (ae.tail.kind != End::Cross || ae.head.kind != End::Cross)
            fail(ErrorKind::Domain, "flip: side arc not between crossings");
        from = ae.tail.node;
        to = ae.head.node;
        auto outer_at = [&](int cid, ArcId side_arc) {
            const Crossing& c = d.crossings.at(cid);
            for (int s = 0; s < 4; s++)
                if (c.slot[s] == side_arc) return c.slot[(s + 2) % 4];
            fail(ErrorKind::Domain, "flip: side arc missing at corner");
        };
        S[i].first_corner = from;
        S[i].second_corner = to;
        S[i].entry_outer = outer_at(from, sarc);
        S[i].exit_outer = outer_at(to, sarc);
    }
    // Pairwise data: over/under and sign per old corner crossing.
    struct PairData {
        int over_strand; // index into S
        int sign;
    };
    auto pair_data = [&](int cid, int si, int sj) {
        const Crossing& c = d.crossings.at(cid);
        ArcId arc_i = t.side[si];
        int slot_i = -1;
        for (int s = 0; s < 4; s++)
            if (c.slot[s] == arc_i) slot_i = s;
        PairData p;
        p.over_strand = c.on_under(slot_i) ? sj : si;
        p.sign = c.sign();
        return p;
    };
    // Corner t.corner[i] joins strands S[i] and S[(i+2)%3] (sides i and i-1).
    std::array<PairData, 3> P; // P[i] = data at old corner[i]
    for (int i = 0; i < 3; i++) P[i] = pair_data(t.corner[i], i, (i + 2) % 3);

    Surgeon s(d);
    for (int i = 0; i < 3; i++) s.remove_crossing(t.corner[i]);
    for (int i = 0; i < 3; i++) s.delete_arc(t.side[i]);

    // New side arcs, one per strand.
    std::array<ArcId, 3> nt;
    for (int i = 0; i < 3; i++) nt[i] = s.fresh_arc(s.label_of(s.resolve(S[i].entry_outer)));

    // After the flip each strand meets its two partner crossings in the
    // opposite order. Strand S[i] used to meet corner[i] first (pair with
    // S[(i+2)%3]) then corner[(i+1)%3] (pair with S[(i+1)%3]); now reversed.
    // New crossing Z[i] pairs the same strands as old corner[i].
    // Along S[i]: entry_outer -> Z[(i+1)%3] -> nt[i] -> Z[i] -> exit_outer.
    struct NewCross {
        ArcId in_a = -1, out_a = -1, in_b = -1, out_b = -1; // a = lower-index strand
        int over_strand, sign;
        int si, sj;
    };
    std::array<NewCross, 3> Z;
    for (int i = 0; i < 3; i++) {
        Z[i].si = i;             // strand S[i]
        Z[i].sj = (i + 2) % 3;   // strand S[i-1]
        Z[i].over_strand = P[i].over_strand;
        Z[i].sign = P[i].sign;
    }
    for (int i = 0; i < 3; i++) {
        // S[i] passes Z[(i+1)%3] then Z[i].
        int zf = (i + 1) % 3, zs = i;
        auto set_ends = [&](NewCross& z, ArcId in_arc, ArcId out_arc) {
            if (z.si == i) {
                z.in_a = in_arc;
                z.out_a = out_arc;
            } else {
                z.in_b = in_arc;
                z.out_b = out_arc;
            }
        };
        set_ends(Z[zf], S[i].entry_outer, nt[i]);
        set_ends(Z[zs], nt[i], S[i].exit_outer);
    }
    for (int i = 0; i < 3; i++) {
        NewCross& z = Z[i];
        bool a_over = (z.over_strand == z.si);
        ArcId uin = a_over ? z.in_b : z.in_a;
        ArcId uout = a_over ? z.out_b : z.out_a;
        ArcId oin = a_over ? z.in_a : z.in_b;
        ArcId oout = a_over ? z.out_a : z.out_b;
        add_crossing_signed(s, uin, uout, oin, oout, z.sign);
    }
    return s.finish();
}

} // namespace

std::vector<MoveSite> find_sites(const Diagram& d, MoveKind kind) {
    std::vector<MoveSite> out;
    if (kind == MoveKind::R1Insert) {
        for (ArcId a : d.arcs())
            for (int v : {1, 2, -1, -2}) out.push_back({kind, {}, {a}, v});
        return out;
    }
    if (kind == MoveKind::R2Insert) {
        auto fs = faces(d);
        std::set<std::pair<ArcId, ArcId>> seen;
        for (auto& f : fs) {
            for (size_t i = 0; i < f.size(); i++) {
                for (size_t j = i + 1; j < f.size(); j++) {
                    ArcId a = arc_at(d, f[i]), b = arc_at(d, f[j]);
                    if (a == b) continue;
                    if (!seen.insert(std::minmax(a, b)).second) continue;
                    out.push_back({kind, {}, {a, b}, 0});
                    out.push_back({kind, {}, {a, b}, 1});
                }
            }
        }
        return out;
    }
    auto fs = faces(d);
    for (auto& f : fs) {
        if (kind == MoveKind::R1Remove && f.size() == 1 && !f[0].at_vertex) {
            int id = f[0].node;
            out.push_back({kind, {id}, {arc_at(d, f[0])}, 0});
        }
        if (kind == MoveKind::R2Remove && f.size() == 2 && !f[0].at_vertex && !f[1].at_vertex) {
            int x = f[0].node, y = f[1].node;
            if (x == y) continue;
            ArcId a = arc_at(d, f[0]), b = arc_at(d, f[1]);
            const Crossing& cx = d.crossings.at(x);
            const Crossing& cy = d.crossings.at(y);
            int slot_a_y = -1, slot_a_x = -1;
            for (int sl = 0; sl < 4; sl++) {
                if (cy.slot[sl] == a) slot_a_y = sl;
                if (cx.slot[sl] == a) slot_a_x = sl;
            }
            if (slot_a_y < 0 || slot_a_x < 0) continue;
            if (cx.on_under(slot_a_x) != cy.on_under(slot_a_y)) continue;
            out.push_back({kind, {x, y}, {a, b}, 0});
        }
        if (kind == MoveKind::R3 || kind == MoveKind::Delta) {
            auto tri = triangle_at(d, f);
            if (!tri) continue;
            bool want_cyclic = (kind == MoveKind::Delta);
            if (tri->cyclic != want_cyclic) continue;
            out.push_back({kind,
                           {tri->corner[0], tri->corner[1], tri->corner[2]},
                           {tri->side[0], tri->side[1], tri->side[2]},
                           0});
        }
    }
    std::sort(out.begin(), out.end(), [](const MoveSite& a, const MoveSite& b) {
        if (a.crossings != b.crossings) return a.crossings < b.crossings;
        if (a.arcs != b.arcs) return a.arcs < b.arcs;
        return a.param < b.param;
    });
    return out;
}

Diagram apply_move(const Diagram& d, const MoveSite& site) {
    switch (site.kind) {
        case MoveKind::R1Insert:
            return insert_r1(d, site.arcs.at(0), site.param > 0 ? 1 : -1,
                             std::abs(site.param) == 1);
        case MoveKind::R2Insert:
            return insert_r2(d, site.arcs.at(0), site.arcs.at(1), site.param == 0);
        case MoveKind::R1Remove: {
            if (!d.crossings.count(site.crossings.at(0)))
                fail(ErrorKind::Domain, "apply: stale R1 site");
            return dissolve_region(d, {site.crossings.at(0)}, {site.arcs.at(0)});
        }
        case MoveKind::R2Remove: {
            for (int c : site.crossings)
                if (!d.crossings.count(c)) fail(ErrorKind::Domain, "apply: stale R2 site");
            return dissolve_region(d, {site.crossings.at(0), site.crossings.at(1)},
                                   {site.arcs.at(0), site.arcs.at(1)});
        }
        case MoveKind::R3:
        case MoveKind::Delta: {
            // Re-match the triangle among current faces.
            for (auto& f : faces(d)) {
                auto tri = triangle_at(d, f);
                if (!tri) continue;
                std::set<int> want(site.crossings.begin(), site.crossings.end());
                std::set<int> got(tri->corner.begin(), tri->corner.end());
                if (want != got) continue;
                if (tri->cyclic != (site.kind == MoveKind::Delta))
                    fail(ErrorKind::Domain, "apply: triangle pattern changed");
                return flip_triangle(d, *tri);
            }
            fail(ErrorKind::Domain, "apply: stale triangle site");
        }
    }
    fail(ErrorKind::Domain, "apply: unknown move kind");
}

} // namespace sg
