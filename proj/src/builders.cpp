#include "sg/builders.hpp"

#include <algorithm>
#include <cmath>

#include "sg/surgeon.hpp"

namespace sg {

Diagram braid_closure(int n, const std::vector<int>& word) {
    if (n < 1) fail(ErrorKind::Domain, "braid: need at least one strand");
    Diagram empty;
    Surgeon s(empty);
    std::vector<ArcId> top(n), cur(n);
    for (int i = 0; i < n; i++) top[i] = cur[i] = s.fresh_arc();
    for (int letter : word) {
        int k = std::abs(letter);
        if (k < 1 || k >= n) fail(ErrorKind::Domain, "braid: letter out of range");
        ArcId left = cur[k - 1], right = cur[k];
        ArcId outL = s.fresh_arc(), outR = s.fresh_arc();
        // Slots ccw: 0=NE (right in), 1=NW (left in), 2=SW (to position k),
        // 3=SE (to position k+1). Positive letter: right strand over.
        std::array<std::pair<ArcId, bool>, 4> ends = {
            std::make_pair(right, true),
            std::make_pair(left, true),
            std::make_pair(outL, false),
            std::make_pair(outR, false),
        };
        if (letter > 0) s.add_crossing(ends, 1, 0);
        else s.add_crossing(ends, 0, 1);
        cur[k - 1] = outL;
        cur[k] = outR;
    }
    for (int i = 0; i < n; i++) s.join(cur[i], top[i]);
    return s.finish();
}

Diagram torus_two_strand(int q) {
    std::vector<int> word(std::abs(q), q >= 0 ? 1 : -1);
    return braid_closure(2, word);
}

Diagram unknot_diagram() {
    Diagram d;
    d.free_loops.insert(0);
    return d;
}

Diagram hopf_link(int sign) { return torus_two_strand(sign >= 0 ? 2 : -2); }

Diagram trefoil(int sign) { return torus_two_strand(sign >= 0 ? 3 : -3); }

Diagram figure_eight() { return braid_closure(3, {1, -2, 1, -2}); }

Diagram trivial_handcuff() {
    Diagram empty;
    Surgeon s(empty);
    ArcId a = s.fresh_arc(0); // loop 1
    ArcId b = s.fresh_arc(1); // loop 2
    ArcId c = s.fresh_arc(2); // joining edge
    // v0: ccw (edge out, loop1 out, loop1 in); v1: ccw (loop2 in, edge in, loop2 out).
    s.add_vertex({{c, false}, {a, false}, {a, true}});
    s.add_vertex({{b, true}, {c, true}, {b, false}});
    Diagram d = s.finish();
    d.roles["loop1"] = {0};
    d.roles["loop2"] = {1};
    d.roles["edge"] = {2};
    return d;
}

Diagram shifted(const Diagram& d, int arc_off, int cross_off, int vert_off) {
    Diagram out;
    for (auto& [id, c] : d.crossings) {
        Crossing nc = c;
        for (auto& a : nc.slot) a += arc_off;
        out.crossings[id + cross_off] = nc;
    }
    for (auto& [id, v] : d.vertices) {
        FlatVertex nv = v;
        for (auto& a : nv.slot) a += arc_off;
        out.vertices[id + vert_off] = nv;
    }
    for (ArcId a : d.free_loops) out.free_loops.insert(a + arc_off);
    for (auto& [a, e] : d.label) out.label[a + arc_off] = e;
    out.roles = d.roles;
    if (d.basepoint) out.basepoint = *d.basepoint + arc_off;
    return out;
}

Diagram disjoint_union(const Diagram& a, const Diagram& b, std::map<ArcId, ArcId>* b_arc_map) {
    int arc_off = a.fresh_arc_id();
    int cross_off = a.fresh_crossing_id();
    int vert_off = a.fresh_vertex_id();
    Diagram bs = shifted(b, arc_off, cross_off, vert_off);
    Diagram out = a;
    for (auto& [id, c] : bs.crossings) out.crossings[id] = c;
    for (auto& [id, v] : bs.vertices) out.vertices[id] = v;
    for (ArcId x : bs.free_loops) out.free_loops.insert(x);
    for (auto& [x, e] : bs.label) out.label[x] = e;
    if (b_arc_map) {
        b_arc_map->clear();
        for (ArcId x : b.arcs()) (*b_arc_map)[x] = x + arc_off;
    }
    return out;
}

Diagram connect_sum(const Diagram& a, ArcId at1, const Diagram& b, ArcId at2) {
    std::map<ArcId, ArcId> bmap;
    Diagram u = disjoint_union(a, b, &bmap);
    ArcId a2 = bmap.at(at2);
    Surgeon s(u);
    // Free loops splice directly.
    bool free1 = u.free_loops.count(at1) > 0;
    bool free2 = u.free_loops.count(a2) > 0;
    if (free1 && free2) {
        s.delete_arc(a2);
        Diagram out = s.finish();
        return out;
    }
    if (free1 || free2) {
        // Splicing a free loop into a strand changes nothing.
        s.delete_arc(free1 ? at1 : a2);
        return s.finish();
    }
    ArcId tail1 = at1, head1 = s.split(at1); // at1 keeps tail; head piece fresh
    ArcId tail2 = a2, head2 = s.split(a2);
    s.join(tail1, head2);
    s.join(tail2, head1);
    return s.finish();
}

namespace {

struct Pt {
    double x, y;
};

} // namespace

Diagram straight_line_diagram(const MultiGraph& g, const StraightLineOptions& opts) {
    g.check();
    for (const auto& e : g.edges)
        if (e.is_loop()) fail(ErrorKind::Domain, "straight_line_diagram: loops unsupported");
    {
        std::set<std::pair<int, int>> seen;
        for (const auto& e : g.edges) {
            auto key = std::minmax(e.u, e.v);
            if (!seen.insert({key.first, key.second}).second)
                fail(ErrorKind::Domain, "straight_line_diagram: parallel edges unsupported");
        }
    }
    std::vector<int> vs = g.vertices;
    std::sort(vs.begin(), vs.end());
    int n = (int)vs.size();
    std::map<int, Pt> pos;
    for (int i = 0; i < n; i++) {
        // Slightly uneven spacing keeps chords off shared intersection points.
        double t = 2.0 * M_PI * i / n + 0.0831 * std::sin(3.7 * i + 0.51) / std::max(4, n);
        pos[vs[i]] = {std::cos(t), std::sin(t)};
    }

    struct Xing {
        double t1;     // parameter along edge 1
        int other;     // other edge index
        double t2;     // parameter along the other edge
        Pt at;
    };
    // Direct each edge from its smaller to larger endpoint.
    struct Seg {
        int id, u, v;
        Pt a, b;
    };
    std::vector<Seg> segs;
    for (const auto& e : g.edges) {
        int u = std::min(e.u, e.v), v = std::max(e.u, e.v);
        segs.push_back({e.id, u, v, pos[u], pos[v]});
    }
    auto cross2 = [](Pt o, Pt p, Pt q) { return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x); };

    std::map<int, std::vector<Xing>> on_edge; // edge index -> crossings
    struct PairX {
        int i, j;
        double ti, tj;
        Pt at;
    };
    std::vector<PairX> pairs;
    for (size_t i = 0; i < segs.size(); i++) {
        for (size_t j = i + 1; j < segs.size(); j++) {
            const Seg& A = segs[i];
            const Seg& B = segs[j];
            if (A.u == B.u || A.u == B.v || A.v == B.u || A.v == B.v) continue;
            double d1 = cross2(A.a, A.b, B.a), d2 = cross2(A.a, A.b, B.b);
            double d3 = cross2(B.a, B.b, A.a), d4 = cross2(B.a, B.b, A.b);
            if (d1 * d2 < 0 && d3 * d4 < 0) {
                double t = d3 / (d3 - d4); // along A
                double u = d1 / (d1 - d2); // along B
                Pt at{A.a.x + (A.b.x - A.a.x) * t, A.a.y + (A.b.y - A.a.y) * t};
                pairs.push_back({(int)i, (int)j, t, u, at});
            }
        }
    }
    for (auto& p : pairs) {
        on_edge[p.i].push_back({p.ti, p.j, p.tj, p.at});
        on_edge[p.j].push_back({p.tj, p.i, p.ti, p.at});
    }
    for (auto& [ei, xs] : on_edge) {
        std::sort(xs.begin(), xs.end(), [](const Xing& a, const Xing& b) { return a.t1 < b.t1; });
        for (size_t k = 0; k + 1 < xs.size(); k++)
            if (xs[k + 1].t1 - xs[k].t1 < 1e-9)
                fail(ErrorKind::Domain, "straight_line_diagram: degenerate crossing positions");
    }

    Diagram empty;
    Surgeon s(empty);
    // Arcs per edge: m crossings -> m+1 arcs, directed u -> v.
    std::map<int, std::vector<ArcId>> arcs; // edge index -> arc chain
    for (size_t i = 0; i < segs.size(); i++) {
        int m = on_edge.count((int)i) ? (int)on_edge[(int)i].size() : 0;
        std::vector<ArcId> chain;
        for (int k = 0; k <= m; k++) chain.push_back(s.fresh_arc(segs[i].id));
        arcs[(int)i] = chain;
    }

    // Vertices: slots ccw by direction angle.
    for (int v : vs) {
        struct Port {
            double angle;
            ArcId arc;
            bool incoming;
        };
        std::vector<Port> ports;
        for (size_t i = 0; i < segs.size(); i++) {
            const Seg& sg = segs[i];
            if (sg.u != v && sg.v != v) continue;
            Pt other = sg.u == v ? sg.b : sg.a;
            Pt self = sg.u == v ? sg.a : sg.b;
            double ang = std::atan2(other.y - self.y, other.x - self.x);
            bool incoming = (sg.v == v); // directed u -> v
            ArcId a = incoming ? arcs[(int)i].back() : arcs[(int)i].front();
            ports.push_back({ang, a, incoming});
        }
        std::sort(ports.begin(), ports.end(), [](const Port& a, const Port& b) { return a.angle < b.angle; });
        std::vector<std::pair<ArcId, bool>> ends;
        for (auto& p : ports) ends.push_back({p.arc, p.incoming});
        s.add_vertex(ends);
    }

    // Crossings: slots ccw by geometric angle of the four strand ends.
    auto over_of = [&](int ei, int ej) {
        const Seg& A = segs[ei];
        const Seg& B = segs[ej];
        (void)opts;
        return std::make_pair(A.u, A.v) < std::make_pair(B.u, B.v) ? ei : ej;
    };
    for (auto& p : pairs) {
        const Seg& A = segs[p.i];
        const Seg& B = segs[p.j];
        // Arc pieces: index along edge chain.
        auto piece_index = [&](int ei, double t) {
            int k = 0;
            for (auto& x : on_edge[ei]) {
                if (x.t1 < t - 1e-12) k++;
            }
            return k;
        };
        int ia = piece_index(p.i, p.ti), ib = piece_index(p.j, p.tj);
        ArcId a_in = arcs[p.i][ia], a_out = arcs[p.i][ia + 1];
        ArcId b_in = arcs[p.j][ib], b_out = arcs[p.j][ib + 1];
        struct SlotEnd {
            double angle;
            ArcId arc;
            bool incoming;
            bool on_A;
        };
        auto ang = [&](Pt from, Pt to) { return std::atan2(to.y - from.y, to.x - from.x); };
        std::vector<SlotEnd> slots = {
            {ang(p.at, A.a), a_in, true, true},
            {ang(p.at, A.b), a_out, false, true},
            {ang(p.at, B.a), b_in, true, false},
            {ang(p.at, B.b), b_out, false, false},
        };
        std::sort(slots.begin(), slots.end(),
                  [](const SlotEnd& x, const SlotEnd& y) { return x.angle < y.angle; });
        std::array<std::pair<ArcId, bool>, 4> ends;
        int under_in = -1, over_in = -1;
        bool a_over = over_of(p.i, p.j) == p.i;
        for (int k = 0; k < 4; k++) {
            ends[k] = {slots[k].arc, slots[k].incoming};
            if (slots[k].incoming) {
                bool is_over = (slots[k].on_A == a_over);
                if (is_over) over_in = k;
                else under_in = k;
            }
        }
        s.add_crossing(ends, under_in, over_in);
    }
    return s.finish();
}

} // namespace sg
