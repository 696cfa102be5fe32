#include "sg/diagram.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "sg/surgeon.hpp"

namespace sg {

std::set<ArcId> Diagram::arcs() const {
    std::set<ArcId> out = free_loops;
    for (auto& [id, c] : crossings)
        for (ArcId a : c.slot) out.insert(a);
    for (auto& [id, v] : vertices)
        for (ArcId a : v.slot) out.insert(a);
    return out;
}

int Diagram::fresh_arc_id() const {
    int m = 0;
    for (ArcId a : arcs()) m = std::max(m, a + 1);
    for (auto& [a, e] : label) m = std::max(m, a + 1);
    return m;
}

int Diagram::fresh_crossing_id() const {
    int m = 0;
    for (auto& [id, c] : crossings) m = std::max(m, id + 1);
    return m;
}

int Diagram::fresh_vertex_id() const {
    int m = 0;
    for (auto& [id, v] : vertices) m = std::max(m, id + 1);
    return m;
}

std::set<int> Diagram::edge_ids() const {
    std::set<int> out;
    for (auto& [a, e] : label) out.insert(e);
    return out;
}

std::set<ArcId> Diagram::arcs_of_edge(int edge_id) const {
    std::set<ArcId> out;
    for (auto& [a, e] : label)
        if (e == edge_id) out.insert(a);
    return out;
}

std::set<ArcId> Diagram::arcs_of_edges(const std::set<int>& ids) const {
    std::set<ArcId> out;
    for (auto& [a, e] : label)
        if (ids.count(e)) out.insert(a);
    return out;
}

bool Diagram::crossings_equal(const Diagram& o) const { return crossings == o.crossings; }

std::map<ArcId, ArcEnds> arc_endpoints(const Diagram& d) {
    std::map<ArcId, ArcEnds> out;
    auto occur = [&](ArcId a, bool incoming, End e) {
        ArcEnds& ae = out[a];
        End& target = incoming ? ae.head : ae.tail;
        if (target.valid())
            fail(ErrorKind::Validate, "arc multiplicity: arc " + std::to_string(a) +
                                          " has more than one " +
                                          (incoming ? std::string("head") : std::string("tail")));
        target = e;
    };
    for (auto& [id, c] : d.crossings) {
        if (!c.well_formed())
            fail(ErrorKind::Validate, "crossing " + std::to_string(id) + " slot roles malformed");
        for (int s = 0; s < 4; s++)
            occur(c.slot[s], c.incoming(s), End{End::Cross, id, s});
    }
    for (auto& [id, v] : d.vertices) {
        for (int s = 0; s < v.degree(); s++)
            occur(v.slot[s], v.in[s] != 0, End{End::Vert, id, s});
    }
    for (auto& [a, ae] : out) {
        if (!ae.tail.valid() || !ae.head.valid())
            fail(ErrorKind::Validate,
                 "arc multiplicity: arc " + std::to_string(a) + " lacks a head or tail");
        if (d.free_loops.count(a))
            fail(ErrorKind::Validate, "arc " + std::to_string(a) + " is both bound and a free loop");
    }
    for (ArcId a : d.free_loops) out[a] = ArcEnds{};
    return out;
}

namespace {

struct DartCtx {
    std::vector<Dart> darts;
    std::map<Dart, int> index;
    std::vector<int> alpha; // other end of the same arc
    std::vector<int> sigma; // next slot ccw at the same node

    explicit DartCtx(const Diagram& d) {
        std::map<ArcId, std::vector<int>> occ;
        for (auto& [id, c] : d.crossings) {
            for (int s = 0; s < 4; s++) {
                Dart dd{false, id, s};
                index[dd] = (int)darts.size();
                darts.push_back(dd);
            }
        }
        for (auto& [id, v] : d.vertices) {
            for (int s = 0; s < v.degree(); s++) {
                Dart dd{true, id, s};
                index[dd] = (int)darts.size();
                darts.push_back(dd);
            }
        }
        alpha.assign(darts.size(), -1);
        sigma.assign(darts.size(), -1);
        for (int i = 0; i < (int)darts.size(); i++) {
            const Dart& dd = darts[i];
            ArcId a = dd.at_vertex ? d.vertices.at(dd.node).slot[dd.slot]
                                   : d.crossings.at(dd.node).slot[dd.slot];
            occ[a].push_back(i);
            int deg = dd.at_vertex ? d.vertices.at(dd.node).degree() : 4;
            Dart nxt{dd.at_vertex, dd.node, (dd.slot + 1) % deg};
            sigma[i] = -1; // filled after all darts indexed
            (void)nxt;
        }
        for (int i = 0; i < (int)darts.size(); i++) {
            const Dart& dd = darts[i];
            int deg = dd.at_vertex ? d.vertices.at(dd.node).degree() : 4;
            sigma[i] = index.at(Dart{dd.at_vertex, dd.node, (dd.slot + 1) % deg});
        }
        for (auto& [a, os] : occ) {
            if (os.size() != 2)
                fail(ErrorKind::Validate, "arc multiplicity: arc " + std::to_string(a));
            alpha[os[0]] = os[1];
            alpha[os[1]] = os[0];
        }
    }
};

} // namespace

std::vector<std::vector<Dart>> faces(const Diagram& d) {
    DartCtx ctx(d);
    std::vector<std::vector<Dart>> out;
    std::vector<char> seen(ctx.darts.size(), 0);
    for (int i = 0; i < (int)ctx.darts.size(); i++) {
        if (seen[i]) continue;
        std::vector<Dart> face;
        int j = i;
        while (!seen[j]) {
            seen[j] = 1;
            face.push_back(ctx.darts[j]);
            j = ctx.sigma[ctx.alpha[j]];
        }
        out.push_back(std::move(face));
    }
    return out;
}

int connected_pieces(const Diagram& d) {
    // Union nodes through arcs; free loops are their own pieces.
    std::map<ArcId, ArcEnds> ends = arc_endpoints(d);
    std::map<std::pair<int, int>, int> nid; // (kind,id) -> idx; kind 0 cross, 1 vert
    int n = 0;
    for (auto& [id, c] : d.crossings) nid[{0, id}] = n++;
    for (auto& [id, v] : d.vertices) nid[{1, id}] = n++;
    std::vector<int> uf(n);
    for (int i = 0; i < n; i++) uf[i] = i;
    auto find = [&](auto&& self, int x) -> int { return uf[x] == x ? x : uf[x] = self(self, uf[x]); };
    for (auto& [a, ae] : ends) {
        if (!ae.tail.valid()) continue;
        int x = nid[{ae.tail.kind == End::Vert ? 1 : 0, ae.tail.node}];
        int y = nid[{ae.head.kind == End::Vert ? 1 : 0, ae.head.node}];
        uf[find(find, x)] = find(find, y);
    }
    std::set<int> roots;
    for (int i = 0; i < n; i++) roots.insert(find(find, i));
    return (int)roots.size() + (int)d.free_loops.size();
}

std::vector<std::vector<ArcId>> components(const Diagram& d) {
    for (auto& [id, v] : d.vertices)
        if (v.degree() != 2)
            fail(ErrorKind::Domain,
                 "components: diagram has a vertex of degree != 2 (not a disjoint union of circles)");
    auto ends = arc_endpoints(d);
    std::vector<std::vector<ArcId>> out;
    std::set<ArcId> seen;
    for (ArcId a : d.free_loops) {
        out.push_back({a});
        seen.insert(a);
    }
    for (auto& [a0, ae] : ends) {
        if (seen.count(a0) || !ae.tail.valid()) continue;
        std::vector<ArcId> chain;
        ArcId a = a0;
        while (!seen.count(a)) {
            seen.insert(a);
            chain.push_back(a);
            const End& h = ends.at(a).head;
            if (h.kind == End::Cross) {
                const Crossing& c = d.crossings.at(h.node);
                a = c.slot[(h.slot + 2) % 4];
            } else {
                const FlatVertex& v = d.vertices.at(h.node);
                a = v.slot[1 - h.slot];
            }
        }
        out.push_back(std::move(chain));
    }
    return out;
}

MultiGraph underlying_graph(const Diagram& d) {
    MultiGraph g;
    g.name = "underlying";
    for (auto& [id, v] : d.vertices) g.add_vertex(id);
    std::map<int, std::vector<int>> edge_vertex_touch; // edge id -> vertices (with multiplicity)
    for (auto& [id, v] : d.vertices) {
        for (int s = 0; s < v.degree(); s++) {
            auto it = d.label.find(v.slot[s]);
            if (it == d.label.end())
                fail(ErrorKind::Domain, "underlying_graph: unlabeled arc at a vertex");
            edge_vertex_touch[it->second].push_back(id);
        }
    }
    for (auto& [e, touch] : edge_vertex_touch) {
        if (touch.size() != 2)
            fail(ErrorKind::Domain, "underlying_graph: edge " + std::to_string(e) +
                                        " does not touch exactly two vertex slots");
        g.add_edge(e, touch[0], touch[1]);
    }
    return g;
}

Diagram smooth_deg2(const Diagram& d) {
    Diagram cur = d;
    while (true) {
        int target = -1;
        for (auto& [id, v] : cur.vertices)
            if (v.degree() == 2) { target = id; break; }
        if (target < 0) return cur;
        const FlatVertex v = cur.vertices.at(target);
        if (v.in[0] == v.in[1])
            fail(ErrorKind::Domain, "smooth_deg2: degree-2 vertex with incoherent orientations");
        ArcId in_arc = v.in[0] ? v.slot[0] : v.slot[1];
        ArcId out_arc = v.in[0] ? v.slot[1] : v.slot[0];
        Surgeon s(cur);
        s.remove_vertex(target);
        s.join(in_arc, out_arc);
        cur = s.finish();
    }
}

Diagram mirror(const Diagram& d) {
    Diagram out = d;
    for (auto& [id, c] : out.crossings) {
        std::swap(c.under_in, c.over_in);
        c = normalized(c);
    }
    return out;
}

Diagram reverse_component(const Diagram& d, const std::vector<ArcId>& comp) {
    return reverse_arcs(d, std::set<ArcId>(comp.begin(), comp.end()));
}

Diagram reverse_arcs(const Diagram& d, const std::set<ArcId>& set) {
    Diagram out = d;
    for (auto& [id, c] : out.crossings) {
        bool under_in_comp = set.count(c.slot[c.under_in]) > 0;
        bool under_out_comp = set.count(c.slot[c.under_out()]) > 0;
        bool over_in_comp = set.count(c.slot[c.over_in]) > 0;
        bool over_out_comp = set.count(c.slot[c.over_out()]) > 0;
        if (under_in_comp != under_out_comp || over_in_comp != over_out_comp)
            fail(ErrorKind::Domain, "reverse_arcs: set cuts a strand at crossing " +
                                        std::to_string(id));
        int new_under = c.under_in, new_over = c.over_in;
        if (under_in_comp) new_under = c.under_out();
        if (over_in_comp) new_over = c.over_out();
        c.under_in = new_under;
        c.over_in = new_over;
        c = normalized(c);
    }
    for (auto& [id, v] : out.vertices)
        for (int s = 0; s < v.degree(); s++)
            if (set.count(v.slot[s])) v.in[s] = v.in[s] ? 0 : 1;
    return out;
}

ChainWalk walk_edges(const Diagram& d, const std::set<int>& edges) {
    std::set<ArcId> arcs = d.arcs_of_edges(edges);
    if (arcs.empty()) fail(ErrorKind::Domain, "walk_edges: no arcs carry these edges");
    auto ends = arc_endpoints(d);
    auto in_set = [&](ArcId a) { return arcs.count(a) > 0; };

    // Endpoint = a vertex with exactly one slot in the set.
    int start_v = -1, start_slot = -1;
    for (auto& [vid, v] : d.vertices) {
        int cnt = 0, slot = -1;
        for (int s = 0; s < v.degree(); s++)
            if (in_set(v.slot[s])) { cnt++; slot = s; }
        if (cnt == 1) {
            start_v = vid;
            start_slot = slot;
            break;
        }
        if (cnt > 2) fail(ErrorKind::Domain, "walk_edges: branching chain at vertex");
    }

    ChainWalk out;
    ArcId cur;
    bool fwd;
    if (start_v >= 0) {
        const FlatVertex& v = d.vertices.at(start_v);
        cur = v.slot[start_slot];
        fwd = !v.in[start_slot];
        out.start_vertex = start_v;
    } else {
        out.closed = true;
        cur = *arcs.begin();
        fwd = true;
    }

    ArcId first = cur;
    bool first_fwd = fwd;
    while (true) {
        out.arcs.push_back(cur);
        out.forward.push_back(fwd ? 1 : 0);
        const ArcEnds& ae = ends.at(cur);
        End to = fwd ? ae.head : ae.tail;
        if (to.kind == End::Cross) {
            const Crossing& c = d.crossings.at(to.node);
            int exit = (to.slot + 2) % 4;
            ArcId nxt = c.slot[exit];
            if (!in_set(nxt)) fail(ErrorKind::Domain, "walk_edges: chain leaks at a crossing");
            bool nfwd = !c.incoming(exit);
            cur = nxt;
            fwd = nfwd;
        } else {
            const FlatVertex& v = d.vertices.at(to.node);
            int entry_slot = to.slot;
            int next_slot = -1;
            for (int s = 0; s < v.degree(); s++) {
                if (s == entry_slot || !in_set(v.slot[s])) continue;
                if (next_slot >= 0) fail(ErrorKind::Domain, "walk_edges: branching chain at vertex");
                next_slot = s;
            }
            if (next_slot < 0) {
                out.end_vertex = to.node;
                break;
            }
            cur = v.slot[next_slot];
            fwd = !v.in[next_slot];
        }
        if (out.closed && cur == first && fwd == first_fwd) break;
        if (out.arcs.size() > 2 * arcs.size() + 4)
            fail(ErrorKind::Domain, "walk_edges: chain does not close properly");
    }
    if (!out.closed && out.arcs.size() != arcs.size())
        fail(ErrorKind::Domain, "walk_edges: edge set is not a single chain");
    if (out.closed && out.arcs.size() != arcs.size())
        fail(ErrorKind::Domain, "walk_edges: edge set is not a single closed chain");
    return out;
}

Diagram orient_edge_chain(const Diagram& d, const std::set<int>& edges) {
    ChainWalk w = walk_edges(d, edges);
    std::set<ArcId> flip;
    for (size_t i = 0; i < w.arcs.size(); i++)
        if (!w.forward[i]) flip.insert(w.arcs[i]);
    if (flip.empty()) return d;
    return reverse_arcs(d, flip);
}

Diagram switch_crossing(const Diagram& d, int crossing_id) {
    Diagram out = d;
    auto it = out.crossings.find(crossing_id);
    if (it == out.crossings.end()) fail(ErrorKind::Domain, "switch_crossing: no such crossing");
    std::swap(it->second.under_in, it->second.over_in);
    it->second = normalized(it->second);
    return out;
}

Diagram smooth_crossing(const Diagram& d, int crossing_id) {
    auto it = d.crossings.find(crossing_id);
    if (it == d.crossings.end()) fail(ErrorKind::Domain, "smooth_crossing: no such crossing");
    const Crossing c = it->second;
    ArcId ui = c.slot[c.under_in], uo = c.slot[c.under_out()];
    ArcId oi = c.slot[c.over_in], oo = c.slot[c.over_out()];
    Surgeon s(d);
    s.remove_crossing(crossing_id);
    s.join(ui, oo);
    s.join(oi, uo);
    return s.finish();
}

// Remove a set of crossings together with the "inside" arcs whose two ends
// both lie on removed crossings; every strand entering the region from the
// outside is rewired straight through to where it exits. Strands entirely
// inside become free loops.
Diagram dissolve_region(const Diagram& d, const std::set<int>& region,
                        const std::set<ArcId>& inside_arcs) {
    auto ends = arc_endpoints(d);
    auto other_end_in_region = [&](ArcId a, int node, int slot) -> std::pair<int, int> {
        const ArcEnds& ae = ends.at(a);
        const End* cands[2] = {&ae.tail, &ae.head};
        for (const End* e : cands) {
            if (e->kind == End::Cross && !(e->node == node && e->slot == slot) &&
                region.count(e->node))
                return {e->node, e->slot};
        }
        fail(ErrorKind::Domain, "dissolve: inside arc does not return to the region");
    };

    Surgeon s(d);
    for (int id : region) s.remove_crossing(id);
    std::set<std::pair<int, int>> used_entries;
    for (int id : region) {
        const Crossing& c = d.crossings.at(id);
        for (int slot = 0; slot < 4; slot++) {
            if (!c.incoming(slot)) continue;
            ArcId a_in = c.slot[slot];
            if (inside_arcs.count(a_in)) continue; // entered from inside: skip
            // Trace through the region to the exit arc.
            int node = id, sl = slot;
            ArcId a_out;
            while (true) {
                int exit_slot = (sl + 2) % 4;
                ArcId a = d.crossings.at(node).slot[exit_slot];
                if (!inside_arcs.count(a)) {
                    a_out = a;
                    break;
                }
                auto [n2, s2] = other_end_in_region(a, node, exit_slot);
                node = n2;
                sl = s2;
            }
            s.join(a_in, a_out);
        }
    }
    for (ArcId a : inside_arcs) s.delete_arc(a);
    return s.finish();
}

namespace {

// Kink: a face of length 1 at a crossing.
std::optional<std::pair<int, ArcId>> find_kink(const Diagram& d) {
    for (auto& f : faces(d)) {
        if (f.size() != 1 || f[0].at_vertex) continue;
        int id = f[0].node;
        const Crossing& c = d.crossings.at(id);
        return std::make_pair(id, c.slot[f[0].slot]);
    }
    return std::nullopt;
}

// Bigon face whose two side arcs carry consistent over/under (an R2 pair).
// Returns (crossings, side arcs).
std::optional<std::pair<std::set<int>, std::set<ArcId>>> find_r2_bigon(const Diagram& d) {
    for (auto& f : faces(d)) {
        if (f.size() != 2) continue;
        if (f[0].at_vertex || f[1].at_vertex) continue;
        int x = f[0].node, y = f[1].node;
        if (x == y) continue;
        const Crossing& cx = d.crossings.at(x);
        const Crossing& cy = d.crossings.at(y);
        ArcId a = cx.slot[f[0].slot];
        int slot_a_y = -1;
        for (int t = 0; t < 4; t++)
            if (cy.slot[t] == a) slot_a_y = t;
        if (slot_a_y < 0) continue;
        if (cx.on_under(f[0].slot) != cy.on_under(slot_a_y)) continue;
        std::set<ArcId> sides = {cx.slot[f[0].slot], cy.slot[f[1].slot]};
        return std::make_pair(std::set<int>{x, y}, sides);
    }
    return std::nullopt;
}

} // namespace

Diagram simplify_r1r2(const Diagram& d, int max_rounds) {
    Diagram cur = d;
    for (int round = 0; round < max_rounds; round++) {
        if (auto kink = find_kink(cur)) {
            auto [id, loop_arc] = *kink;
            cur = dissolve_region(cur, {id}, {loop_arc});
            continue;
        }
        if (auto big = find_r2_bigon(cur)) {
            cur = dissolve_region(cur, big->first, big->second);
            continue;
        }
        break;
    }
    return cur;
}

Diagram restrict_to(const Diagram& d, const std::set<int>& keep_vertices,
                    const std::set<int>& keep_edges, std::map<ArcId, ArcId>* arc_map) {
    MultiGraph g = underlying_graph(d);
    // Subgraph precondition.
    for (int e : keep_edges) {
        const GraphEdge* ge = g.edge(e);
        if (!ge) fail(ErrorKind::Domain, "restrict: edge not in underlying graph");
        if (!keep_vertices.count(ge->u) || !keep_vertices.count(ge->v))
            fail(ErrorKind::Domain, "restrict: kept edge with deleted endpoint");
    }
    for (int v : keep_vertices)
        if (!d.vertices.count(v)) fail(ErrorKind::Domain, "restrict: vertex not in diagram");

    auto edge_of = [&](ArcId a) {
        auto it = d.label.find(a);
        if (it == d.label.end()) fail(ErrorKind::Domain, "restrict: unlabeled arc");
        return it->second;
    };

    Surgeon s(d);
    std::set<ArcId> dead_arcs;
    for (auto& [a, e] : d.label)
        if (!keep_edges.count(e)) dead_arcs.insert(a);

    // Crossings: keep, dissolve, or drop.
    for (auto& [id, c] : d.crossings) {
        ArcId ui = c.slot[c.under_in], uo = c.slot[c.under_out()];
        ArcId oi = c.slot[c.over_in], oo = c.slot[c.over_out()];
        bool under_kept = keep_edges.count(edge_of(ui)) > 0;
        bool over_kept = keep_edges.count(edge_of(oi)) > 0;
        if (under_kept && over_kept) continue;
        s.remove_crossing(id);
        if (under_kept) s.join(ui, uo);
        if (over_kept) s.join(oi, oo);
    }

    // Vertices: drop deleted ones, trim dead slots on kept ones.
    for (auto& [id, v] : d.vertices) {
        bool kept = keep_vertices.count(id) > 0;
        bool trimmed = false;
        for (ArcId a : v.slot)
            if (dead_arcs.count(a)) trimmed = true;
        if (kept && !trimmed) continue;
        // Gather surviving ends in ccw order before removing.
        std::vector<std::pair<ArcId, bool>> surviving;
        for (int slot = 0; slot < v.degree(); slot++)
            if (!dead_arcs.count(v.slot[slot]))
                surviving.push_back({v.slot[slot], v.in[slot] != 0});
        s.remove_vertex(id);
        if (!kept) {
            if (!surviving.empty())
                fail(ErrorKind::Domain, "restrict: deleted vertex still has kept edges");
            continue;
        }
        if (surviving.empty())
            fail(ErrorKind::Domain, "restrict: kept vertex would become isolated (degree 0)");
        s.add_vertex(surviving); // fresh id; renamed back below
    }

    for (ArcId a : dead_arcs) s.delete_arc(a);

    std::map<ArcId, ArcId> amap;
    Diagram out = s.finish(&amap);

    // Restore kept vertex ids: add_vertex handed out fresh ids in iteration
    // order; rebuild the id map deterministically.
    {
        std::map<int, int> rename; // fresh -> original
        int fresh = d.fresh_vertex_id();
        for (auto& [id, v] : d.vertices) {
            bool kept = keep_vertices.count(id) > 0;
            bool trimmed = false;
            for (ArcId a : v.slot)
                if (dead_arcs.count(a)) trimmed = true;
            if (kept && trimmed) rename[fresh++] = id;
            else if (kept && !trimmed) {
                // unchanged id
            }
        }
        if (!rename.empty()) {
            Diagram fixed = out;
            fixed.vertices.clear();
            for (auto& [id, v] : out.vertices) {
                auto it = rename.find(id);
                fixed.vertices[it == rename.end() ? id : it->second] = v;
            }
            for (auto& [id, c] : fixed.crossings) (void)c;
            out = fixed;
        }
    }

    // Drop labels and roles of dead edges.
    for (auto it = out.label.begin(); it != out.label.end();) {
        if (!keep_edges.count(it->second)) it = out.label.erase(it);
        else ++it;
    }
    for (auto& [name, ids] : out.roles) {
        std::set<int> kept;
        for (int e : ids)
            if (keep_edges.count(e)) kept.insert(e);
        ids = kept;
    }
    for (auto it = out.roles.begin(); it != out.roles.end();)
        it = it->second.empty() ? out.roles.erase(it) : std::next(it);

    if (arc_map) *arc_map = amap;
    return out;
}

Diagram restrict_to_edges(const Diagram& d, const std::set<int>& keep_edges,
                          std::map<ArcId, ArcId>* arc_map) {
    MultiGraph g = underlying_graph(d);
    std::set<int> vs;
    for (int e : keep_edges) {
        const GraphEdge* ge = g.edge(e);
        if (!ge) fail(ErrorKind::Domain, "restrict: edge not in underlying graph");
        vs.insert(ge->u);
        vs.insert(ge->v);
    }
    return restrict_to(d, vs, keep_edges, arc_map);
}

namespace {

// Renames a vertex id in place (slots keep referencing arcs; only the map key
// and arc bindings move).
Diagram rename_vertex(const Diagram& d, int from, int to) {
    if (from == to) return d;
    Diagram out = d;
    auto it = out.vertices.find(from);
    if (it == out.vertices.end()) fail(ErrorKind::Domain, "rename_vertex: missing");
    if (out.vertices.count(to)) fail(ErrorKind::Domain, "rename_vertex: target exists");
    out.vertices[to] = it->second;
    out.vertices.erase(it);
    return out;
}

// One vertex-through-crossing slide: move vertex w past the first crossing on
// the chain of edge `ell` leaving w. Preserves the diagram up to ambient
// isotopy. Returns false when the chain meets no crossing (contraction can
// finish with a vertex merge).
bool slide_vertex_once(Diagram& d, int w, int ell) {
    auto ends = arc_endpoints(d);
    const FlatVertex& wv = d.vertices.at(w);
    int pslot = -1;
    for (int s = 0; s < wv.degree(); s++) {
        auto it = d.label.find(wv.slot[s]);
        if (it != d.label.end() && it->second == ell) {
            pslot = s;
            break;
        }
    }
    if (pslot < 0) fail(ErrorKind::Domain, "slide: edge not incident to vertex");
    ArcId p = wv.slot[pslot];
    // Far end of p.
    const ArcEnds& pe = ends.at(p);
    End far = (pe.tail.kind == End::Vert && pe.tail.node == w && pe.tail.slot == pslot) ? pe.head
                                                                                        : pe.tail;
    if (far.kind == End::Vert) return false; // crossing-free chain
    int X = far.node;
    const Crossing c = d.crossings.at(X);
    int sx = far.slot;
    int q_slot = (sx + 2) % 4;
    int tN = (sx + 1) % 4; // "north" in the normalized frame
    int tS = (sx + 3) % 4; // "south"
    ArcId q = c.slot[q_slot];
    bool ell_under = c.on_under(sx);
    bool trans_under = !ell_under;
    // Transversal direction: does it enter at the south slot?
    bool enters_south = c.incoming(tS);
    ArcId rS = c.slot[tS], rN = c.slot[tN];
    // Transversal crossing sign data is rebuilt per new crossing from
    // orientations; nothing else of X survives.

    // w's other ends in ccw order starting just after the edge slot.
    int k = wv.degree();
    std::vector<std::pair<ArcId, bool>> ys; // (arc, incoming at w)
    for (int i = 1; i < k; i++) {
        int s = (pslot + i) % k;
        ys.push_back({wv.slot[s], wv.in[s] != 0});
    }

    Surgeon s(d);
    s.remove_crossing(X);
    s.remove_vertex(w);
    // p is now fully dangling.
    s.delete_arc(p);

    int m = (int)ys.size();
    if (m == 0) {
        // Degree-1 vertex: the crossing dissolves and the transversal heals.
        ArcId entry0 = enters_south ? rS : rN;
        ArcId exit0 = enters_south ? rN : rS;
        s.join(entry0, exit0);
        std::vector<std::pair<ArcId, bool>> only = {{q, c.incoming(q_slot)}};
        int neww = s.add_vertex(only);
        Diagram out = s.finish();
        out = rename_vertex(out, neww, w);
        d = out;
        return true;
    }

    // Fresh near pieces run between the moved vertex and the new crossings;
    // each y keeps its far binding. New crossings stack along the transversal
    // south to north in the order ys[0], ys[1], ...
    std::vector<ArcId> nearp(m);
    for (int i = 0; i < m; i++) nearp[i] = s.fresh_arc(s.label_of(s.resolve(ys[i].first)));

    // Travel order along the transversal, entry side first.
    std::vector<int> order(m);
    for (int i = 0; i < m; i++) order[i] = i;
    if (!enters_south) std::reverse(order.begin(), order.end());
    ArcId entry = enters_south ? rS : rN;
    ArcId exit_arc = enters_south ? rN : rS;
    std::vector<ArcId> connector(std::max(0, m - 1));
    for (int i = 0; i + 1 < m; i++) connector[i] = s.fresh_arc(-1);

    // Frame per new crossing: the moved vertex sits on the west side, so the
    // near piece takes the west slot and the far piece the east slot; the
    // transversal runs through north/south. ccw slot order (E, N, W, S).
    for (int step = 0; step < m; step++) {
        int i = order[step];
        ArcId in_t = (step == 0) ? entry : connector[step - 1];
        ArcId out_t = (step == m - 1) ? exit_arc : connector[step];
        auto [yorig, incoming_at_w] = ys[i];
        ArcId yE = s.resolve(yorig), yW = nearp[i];
        // Strand direction: incoming_at_w means far -> w', entering from the
        // east and leaving west.
        bool east_in = incoming_at_w;
        std::array<std::pair<ArcId, bool>, 4> endsarr;
        endsarr[0] = {yE, east_in};
        endsarr[2] = {yW, !east_in};
        endsarr[1] = {enters_south ? out_t : in_t, !enters_south};
        endsarr[3] = {enters_south ? in_t : out_t, enters_south};
        int under_in, over_in;
        if (trans_under) {
            under_in = enters_south ? 3 : 1;
            over_in = east_in ? 0 : 2;
        } else {
            under_in = east_in ? 0 : 2;
            over_in = enters_south ? 3 : 1;
        }
        s.add_crossing(endsarr, under_in, over_in);
    }

    // Rebuild the vertex on the far side of the transversal: the edge slot now
    // carries q, the other slots the near pieces in the original ccw order.
    std::vector<std::pair<ArcId, bool>> wports;
    wports.push_back({q, c.incoming(q_slot)});
    for (int i = 0; i < m; i++) wports.push_back({nearp[i], ys[i].second});
    int neww = s.add_vertex(wports);

    Diagram out = s.finish();
    out = rename_vertex(out, neww, w);
    d = out;
    return true;
}

} // namespace

Diagram contract_edges(const Diagram& d0, const std::vector<int>& edge_labels) {
    Diagram d = d0;
    for (int ell : edge_labels) {
        MultiGraph g = underlying_graph(d);
        const GraphEdge* ge = g.edge(ell);
        if (!ge) fail(ErrorKind::Domain, "contract: no such edge");
        if (ge->is_loop()) fail(ErrorKind::Domain, "contract: contracting a loop");
        // Slide the larger-id endpoint until the chain is crossing free.
        while (true) {
            MultiGraph gg = underlying_graph(d);
            const GraphEdge* e = gg.edge(ell);
            int w = std::max(e->u, e->v);
            if (!slide_vertex_once(d, w, ell)) break;
        }
        // Merge endpoints: splice cyclic orders at the contracted slots.
        MultiGraph gg = underlying_graph(d);
        const GraphEdge* e = gg.edge(ell);
        int u = std::min(e->u, e->v), w = std::max(e->u, e->v);
        const FlatVertex& uv = d.vertices.at(u);
        const FlatVertex& wv = d.vertices.at(w);
        int us = -1, wslot = -1;
        for (int s = 0; s < uv.degree(); s++)
            if (d.label.count(uv.slot[s]) && d.label.at(uv.slot[s]) == ell) us = s;
        for (int s = 0; s < wv.degree(); s++)
            if (d.label.count(wv.slot[s]) && d.label.at(wv.slot[s]) == ell) wslot = s;
        if (us < 0 || wslot < 0) fail(ErrorKind::Domain, "contract: lost edge slots");
        ArcId chain_arc = uv.slot[us];

        std::vector<std::pair<ArcId, bool>> ports;
        for (int i = 1; i < uv.degree(); i++) {
            int s = (us + i) % uv.degree();
            ports.push_back({uv.slot[s], uv.in[s] != 0});
        }
        // Replace the contracted slot with w's fan, ccw order starting just
        // after w's edge slot. Insert at the position where u's edge slot was:
        // build u's list rotated to start right after the edge slot, then
        // append w's fan at the end (which is the slot position), preserving
        // the cyclic order (..., A, x1..xk, B, ...).
        std::vector<std::pair<ArcId, bool>> wfan;
        for (int i = 1; i < wv.degree(); i++) {
            int s = (wslot + i) % wv.degree();
            wfan.push_back({wv.slot[s], wv.in[s] != 0});
        }
        std::vector<std::pair<ArcId, bool>> merged = ports; // starts after edge slot at u
        merged.insert(merged.end(), wfan.begin(), wfan.end());

        Surgeon s(d);
        s.remove_vertex(u);
        s.remove_vertex(w);
        s.delete_arc(chain_arc);
        int nid = s.add_vertex(merged);
        Diagram out = s.finish();
        out = rename_vertex(out, nid, u);
        // Drop the contracted edge's label everywhere.
        for (auto it = out.label.begin(); it != out.label.end();) {
            if (it->second == ell) it = out.label.erase(it);
            else ++it;
        }
        for (auto& [name, ids] : out.roles) ids.erase(ell);
        d = out;
    }
    return d;
}

// ---------------------------------------------------------------------------
// Validation

std::string ValidationReport::to_string() const {
    std::string s;
    for (auto& v : violations) {
        s += v;
        s += "\n";
    }
    return s;
}

ValidationReport validate(const Diagram& d) {
    ValidationReport rep;
    auto note = [&](const std::string& s) { rep.violations.push_back(s); };

    for (auto& [id, v] : d.vertices)
        if (v.degree() == 0) note("flat vertex " + std::to_string(id) + " has degree 0");
    for (auto& [id, v] : d.vertices)
        if (v.slot.size() != v.in.size())
            note("flat vertex " + std::to_string(id) + " slot/in size mismatch");
    for (auto& [id, c] : d.crossings)
        if (!c.well_formed()) note("crossing " + std::to_string(id) + " has malformed slot roles");

    std::map<ArcId, ArcEnds> ends;
    try {
        ends = arc_endpoints(d);
    } catch (const Error& e) {
        note(e.what());
        return rep;
    }

    // Strand labels must agree across each crossing.
    for (auto& [id, c] : d.crossings) {
        auto lab = [&](ArcId a) {
            auto it = d.label.find(a);
            return it == d.label.end() ? -1 : it->second;
        };
        if (lab(c.slot[c.under_in]) != lab(c.slot[c.under_out()]))
            note("crossing " + std::to_string(id) + ": under-strand labels disagree");
        if (lab(c.slot[c.over_in]) != lab(c.slot[c.over_out()]))
            note("crossing " + std::to_string(id) + ": over-strand labels disagree");
    }

    // Each labeled edge must form one chain touching vertices exactly at its
    // two endpoint slots (or none, for a closed labeled component).
    {
        std::map<int, int> vertex_touch;
        std::map<int, int> arc_count;
        for (auto& [a, e] : d.label) arc_count[e]++;
        for (auto& [id, v] : d.vertices)
            for (ArcId a : v.slot) {
                auto it = d.label.find(a);
                if (it != d.label.end()) vertex_touch[it->second]++;
            }
        for (auto& [e, n] : vertex_touch)
            if (n != 0 && n != 2)
                note("edge " + std::to_string(e) + " touches vertices at " + std::to_string(n) +
                     " slots (expected 2)");
        (void)arc_count;
    }

    // Euler characteristic per connected piece: F = E - V + 2.
    {
        // Build per-piece counts via union-find over nodes.
        std::map<std::pair<int, int>, int> nid;
        int n = 0;
        for (auto& [id, c] : d.crossings) nid[{0, id}] = n++;
        for (auto& [id, v] : d.vertices) nid[{1, id}] = n++;
        std::vector<int> uf(n);
        for (int i = 0; i < n; i++) uf[i] = i;
        auto find = [&](auto&& self, int x) -> int {
            return uf[x] == x ? x : uf[x] = self(self, uf[x]);
        };
        std::map<ArcId, std::pair<int, int>> arc_piece; // arc -> (node idx tail)
        for (auto& [a, ae] : ends) {
            if (!ae.tail.valid()) continue;
            int x = nid[{ae.tail.kind == End::Vert ? 1 : 0, ae.tail.node}];
            int y = nid[{ae.head.kind == End::Vert ? 1 : 0, ae.head.node}];
            uf[find(find, x)] = find(find, y);
            arc_piece[a] = {x, y};
        }
        std::map<int, int> V, E, F;
        for (auto& [key, idx] : nid) V[find(find, idx)]++;
        for (auto& [a, xy] : arc_piece) E[find(find, xy.first)]++;
        for (auto& f : faces(d)) {
            const Dart& dd = f.front();
            int idx = nid[{dd.at_vertex ? 1 : 0, dd.node}];
            F[find(find, idx)]++;
        }
        for (auto& [root, v] : V) {
            int e = E.count(root) ? E[root] : 0;
            int ff = F.count(root) ? F[root] : 0;
            if (ff != e - v + 2)
                note("Euler check failed on a connected piece: V=" + std::to_string(v) +
                     " E=" + std::to_string(e) + " F=" + std::to_string(ff));
        }
    }

    if (d.basepoint && !d.arcs().count(*d.basepoint)) note("basepoint arc does not exist");
    return rep;
}

void require_valid(const Diagram& d) {
    ValidationReport rep = validate(d);
    if (!rep.ok()) fail(ErrorKind::Validate, rep.violations.front());
}

// ---------------------------------------------------------------------------
// Text format

namespace {

// Orientation recovery for crossing records: slot b (index 1) and slot d
// (index 3) hold the over-strand; which one is the entry follows from global
// consistency of arc directions. Components with no forced direction fall
// back to "b enters" at their smallest crossing.
struct OrientSolver {
    // parity union-find: value(x) = value(parent) XOR parity
    std::map<int, std::pair<int, int>> uf; // id -> (parent, parity)
    static constexpr int kTrue = -1;       // virtual anchor with value 1

    void ensure(int x) {
        if (!uf.count(x)) uf[x] = {x, 0};
    }
    std::pair<int, int> find(int x) {
        ensure(x);
        auto [p, par] = uf[x];
        if (p == x) return {x, 0};
        auto [r, rpar] = find(p);
        uf[x] = {r, par ^ rpar};
        return {r, par ^ rpar};
    }
    // x XOR y == parity
    bool relate(int x, int y, int parity) {
        auto [rx, px] = find(x);
        auto [ry, py] = find(y);
        if (rx == ry) return (px ^ py) == parity;
        uf[rx] = {ry, px ^ py ^ parity};
        return true;
    }
    std::optional<int> value(int x) {
        auto [r, p] = find(x);
        auto [rk, pk] = find(kTrue);
        if (r != rk) return std::nullopt;
        return 1 ^ pk ^ p; // anchor holds value 1
    }
};

} // namespace

Diagram parse_diagram(const std::string& text) {
    Diagram d;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    struct XRec {
        int id;
        std::array<int, 4> f;
        int line;
    };
    std::vector<XRec> xrecs;

    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        auto syntax = [&](const std::string& what) {
            fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": " + what);
        };
        if (tok == "sgd") {
            int ver;
            if (!(ls >> ver) || ver != 1) syntax("unsupported sgd version");
            header = true;
        } else if (tok == "x") {
            XRec r;
            r.line = lineno;
            if (!(ls >> r.id >> r.f[0] >> r.f[1] >> r.f[2] >> r.f[3])) syntax("bad crossing record");
            xrecs.push_back(r);
        } else if (tok == "v") {
            int id;
            if (!(ls >> id)) syntax("bad vertex record");
            FlatVertex v;
            std::string t;
            while (ls >> t) {
                if (t.size() < 2 || (t[0] != '+' && t[0] != '-')) syntax("bad vertex slot token");
                int arc = 0;
                try {
                    arc = std::stoi(t.substr(1));
                } catch (...) {
                    syntax("bad vertex slot token");
                }
                v.slot.push_back(arc);
                v.in.push_back(t[0] == '-' ? 1 : 0);
            }
            if (d.vertices.count(id)) syntax("duplicate vertex id");
            d.vertices[id] = v;
        } else if (tok == "arc") {
            int id;
            if (!(ls >> id)) syntax("bad arc record");
            d.free_loops.insert(id); // trimmed below if the arc is bound
        } else if (tok == "label") {
            int arc, edge;
            if (!(ls >> arc >> edge)) syntax("bad label record");
            d.label[arc] = edge;
        } else if (tok == "role") {
            std::string role;
            int edge;
            if (!(ls >> role >> edge)) syntax("bad role record");
            static const std::set<std::string> roles = {"loop1", "loop2", "edge", "e1", "e2",
                                                        "e3",    "e4",    "e5",   "e6"};
            if (!roles.count(role)) syntax("unknown role '" + role + "'");
            d.roles[role].insert(edge);
        } else {
            syntax("unknown record '" + tok + "'");
        }
    }
    if (!header) fail(ErrorKind::Parse, "missing 'sgd 1' header");

    // Install crossings; declared arcs that turn out bound are not free loops.
    for (auto& r : xrecs) {
        if (d.crossings.count(r.id))
            fail(ErrorKind::Parse, "line " + std::to_string(r.line) + ": duplicate crossing id");
        Crossing c;
        for (int s = 0; s < 4; s++) c.slot[s] = r.f[s];
        c.under_in = 0;
        c.over_in = 1; // provisional; fixed below
        d.crossings[r.id] = c;
    }
    for (auto& [id, c] : d.crossings)
        for (ArcId a : c.slot) d.free_loops.erase(a);
    for (auto& [id, v] : d.vertices)
        for (ArcId a : v.slot) d.free_loops.erase(a);

    // Recover over-strand directions. Occurrence head-ness:
    //   crossing slot0: head, slot2: tail, slot1: var(c), slot3: !var(c)
    //   vertex slot: explicit.
    {
        struct Occ {
            int anchor;  // crossing id for var occurrences, kTrue for constants
            int parity;  // head-ness = value(anchor) XOR parity
        };
        std::map<ArcId, std::vector<Occ>> occ;
        for (auto& [id, c] : d.crossings) {
            occ[c.slot[0]].push_back({OrientSolver::kTrue, 0}); // head
            occ[c.slot[2]].push_back({OrientSolver::kTrue, 1}); // tail
            occ[c.slot[1]].push_back({id, 0});
            occ[c.slot[3]].push_back({id, 1});
        }
        for (auto& [id, v] : d.vertices)
            for (int s = 0; s < v.degree(); s++)
                occ[v.slot[s]].push_back({OrientSolver::kTrue, v.in[s] ? 0 : 1});

        OrientSolver solver;
        solver.ensure(OrientSolver::kTrue);
        for (auto& [a, os] : occ) {
            if (os.size() != 2)
                fail(ErrorKind::Parse, "arc multiplicity: arc " + std::to_string(a) + " used " +
                                           std::to_string(os.size()) + " times");
            // head(o1) XOR head(o2) = 1
            if (!solver.relate(os[0].anchor, os[1].anchor, 1 ^ os[0].parity ^ os[1].parity))
                fail(ErrorKind::Parse, "inconsistent strand orientations at arc " + std::to_string(a));
        }
        for (auto& [id, c] : d.crossings) {
            auto v = solver.value(id);
            if (!v) {
                // Unforced component: slot b is the incoming over-arc here.
                solver.relate(id, OrientSolver::kTrue, 0);
                v = 1;
            }
            d.crossings[id].over_in = (*v == 1) ? 1 : 3;
        }
    }

    require_valid(d);
    return d;
}

std::string serialize(const Diagram& d) {
    std::ostringstream os;
    os << "sgd 1\n";
    for (auto& [id, c] : d.crossings) {
        os << "x " << id;
        for (int i = 0; i < 4; i++) os << " " << c.slot[(c.under_in + i) % 4];
        os << "\n";
    }
    for (auto& [id, v] : d.vertices) {
        os << "v " << id;
        for (int s = 0; s < v.degree(); s++)
            os << " " << (v.in[s] ? '-' : '+') << v.slot[s];
        os << "\n";
    }
    for (ArcId a : d.free_loops) os << "arc " << a << "\n";
    for (auto& [a, e] : d.label) os << "label " << a << " " << e << "\n";
    for (auto& [r, ids] : d.roles)
        for (int e : ids) os << "role " << r << " " << e << "\n";
    return os.str();
}

std::string skein_key(const Diagram& d) {
    std::ostringstream os;
    for (auto& [id, c] : d.crossings) {
        os << id << "(";
        for (int i = 0; i < 4; i++) os << c.slot[i] << (c.incoming(i) ? 'i' : 'o');
        os << c.under_in << c.over_in << ")";
    }
    os << "|";
    for (ArcId a : d.free_loops) os << a << ",";
    return os.str();
}

} // namespace sg
