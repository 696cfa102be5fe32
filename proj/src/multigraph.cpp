#include "sg/multigraph.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <sstream>

namespace sg {

bool MultiGraph::has_vertex(int v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

const GraphEdge* MultiGraph::edge(int id) const {
    for (const auto& e : edges)
        if (e.id == id) return &e;
    return nullptr;
}

int MultiGraph::degree(int v) const {
    int d = 0;
    for (const auto& e : edges) {
        if (e.u == v) d++;
        if (e.v == v) d++;
    }
    return d;
}

std::vector<int> MultiGraph::neighbors(int v) const {
    std::set<int> out;
    for (const auto& e : edges) {
        if (e.u == v && e.v != v) out.insert(e.v);
        if (e.v == v && e.u != v) out.insert(e.u);
    }
    return {out.begin(), out.end()};
}

void MultiGraph::add_vertex(int v) { vertices.push_back(v); }

void MultiGraph::add_edge(int id, int u, int v) { edges.push_back({id, u, v}); }

int MultiGraph::fresh_vertex_id() const {
    int m = 0;
    for (int v : vertices) m = std::max(m, v + 1);
    return m;
}

int MultiGraph::fresh_edge_id() const {
    int m = 0;
    for (const auto& e : edges) m = std::max(m, e.id + 1);
    return m;
}

void MultiGraph::check() const {
    std::set<int> vs(vertices.begin(), vertices.end());
    if (vs.size() != vertices.size()) fail(ErrorKind::Validate, "duplicate vertex id");
    std::set<int> es;
    for (const auto& e : edges) {
        if (!es.insert(e.id).second) fail(ErrorKind::Validate, "duplicate edge id");
        if (!vs.count(e.u) || !vs.count(e.v))
            fail(ErrorKind::Validate, "edge endpoint references missing vertex");
    }
}

std::set<int> Cycle::vertex_set() const {
    return {vertex_seq.begin(), vertex_seq.end()};
}

std::set<int> Cycle::edge_set() const {
    return {edge_ids.begin(), edge_ids.end()};
}

std::vector<Cycle> cycles(const MultiGraph& g) {
    g.check();
    std::vector<Cycle> out;

    // Loop edges are 1-edge cycles.
    for (const auto& e : g.edges)
        if (e.is_loop()) out.push_back({{e.id}, {e.u}});

    // Parallel pairs are 2-edge cycles.
    for (size_t i = 0; i < g.edges.size(); i++) {
        for (size_t j = i + 1; j < g.edges.size(); j++) {
            const auto& a = g.edges[i];
            const auto& b = g.edges[j];
            if (a.is_loop() || b.is_loop()) continue;
            if ((a.u == b.u && a.v == b.v) || (a.u == b.v && a.v == b.u))
                out.push_back({{a.id, b.id}, {a.u, a.v}});
        }
    }

    // Longer cycles: backtracking paths anchored at their smallest vertex;
    // traversal direction fixed by requiring second vertex < last vertex.
    std::map<int, std::vector<const GraphEdge*>> inc;
    for (const auto& e : g.edges) {
        if (e.is_loop()) continue;
        inc[e.u].push_back(&e);
        inc[e.v].push_back(&e);
    }
    std::vector<int> vs = g.vertices;
    std::sort(vs.begin(), vs.end());

    std::vector<int> path_v;
    std::vector<int> path_e;
    std::set<int> used;

    auto dfs = [&](auto&& self, int anchor, int cur) -> void {
        for (const GraphEdge* e : inc[cur]) {
            int nxt = (e->u == cur) ? e->v : e->u;
            if (nxt == anchor) {
                if (path_v.size() >= 3 && path_v[1] < path_v.back()) {
                    Cycle c;
                    c.vertex_seq = path_v;
                    c.edge_ids = path_e;
                    c.edge_ids.push_back(e->id);
                    out.push_back(std::move(c));
                }
                continue;
            }
            if (nxt < anchor || used.count(nxt)) continue;
            used.insert(nxt);
            path_v.push_back(nxt);
            path_e.push_back(e->id);
            self(self, anchor, nxt);
            path_e.pop_back();
            path_v.pop_back();
            used.erase(nxt);
        }
    };

    for (int a : vs) {
        path_v = {a};
        path_e = {};
        used = {a};
        dfs(dfs, a, a);
    }
    return out;
}

std::vector<std::pair<Cycle, Cycle>> disjoint_cycle_pairs(const MultiGraph& g) {
    auto cs = cycles(g);
    std::vector<std::set<int>> vsets;
    vsets.reserve(cs.size());
    for (const auto& c : cs) vsets.push_back(c.vertex_set());
    std::vector<std::pair<Cycle, Cycle>> out;
    for (size_t i = 0; i < cs.size(); i++) {
        for (size_t j = i + 1; j < cs.size(); j++) {
            bool disjoint = true;
            for (int v : vsets[i])
                if (vsets[j].count(v)) { disjoint = false; break; }
            if (disjoint) out.emplace_back(cs[i], cs[j]);
        }
    }
    return out;
}

MultiGraph nabla_y(const MultiGraph& g, const Cycle& t) {
    if (t.edge_ids.size() != 3 || t.vertex_set().size() != 3)
        fail(ErrorKind::Domain, "nabla-Y site is not a triangle on three distinct vertices");
    for (int id : t.edge_ids) {
        const GraphEdge* e = g.edge(id);
        if (!e || e->is_loop()) fail(ErrorKind::Domain, "nabla-Y site edge malformed");
    }
    MultiGraph out = g;
    std::set<int> drop(t.edge_ids.begin(), t.edge_ids.end());
    out.edges.erase(std::remove_if(out.edges.begin(), out.edges.end(),
                                   [&](const GraphEdge& e) { return drop.count(e.id) > 0; }),
                    out.edges.end());
    int w = out.fresh_vertex_id();
    out.add_vertex(w);
    int eid = out.fresh_edge_id();
    for (int corner : t.vertex_set()) out.add_edge(eid++, w, corner);
    return out;
}

MultiGraph y_nabla(const MultiGraph& g, int v) {
    auto nb = g.neighbors(v);
    if (g.degree(v) != 3 || nb.size() != 3)
        fail(ErrorKind::Domain, "Y-nabla site must have degree 3 with three distinct neighbors");
    MultiGraph out;
    out.name = g.name;
    for (int x : g.vertices)
        if (x != v) out.add_vertex(x);
    for (const auto& e : g.edges)
        if (e.u != v && e.v != v) out.edges.push_back(e);
    int eid = out.fresh_edge_id();
    out.add_edge(eid++, nb[0], nb[1]);
    out.add_edge(eid++, nb[1], nb[2]);
    out.add_edge(eid++, nb[0], nb[2]);
    return out;
}

MultiGraph simplified(const MultiGraph& g) {
    MultiGraph out;
    out.name = g.name;
    out.vertices = g.vertices;
    std::set<std::pair<int, int>> seen;
    for (const auto& e : g.edges) {
        if (e.is_loop()) continue;
        auto key = std::minmax(e.u, e.v);
        if (seen.insert({key.first, key.second}).second) out.edges.push_back(e);
    }
    return out;
}

namespace {

// Canonical labeling by exhaustive vertex-permutation search with prefix
// pruning. Row key at position k: vertex degree in the high bits, adjacency
// to the already-placed prefix in the low bits; the canonical form is the
// lexicographically maximal row sequence. Adequate for <= ~12 vertices.
struct Canon {
    int n;
    std::vector<uint32_t> adj; // bitmask adjacency, vertices 0..n-1
    std::vector<int> deg;
    std::vector<uint64_t> rows, best;
    std::vector<int> perm;
    std::vector<char> used;
    bool have = false;

    uint64_t key(int u, int k) const {
        uint32_t r = 0;
        for (int j = 0; j < k; j++)
            if ((adj[u] >> perm[j]) & 1u) r |= (1u << j);
        return (uint64_t(deg[u]) << 32) | r;
    }

    void dfs(int k, bool tight) {
        if (k == n) {
            if (!have || rows > best) { best = rows; have = true; }
            return;
        }
        for (int u = 0; u < n; u++) {
            if (used[u]) continue;
            uint64_t r = key(u, k);
            bool next_tight = tight;
            if (have && tight) {
                if (r < best[k]) continue;
                next_tight = (r == best[k]);
            }
            used[u] = 1;
            perm.push_back(u);
            rows.push_back(r);
            dfs(k + 1, next_tight);
            rows.pop_back();
            perm.pop_back();
            used[u] = 0;
        }
    }
};

} // namespace

std::string canonical_form(const MultiGraph& g0) {
    MultiGraph g = simplified(g0);
    std::vector<int> vs = g.vertices;
    std::sort(vs.begin(), vs.end());
    int n = (int)vs.size();
    if (n == 0) return "0:";
    if (n > 16) fail(ErrorKind::Domain, "canonical_form limited to 16 vertices");
    std::map<int, int> idx;
    for (int i = 0; i < n; i++) idx[vs[i]] = i;

    Canon c;
    c.n = n;
    c.adj.assign(n, 0);
    for (const auto& e : g.edges) {
        c.adj[idx[e.u]] |= (1u << idx[e.v]);
        c.adj[idx[e.v]] |= (1u << idx[e.u]);
    }
    c.deg.assign(n, 0);
    for (int i = 0; i < n; i++) c.deg[i] = __builtin_popcount(c.adj[i]);
    c.used.assign(n, 0);
    c.dfs(0, true);

    std::ostringstream os;
    os << n << ":";
    for (uint64_t r : c.best) os << r << ",";
    return os.str();
}

bool isomorphic(const MultiGraph& a, const MultiGraph& b) {
    MultiGraph sa = simplified(a), sb = simplified(b);
    if (sa.vertices.size() != sb.vertices.size()) return false;
    if (sa.edges.size() != sb.edges.size()) return false;
    std::vector<int> da, db;
    for (int v : sa.vertices) da.push_back(sa.degree(v));
    for (int v : sb.vertices) db.push_back(sb.degree(v));
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    if (da != db) return false;
    return canonical_form(sa) == canonical_form(sb);
}

MultiGraph complete_graph(int n) {
    MultiGraph g;
    g.name = "K" + std::to_string(n);
    for (int i = 0; i < n; i++) g.add_vertex(i);
    int id = 0;
    for (int i = 0; i < n; i++)
        for (int j = i + 1; j < n; j++) g.add_edge(id++, i, j);
    return g;
}

MultiGraph petersen_graph() {
    MultiGraph g;
    g.name = "petersen";
    for (int i = 0; i < 10; i++) g.add_vertex(i);
    int id = 0;
    for (int i = 0; i < 5; i++) g.add_edge(id++, i, (i + 1) % 5);          // outer 5-cycle
    for (int i = 0; i < 5; i++) g.add_edge(id++, 5 + i, 5 + (i + 2) % 5);  // inner pentagram
    for (int i = 0; i < 5; i++) g.add_edge(id++, i, 5 + i);                // spokes
    return g;
}

MultiGraph handcuff_graph() {
    MultiGraph g;
    g.name = "H";
    g.add_vertex(0);
    g.add_vertex(1);
    g.add_edge(0, 0, 0); // loop 1
    g.add_edge(1, 1, 1); // loop 2
    g.add_edge(2, 0, 1); // joining edge
    return g;
}

std::vector<MultiGraph> petersen_family() {
    std::vector<MultiGraph> family;
    std::vector<std::string> forms;
    std::deque<MultiGraph> queue;

    auto try_add = [&](MultiGraph g) {
        g = simplified(g);
        std::string f = canonical_form(g);
        if (std::find(forms.begin(), forms.end(), f) != forms.end()) return;
        forms.push_back(f);
        family.push_back(g);
        queue.push_back(g);
    };

    try_add(complete_graph(6));
    while (!queue.empty()) {
        MultiGraph g = queue.front();
        queue.pop_front();
        for (const Cycle& c : cycles(g)) {
            if (c.edge_ids.size() != 3) continue;
            try_add(nabla_y(g, c));
        }
        for (int v : g.vertices) {
            if (g.degree(v) != 3 || g.neighbors(v).size() != 3) continue;
            MultiGraph h = simplified(y_nabla(g, v));
            // Exchanges within the family preserve the edge count; a Y-nabla
            // whose triangle collapses onto existing edges leaves it.
            if (h.edges.size() != g.edges.size()) continue;
            try_add(h);
        }
    }

    for (auto& g : family) {
        if (isomorphic(g, complete_graph(6))) g.name = "K6";
        else if (isomorphic(g, petersen_graph())) g.name = "petersen";
        else g.name = "pf" + std::to_string(g.vertices.size()) + "v";
    }
    std::map<std::string, int> counts;
    for (auto& g : family) counts[g.name]++;
    std::map<std::string, int> seen;
    for (auto& g : family) {
        if (counts[g.name] > 1) {
            int c = seen[g.name]++;
            g.name += std::string(1, char('a' + c));
        }
    }
    std::stable_sort(family.begin(), family.end(),
                     [](const MultiGraph& a, const MultiGraph& b) {
                         return a.vertices.size() < b.vertices.size();
                     });
    return family;
}

MultiGraph star_connect(const MultiGraph& p, const MultiGraph& q, int k,
                        const std::vector<std::pair<int, int>>& attachment,
                        std::vector<int>* bridge_ids, std::vector<int>* q_vertex_map) {
    if ((int)attachment.size() != k)
        fail(ErrorKind::Domain, "attachment list size does not match k");
    std::set<int> pside, qside;
    for (auto [a, b] : attachment) {
        if (!p.has_vertex(a) || !q.has_vertex(b))
            fail(ErrorKind::Domain, "attachment vertex missing from factor");
        if (!pside.insert(a).second || !qside.insert(b).second)
            fail(ErrorKind::Domain, "attachment vertices overlap");
    }
    MultiGraph out = p;
    out.name = p.name + "*" + std::to_string(k) + q.name;
    int voff = out.fresh_vertex_id();
    std::map<int, int> vmap;
    {
        std::vector<int> qs = q.vertices;
        std::sort(qs.begin(), qs.end());
        for (int v : qs) {
            vmap[v] = voff++;
            out.add_vertex(vmap[v]);
        }
    }
    int eid = out.fresh_edge_id();
    for (const auto& e : q.edges) out.add_edge(eid++, vmap[e.u], vmap[e.v]);
    if (q_vertex_map) {
        q_vertex_map->clear();
        for (auto [orig, renamed] : vmap) {
            (void)orig;
            q_vertex_map->push_back(renamed);
        }
    }
    if (bridge_ids) bridge_ids->clear();
    for (auto [a, b] : attachment) {
        if (bridge_ids) bridge_ids->push_back(eid);
        out.add_edge(eid++, a, vmap[b]);
    }
    return out;
}

namespace {

// Minor embedding search: pick a root for every h-vertex, then grow branch
// sets one free vertex at a time until every h-edge sees an adjacency.
// Complete for existence (every minimal model is reachable this way).
struct MinorSearch {
    int k;
    std::vector<std::pair<int, int>> h_edges;
    std::vector<int> h_ids;
    std::vector<int> gverts;
    std::vector<uint32_t> gadj;
    long long budget;
    std::vector<int> assign; // g index -> branch, -1 free
    std::optional<MinorWitness> result;

    MinorSearch(const MultiGraph& g_, const MultiGraph& h, long long budget_) : budget(budget_) {
        MultiGraph hs = simplified(h);
        h_ids = hs.vertices;
        std::sort(h_ids.begin(), h_ids.end(), [&](int a, int b) {
            int da = hs.degree(a), db = hs.degree(b);
            return da != db ? da > db : a < b;
        });
        std::map<int, int> hidx;
        k = (int)h_ids.size();
        for (int i = 0; i < k; i++) hidx[h_ids[i]] = i;
        for (const auto& e : hs.edges) h_edges.push_back({hidx[e.u], hidx[e.v]});
        std::sort(h_edges.begin(), h_edges.end());

        MultiGraph gs = simplified(g_);
        gverts = gs.vertices;
        std::sort(gverts.begin(), gverts.end(), [&](int a, int b) {
            int da = gs.degree(a), db = gs.degree(b);
            return da != db ? da > db : a < b;
        });
        int n = (int)gverts.size();
        std::map<int, int> gidx;
        for (int i = 0; i < n; i++) gidx[gverts[i]] = i;
        gadj.assign(n, 0);
        for (const auto& e : gs.edges) {
            gadj[gidx[e.u]] |= (1u << gidx[e.v]);
            gadj[gidx[e.v]] |= (1u << gidx[e.u]);
        }
        assign.assign(n, -1);
    }

    void tick() {
        if (--budget < 0) fail(ErrorKind::Budget, "minor search node budget exhausted");
    }

    uint32_t branch_mask(int b) const {
        uint32_t m = 0;
        for (int x = 0; x < (int)assign.size(); x++)
            if (assign[x] == b) m |= (1u << x);
        return m;
    }

    uint32_t free_mask() const {
        uint32_t m = 0;
        for (int x = 0; x < (int)assign.size(); x++)
            if (assign[x] == -1) m |= (1u << x);
        return m;
    }

    bool adjacent(uint32_t a, uint32_t b) const {
        for (int x = 0; x < (int)assign.size(); x++)
            if ((a >> x) & 1u)
                if (gadj[x] & b) return true;
        return false;
    }

    // Reachability of branch bj from branch bi through free vertices.
    bool connectable(int bi, int bj) const {
        uint32_t cur = branch_mask(bi), target = branch_mask(bj), free = free_mask();
        while (true) {
            if (adjacent(cur, target)) return true;
            uint32_t grow = 0;
            for (int x = 0; x < (int)assign.size(); x++)
                if ((free >> x) & 1u)
                    if (gadj[x] & cur) grow |= (1u << x);
            if (!grow) return false;
            cur |= grow;
            free &= ~grow;
        }
    }

    bool satisfy(size_t ei) {
        tick();
        if (ei == h_edges.size()) {
            MinorWitness w;
            for (int x = 0; x < (int)assign.size(); x++)
                if (assign[x] >= 0) w.branch_sets[h_ids[assign[x]]].push_back(gverts[x]);
            result = w;
            return true;
        }
        auto [bi, bj] = h_edges[ei];
        if (adjacent(branch_mask(bi), branch_mask(bj))) return satisfy(ei + 1);
        // Check that every remaining edge is still connectable before branching.
        for (size_t e = ei; e < h_edges.size(); e++)
            if (!connectable(h_edges[e].first, h_edges[e].second)) return false;
        int n = (int)assign.size();
        for (int side = 0; side < 2; side++) {
            int b = side == 0 ? bi : bj;
            uint32_t bm = branch_mask(b);
            for (int z = 0; z < n; z++) {
                if (assign[z] != -1 || !(gadj[z] & bm)) continue;
                assign[z] = b;
                if (satisfy(ei)) return true;
                assign[z] = -1;
            }
        }
        return false;
    }

    bool place_roots(int i) {
        tick();
        if (i == k) return satisfy(0);
        int n = (int)assign.size();
        for (int x = 0; x < n; x++) {
            if (assign[x] != -1) continue;
            assign[x] = i;
            if (place_roots(i + 1)) return true;
            assign[x] = -1;
        }
        return false;
    }
};

} // namespace

std::optional<MinorWitness> find_minor(const MultiGraph& g, const MultiGraph& h,
                                       const MinorOptions& opts) {
    MultiGraph gs = simplified(g), hs = simplified(h);
    if (hs.vertices.size() > gs.vertices.size()) return std::nullopt;
    if (hs.edges.size() > gs.edges.size()) return std::nullopt;
    if (gs.vertices.size() > 15)
        fail(ErrorKind::Domain, "minor search limited to hosts with <= 15 vertices");
    MinorSearch s(g, h, opts.node_budget);
    s.place_roots(0);
    return s.result;
}

bool has_minor(const MultiGraph& g, const MultiGraph& h, const MinorOptions& opts) {
    return find_minor(g, h, opts).has_value();
}

LinkedCert is_intrinsically_linked_cert(const MultiGraph& g, const MinorOptions& opts) {
    LinkedCert cert;
    bool budget_hit = false;
    for (const MultiGraph& member : petersen_family()) {
        try {
            auto w = find_minor(g, member, opts);
            if (w) {
                cert.status = LinkedStatus::CertifiedLinked;
                cert.family_member = member.name;
                cert.witness = *w;
                return cert;
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Budget) budget_hit = true;
            else throw;
        }
    }
    cert.status = budget_hit ? LinkedStatus::Unknown : LinkedStatus::NotLinked;
    return cert;
}

MultiGraph parse_graph(const std::string& text) {
    MultiGraph g;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "graph") {
            ls >> g.name;
            have_header = true;
        } else if (tok == "v") {
            int id;
            if (!(ls >> id)) fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": bad vertex record");
            g.add_vertex(id);
        } else if (tok == "e") {
            int id, u, v;
            if (!(ls >> id >> u >> v))
                fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": bad edge record");
            g.add_edge(id, u, v);
        } else {
            fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": unknown record '" + tok + "'");
        }
    }
    if (!have_header) fail(ErrorKind::Parse, "missing 'graph <name>' header");
    g.check();
    return g;
}

std::string serialize_graph(const MultiGraph& g) {
    std::ostringstream os;
    os << "graph " << g.name << "\n";
    std::vector<int> vs = g.vertices;
    std::sort(vs.begin(), vs.end());
    for (int v : vs) os << "v " << v << "\n";
    std::vector<GraphEdge> es = g.edges;
    std::sort(es.begin(), es.end(), [](const GraphEdge& a, const GraphEdge& b) { return a.id < b.id; });
    for (const auto& e : es) os << "e " << e.id << " " << e.u << " " << e.v << "\n";
    return os.str();
}

} // namespace sg
