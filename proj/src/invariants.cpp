#include "sg/invariants.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sg/surgery.hpp"

namespace sg {

// ---------------------------------------------------------------------------
// Handcuff / P4 wrappers

HandcuffDiagram as_handcuff(const Diagram& d0, bool auto_orient) {
    HandcuffDiagram h;
    Diagram d = d0;
    auto role = [&](const char* name) -> std::set<int> {
        auto it = d.roles.find(name);
        if (it == d.roles.end() || it->second.empty())
            fail(ErrorKind::Domain, std::string("handcuff: missing role ") + name);
        return it->second;
    };
    h.loop1 = role("loop1");
    h.loop2 = role("loop2");
    h.edge = role("edge");
    if (auto_orient) {
        d = orient_edge_chain(d, h.loop1);
        d = orient_edge_chain(d, h.loop2);
    }

    ChainWalk w1 = walk_edges(d, h.loop1);
    ChainWalk w2 = walk_edges(d, h.loop2);
    if (!w1.closed || !w2.closed)
        fail(ErrorKind::Domain, "handcuff: a loop role does not form a closed cycle");
    if (!w1.coherent() || !w2.coherent())
        fail(ErrorKind::Domain, "handcuff: loop arcs are not coherently oriented");
    ChainWalk we = walk_edges(d, h.edge);
    if (we.closed) fail(ErrorKind::Domain, "handcuff: edge role forms a cycle");

    auto touches = [&](int vertex, const std::set<int>& edges) {
        const FlatVertex& v = d.vertices.at(vertex);
        for (ArcId a : v.slot) {
            auto it = d.label.find(a);
            if (it != d.label.end() && edges.count(it->second)) return true;
        }
        return false;
    };
    h.edge_chain = we.arcs;
    int s = we.start_vertex, e = we.end_vertex;
    if (touches(s, h.loop1) && touches(e, h.loop2)) {
        h.v1 = s;
        h.v2 = e;
    } else if (touches(s, h.loop2) && touches(e, h.loop1)) {
        h.v1 = e;
        h.v2 = s;
        std::reverse(h.edge_chain.begin(), h.edge_chain.end());
    } else {
        fail(ErrorKind::Domain, "handcuff: edge does not join the two loops");
    }
    if (h.v1 == h.v2) fail(ErrorKind::Domain, "handcuff: loops share a vertex");
    h.loop1_chain = w1.arcs;
    h.loop2_chain = w2.arcs;
    h.d = d;
    return h;
}

P4Diagram as_p4(const Diagram& d0, bool auto_orient) {
    P4Diagram p;
    Diagram d = d0;
    static const char* names[6] = {"e1", "e2", "e3", "e4", "e5", "e6"};
    for (int i = 0; i < 6; i++) {
        auto it = d.roles.find(names[i]);
        if (it == d.roles.end() || it->second.empty())
            fail(ErrorKind::Domain, std::string("p4: missing role ") + names[i]);
        p.e[i] = it->second;
    }
    if (auto_orient) {
        d = orient_edge_chain(d, p.e[4]);
        d = orient_edge_chain(d, p.e[5]);
    }
    ChainWalk c1 = walk_edges(d, p.e[4]);
    ChainWalk c4 = walk_edges(d, p.e[5]);
    if (!c1.closed || !c4.closed)
        fail(ErrorKind::Domain, "p4: e5/e6 roles must form closed cycles");
    if (!c1.coherent() || !c4.coherent())
        fail(ErrorKind::Domain, "p4: loop cycles are not coherently oriented");
    for (int i = 0; i < 4; i++) {
        ChainWalk w = walk_edges(d, p.e[i]);
        if (w.closed) fail(ErrorKind::Domain, "p4: an e1..e4 role forms a cycle");
    }
    p.d = d;
    return p;
}

HandcuffDiagram p4_sub_handcuff(const P4Diagram& p, int i, int j) {
    if ((i != 1 && i != 2) || (j != 3 && j != 4))
        fail(ErrorKind::Domain, "p4_sub_handcuff: need i in {1,2}, j in {3,4}");
    std::set<int> keep = p.e[4];
    keep.insert(p.e[5].begin(), p.e[5].end());
    keep.insert(p.e[i - 1].begin(), p.e[i - 1].end());
    keep.insert(p.e[j - 1].begin(), p.e[j - 1].end());
    Diagram rd = restrict_to_edges(p.d, keep);
    rd.roles.clear();
    rd.roles["loop1"] = p.e[4];
    rd.roles["loop2"] = p.e[5];
    std::set<int> edge = p.e[i - 1];
    edge.insert(p.e[j - 1].begin(), p.e[j - 1].end());
    rd.roles["edge"] = edge;
    return as_handcuff(rd);
}

// ---------------------------------------------------------------------------
// Linking number

long long linking_number(const Diagram& d, const std::set<ArcId>& comp_a,
                         const std::set<ArcId>& comp_b) {
    for (ArcId a : comp_a)
        if (comp_b.count(a)) fail(ErrorKind::Domain, "linking_number: components share an arc");
    long long s = 0;
    for (auto& [id, c] : d.crossings) {
        ArcId u = c.slot[c.under_in];
        ArcId o = c.slot[c.over_in];
        bool ua = comp_a.count(u) > 0, ub = comp_b.count(u) > 0;
        bool oa = comp_a.count(o) > 0, ob = comp_b.count(o) > 0;
        if ((ua && ob) || (ub && oa)) s += c.sign();
    }
    if (s % 2 != 0)
        fail(ErrorKind::Domain, "linking_number: odd signed crossing sum (components not closed?)");
    return s / 2;
}

// ---------------------------------------------------------------------------
// Conway polynomial by skein recursion

namespace {

struct SkeinCtx {
    std::atomic<long long> budget;
    bool parallel = false;
    bool presimplify = true;
    std::map<std::string, ConwayPoly> memo;
    std::mutex memo_mu;

    explicit SkeinCtx(const SkeinOptions& o)
        : budget(o.node_budget), parallel(o.parallel), presimplify(o.presimplify) {}

    bool lookup(const std::string& k, ConwayPoly& out) {
        std::lock_guard<std::mutex> g(memo_mu);
        auto it = memo.find(k);
        if (it == memo.end()) return false;
        out = it->second;
        return true;
    }
    void store(const std::string& k, const ConwayPoly& v) {
        std::lock_guard<std::mutex> g(memo_mu);
        memo.emplace(k, v);
    }
};

// First crossing met on its under-strand before being met on its over-strand,
// scanning components in order of smallest arc id from their basepoints.
int first_bad_crossing(const Diagram& d, const std::map<ArcId, ArcEnds>& ends) {
    auto comps = components(d);
    for (auto& ch : comps) {
        auto it = std::min_element(ch.begin(), ch.end());
        std::rotate(ch.begin(), it, ch.end());
    }
    std::sort(comps.begin(), comps.end(),
              [](const std::vector<ArcId>& a, const std::vector<ArcId>& b) {
                  return a.front() < b.front();
              });
    std::set<int> visited;
    for (auto& ch : comps) {
        for (ArcId a : ch) {
            const End& h = ends.at(a).head;
            if (h.kind != End::Cross) continue;
            const Crossing& c = d.crossings.at(h.node);
            if (visited.insert(h.node).second) {
                if (c.on_under(h.slot)) return h.node;
            }
        }
    }
    return -1;
}

ConwayPoly skein_eval(const Diagram& d0, SkeinCtx& ctx, int depth) {
    if (ctx.budget.fetch_sub(1) <= 0) fail(ErrorKind::Budget, "skein node budget exhausted");
    Diagram d = ctx.presimplify ? simplify_r1r2(d0) : d0;
    auto comps = components(d);
    if (comps.empty()) fail(ErrorKind::Domain, "conway: empty diagram");
    if (comps.size() >= 2 && connected_pieces(d) > 1) return ConwayPoly::zero();
    if (d.crossings.empty()) return comps.size() == 1 ? ConwayPoly::one() : ConwayPoly::zero();

    std::string key = skein_key(d);
    ConwayPoly cached;
    if (ctx.lookup(key, cached)) return cached;

    auto ends = arc_endpoints(d);
    int bad = first_bad_crossing(d, ends);
    if (bad < 0) {
        ConwayPoly r = comps.size() == 1 ? ConwayPoly::one() : ConwayPoly::zero();
        ctx.store(key, r);
        return r;
    }
    int sign = d.crossings.at(bad).sign();
    Diagram switched = switch_crossing(d, bad);
    Diagram smoothed = smooth_crossing(d, bad);
    ConwayPoly a, b;
#ifdef _OPENMP
    if (ctx.parallel && depth < 8) {
#pragma omp task shared(a, ctx)
        a = skein_eval(switched, ctx, depth + 1);
        b = skein_eval(smoothed, ctx, depth + 1);
#pragma omp taskwait
    } else {
        a = skein_eval(switched, ctx, depth + 1);
        b = skein_eval(smoothed, ctx, depth + 1);
    }
#else
    a = skein_eval(switched, ctx, depth + 1);
    b = skein_eval(smoothed, ctx, depth + 1);
#endif
    ConwayPoly res = a;
    res += b.shifted(1, sign);
    ctx.store(key, res);
    return res;
}

} // namespace

ConwayPoly conway(const Diagram& d, const SkeinOptions& opts) {
    if (!d.vertices.empty())
        fail(ErrorKind::Domain, "conway: diagram has flat vertices (not a link)");
    SkeinCtx ctx(opts);
    ConwayPoly out;
#ifdef _OPENMP
    if (opts.parallel) {
#pragma omp parallel
#pragma omp single
        out = skein_eval(d, ctx, 0);
        return out;
    }
#endif
    out = skein_eval(d, ctx, 0);
    return out;
}

long long a2_skein(const Diagram& d, const SkeinOptions& opts) {
    return conway(d, opts).coeff(2);
}

long long a2_gauss(const Diagram& d) {
    if (!d.vertices.empty()) fail(ErrorKind::Domain, "a2_gauss: diagram has flat vertices");
    auto comps = components(d);
    if (comps.size() != 1) fail(ErrorKind::Domain, "a2_gauss: need a single knot component");
    if (d.crossings.empty()) return 0;
    std::vector<ArcId> ch = comps[0];
    ArcId base = d.basepoint.value_or(*std::min_element(ch.begin(), ch.end()));
    auto it = std::find(ch.begin(), ch.end(), base);
    if (it == ch.end()) it = ch.begin();
    std::rotate(ch.begin(), it, ch.end());

    auto ends = arc_endpoints(d);
    struct Passage {
        int crossing;
        bool under;
    };
    std::vector<Passage> ps;
    for (ArcId a : ch) {
        const End& h = ends.at(a).head;
        if (h.kind != End::Cross) continue;
        const Crossing& c = d.crossings.at(h.node);
        ps.push_back({h.node, c.on_under(h.slot)});
    }
    std::map<int, std::pair<int, int>> pos; // crossing -> (first, second)
    for (int i = 0; i < (int)ps.size(); i++) {
        auto itp = pos.find(ps[i].crossing);
        if (itp == pos.end()) pos[ps[i].crossing] = {i, -1};
        else itp->second.second = i;
    }
    long long sum = 0;
    for (auto i1 = pos.begin(); i1 != pos.end(); ++i1) {
        for (auto i2 = std::next(i1); i2 != pos.end(); ++i2) {
            auto [fa, sa] = i1->second;
            auto [fb, sb] = i2->second;
            int ci = i1->first, cj = i2->first;
            if (fb < fa) {
                std::swap(fa, fb);
                std::swap(sa, sb);
                std::swap(ci, cj);
            }
            // interleaving: fa < fb < sa < sb
            if (!(fb < sa && sa < sb)) continue;
            if (!ps[fa].under) continue;  // first passage of the first crossing: under
            if (ps[fb].under) continue;   // first passage of the second: over
            sum += (long long)d.crossings.at(ci).sign() * d.crossings.at(cj).sign();
        }
    }
    return sum;
}

long long a2(const Diagram& d, const SkeinOptions& opts) {
    return opts.a2_via_skein ? a2_skein(d, opts) : a2_gauss(d);
}

// ---------------------------------------------------------------------------
// Handcuff invariants

HandcuffInvariant n_invariant(const HandcuffDiagram& f, const SkeinOptions& opts) {
    HandcuffInvariant out;
    long long lk = linking_number(f.d, f.loop1_arcs(), f.loop2_arcs());
    DSumRecord rec = d_sum(f);
    Diagram knot = smooth_deg2(rec.knot);
    long long a2_kd = a2(knot, opts);
    auto loop_a2 = [&](const std::set<int>& loop_edges) {
        Diagram ld = smooth_deg2(restrict_to_edges(f.d, loop_edges));
        return a2(ld, opts);
    };
    out.n_value = a2_kd - loop_a2(f.loop1) - loop_a2(f.loop2);
    out.modulus = lk < 0 ? -lk : lk;
    out.reduced = out.modulus == 0 ? out.n_value
                                   : ((out.n_value % out.modulus) + out.modulus) % out.modulus;
    return out;
}

long long xi(const P4Diagram& f, const SkeinOptions& opts) {
    long long lk14 = linking_number(f.d, f.d.arcs_of_edges(f.e[4]), f.d.arcs_of_edges(f.e[5]));
    if (lk14 != 0)
        fail(ErrorKind::Domain,
             "xi: lk(c1, c4) = " + std::to_string(lk14) + " (must vanish)");
    long long total = 0;
    for (int i = 1; i <= 2; i++) {
        for (int j = 3; j <= 4; j++) {
            HandcuffInvariant n = n_invariant(p4_sub_handcuff(f, i, j), opts);
            if (n.modulus != 0)
                fail(ErrorKind::Domain, "xi: sub-handcuff has nonzero linking number");
            int sgn = ((i + j) % 2 == 0) ? +1 : -1;
            total += sgn * n.n_value;
        }
    }
    return total;
}

Irreducibility irreducibility_certificate(const HandcuffDiagram& f, const SkeinOptions& opts) {
    HandcuffInvariant n = n_invariant(f, opts);
    return n.reduced != 0 ? Irreducibility::IrreducibleCertified : Irreducibility::Unknown;
}

} // namespace sg
