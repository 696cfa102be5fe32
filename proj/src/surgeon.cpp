#include "sg/surgeon.hpp"

#include <algorithm>

namespace sg {

Surgeon::Surgeon(const Diagram& d) {
    cr_ = d.crossings;
    vx_ = d.vertices;
    free_ = d.free_loops;
    roles_ = d.roles;
    for (ArcId a : d.arcs()) {
        if (free_.count(a)) {
            auto it = d.label.find(a);
            free_labels_[a] = it != d.label.end() ? it->second : -1;
            continue;
        }
        SArc sa;
        auto it = d.label.find(a);
        if (it != d.label.end()) sa.label = it->second;
        arcs_[a] = sa;
    }
    auto ends = arc_endpoints(d);
    for (auto& [a, e] : ends) {
        if (free_.count(a)) continue;
        auto conv = [](const End& x) {
            Binding b;
            if (x.kind == End::None) b.kind = Binding::Dangling;
            else if (x.kind == End::Cross) b = {Binding::OnCross, x.node, x.slot};
            else b = {Binding::OnVert, x.node, x.slot};
            return b;
        };
        arcs_[a].tail = conv(e.tail);
        arcs_[a].head = conv(e.head);
    }
    next_arc_ = d.fresh_arc_id();
    next_cross_ = d.fresh_crossing_id();
    next_vert_ = d.fresh_vertex_id();
}

ArcId Surgeon::resolve(ArcId a) const {
    while (true) {
        auto it = merged_.find(a);
        if (it == merged_.end()) return a;
        a = it->second;
    }
}

bool Surgeon::exists(ArcId a) const { return arcs_.count(resolve(a)) > 0; }

const Surgeon::Binding& Surgeon::tail_of(ArcId a) const { return arcs_.at(resolve(a)).tail; }
const Surgeon::Binding& Surgeon::head_of(ArcId a) const { return arcs_.at(resolve(a)).head; }
int Surgeon::label_of(ArcId a) const { return arcs_.at(resolve(a)).label; }
void Surgeon::set_label(ArcId a, int label) { arcs_.at(resolve(a)).label = label; }

const Crossing& Surgeon::crossing(int id) const { return cr_.at(id); }
const FlatVertex& Surgeon::vertex(int id) const { return vx_.at(id); }

void Surgeon::unbind(ArcId a, const Binding& b) {
    SArc& sa = arcs_.at(a);
    auto same = [&](const Binding& x) {
        return x.kind == b.kind && x.node == b.node && x.slot == b.slot;
    };
    if (same(sa.tail)) sa.tail = Binding{};
    else if (same(sa.head)) sa.head = Binding{};
    else fail(ErrorKind::Domain, "surgeon: unbinding an end that is not bound there");
}

void Surgeon::bind(ArcId a, bool incoming, Binding b) {
    SArc& sa = arcs_.at(a);
    Binding& end = incoming ? sa.head : sa.tail;
    if (end.kind != Binding::Dangling)
        fail(ErrorKind::Domain, "surgeon: binding an end that is not dangling");
    end = b;
}

void Surgeon::remove_crossing(int id) {
    auto it = cr_.find(id);
    if (it == cr_.end()) fail(ErrorKind::Domain, "surgeon: no such crossing");
    const Crossing& c = it->second;
    for (int s = 0; s < 4; s++) unbind(resolve(c.slot[s]), {Binding::OnCross, id, s});
    cr_.erase(it);
}

void Surgeon::remove_vertex(int id) {
    auto it = vx_.find(id);
    if (it == vx_.end()) fail(ErrorKind::Domain, "surgeon: no such vertex");
    const FlatVertex& v = it->second;
    for (int s = 0; s < v.degree(); s++) unbind(resolve(v.slot[s]), {Binding::OnVert, id, s});
    vx_.erase(it);
}

ArcId Surgeon::split(ArcId a0) {
    ArcId a = resolve(a0);
    SArc& sa = arcs_.at(a);
    ArcId b = next_arc_++;
    SArc sb;
    sb.label = sa.label;
    sb.head = sa.head;
    sa.head = Binding{};
    if (sb.head.kind == Binding::OnCross) cr_.at(sb.head.node).slot[sb.head.slot] = b;
    else if (sb.head.kind == Binding::OnVert) vx_.at(sb.head.node).slot[sb.head.slot] = b;
    arcs_[b] = sb;
    return b;
}

ArcId Surgeon::fresh_arc(int label) {
    ArcId a = next_arc_++;
    SArc sa;
    sa.label = label;
    arcs_[a] = sa;
    return a;
}

void Surgeon::materialize_free_loop(ArcId a) {
    if (!free_.count(a)) fail(ErrorKind::Domain, "surgeon: not a free loop");
    free_.erase(a);
    SArc sa;
    auto it = free_labels_.find(a);
    sa.label = it != free_labels_.end() ? it->second : -1;
    free_labels_.erase(a);
    arcs_[a] = sa;
}

void Surgeon::delete_arc(ArcId a0) {
    ArcId a = resolve(a0);
    if (free_.count(a)) {
        free_.erase(a);
        free_labels_.erase(a);
        return;
    }
    auto it = arcs_.find(a);
    if (it == arcs_.end()) fail(ErrorKind::Domain, "surgeon: delete of unknown arc");
    if (it->second.tail.kind != Binding::Dangling || it->second.head.kind != Binding::Dangling)
        fail(ErrorKind::Domain, "surgeon: delete of a bound arc");
    arcs_.erase(it);
}

ArcId Surgeon::join(ArcId a0, ArcId b0) {
    ArcId a = resolve(a0), b = resolve(b0);
    if (arcs_.at(a).head.kind != Binding::Dangling)
        fail(ErrorKind::Domain, "surgeon: join head not dangling");
    if (arcs_.at(b).tail.kind != Binding::Dangling)
        fail(ErrorKind::Domain, "surgeon: join tail not dangling");
    if (a == b) {
        // Closed up on itself: becomes a free loop.
        if (arcs_.at(a).tail.kind != Binding::Dangling)
            fail(ErrorKind::Domain, "surgeon: self-join with a bound tail");
        int lab = arcs_.at(a).label;
        arcs_.erase(a);
        free_.insert(a);
        free_labels_[a] = lab;
        return a;
    }
    ArcId keep = std::min(a, b);
    ArcId drop = std::max(a, b);
    SArc merged;
    merged.tail = arcs_.at(a).tail;
    merged.head = arcs_.at(b).head;
    // When both sides carry labels, keep the first side's (joins along a path
    // of distinct edges take the upstream edge's id).
    int la = arcs_.at(a).label, lb = arcs_.at(b).label;
    merged.label = la >= 0 ? la : lb;
    arcs_.erase(a);
    arcs_.erase(b);
    arcs_[keep] = merged;
    merged_[drop] = keep;
    auto fix = [&](const Binding& bd) {
        if (bd.kind == Binding::OnCross) cr_.at(bd.node).slot[bd.slot] = keep;
        else if (bd.kind == Binding::OnVert) vx_.at(bd.node).slot[bd.slot] = keep;
    };
    fix(merged.tail);
    fix(merged.head);
    return keep;
}

int Surgeon::add_crossing(const std::array<std::pair<ArcId, bool>, 4>& ends0, int under_in,
                          int over_in) {
    // Store rotated so under_in lands on slot 0.
    std::array<std::pair<ArcId, bool>, 4> ends;
    for (int i = 0; i < 4; i++) ends[i] = ends0[(under_in + i) % 4];
    int id = next_cross_++;
    Crossing c;
    c.under_in = 0;
    c.over_in = ((over_in - under_in) % 4 + 4) % 4;
    if (!c.well_formed()) fail(ErrorKind::Domain, "surgeon: malformed crossing slots");
    for (int s = 0; s < 4; s++) {
        ArcId a = resolve(ends[s].first);
        bool incoming = ends[s].second;
        if (incoming != c.incoming(s))
            fail(ErrorKind::Domain, "surgeon: crossing slot polarity mismatch");
        c.slot[s] = a;
        bind(a, incoming, {Binding::OnCross, id, s});
    }
    cr_[id] = c;
    return id;
}

int Surgeon::add_vertex(const std::vector<std::pair<ArcId, bool>>& ends) {
    int id = next_vert_++;
    FlatVertex v;
    for (int s = 0; s < (int)ends.size(); s++) {
        ArcId a = resolve(ends[s].first);
        v.slot.push_back(a);
        v.in.push_back(ends[s].second ? 1 : 0);
        bind(a, ends[s].second, {Binding::OnVert, id, s});
    }
    vx_[id] = v;
    return id;
}

Diagram Surgeon::finish(std::map<ArcId, ArcId>* arc_map) {
    Diagram d;
    d.crossings = cr_;
    d.vertices = vx_;
    d.free_loops = free_;
    d.roles = roles_;
    for (auto& [a, sa] : arcs_) {
        if (sa.tail.kind == Binding::Dangling || sa.head.kind == Binding::Dangling)
            fail(ErrorKind::Domain,
                 "surgeon: arc " + std::to_string(a) + " left dangling at finish");
        if (sa.label >= 0) d.label[a] = sa.label;
    }
    for (auto& [a, lab] : free_labels_)
        if (lab >= 0 && d.free_loops.count(a)) d.label[a] = lab;
    if (arc_map) {
        arc_map->clear();
        for (auto& [old, nw] : merged_) (*arc_map)[old] = resolve(nw);
        for (auto& [a, sa] : arcs_) (*arc_map)[a] = a;
        for (ArcId a : free_) (*arc_map)[a] = a;
    }
    return d;
}

} // namespace sg
