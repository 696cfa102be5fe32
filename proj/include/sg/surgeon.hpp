#pragma once

#include <map>
#include <set>

#include "sg/diagram.hpp"

namespace sg {

// Mutable editing layer for dart-level diagram surgery. Detaching a node
// leaves its arc occurrences dangling; new nodes bind dangling ends; join
// fuses two dangling ends into one arc (a self-join becomes a free loop).
// finish() checks that nothing is left dangling and reports how arc ids
// were merged.
class Surgeon {
public:
    struct Binding {
        enum Kind { Dangling, OnCross, OnVert } kind = Dangling;
        int node = -1;
        int slot = -1;
    };

    explicit Surgeon(const Diagram& d);

    // Node removal; incident arc ends become dangling.
    void remove_crossing(int id);
    void remove_vertex(int id);

    // Split arc a into (a, fresh): a keeps its tail, the fresh arc gets the
    // old head; the cut ends dangle. Returns the fresh arc id.
    ArcId split(ArcId a);

    // Fresh arc with both ends dangling.
    ArcId fresh_arc(int label = -1);

    // Turn a free loop into a regular arc with both ends dangling.
    void materialize_free_loop(ArcId a);

    // Fuse a's head with b's tail. Returns the surviving arc id.
    ArcId join(ArcId a, ArcId b);

    // Bind ends to a new crossing. ends[i] = (arc, incoming?) for slot i.
    int add_crossing(const std::array<std::pair<ArcId, bool>, 4>& ends, int under_in,
                     int over_in);
    int add_vertex(const std::vector<std::pair<ArcId, bool>>& ends);

    // Rewire a dangling polarity of arc a onto an existing node slot is not
    // supported: slots only come into existence with their node.

    // Drop an arc whose ends both dangle, or a free loop.
    void delete_arc(ArcId a);

    ArcId resolve(ArcId a) const; // follow merges
    bool exists(ArcId a) const;
    const Binding& tail_of(ArcId a) const;
    const Binding& head_of(ArcId a) const;
    int label_of(ArcId a) const;
    void set_label(ArcId a, int label);

    const Crossing& crossing(int id) const;
    const FlatVertex& vertex(int id) const;

    Diagram finish(std::map<ArcId, ArcId>* arc_map = nullptr);

private:
    struct SArc {
        Binding tail, head;
        int label = -1;
        bool alive = true;
    };

    void unbind(ArcId a, const Binding& b);
    void bind(ArcId a, bool incoming, Binding b);

    std::map<ArcId, SArc> arcs_;
    std::map<int, Crossing> cr_;
    std::map<int, FlatVertex> vx_;
    std::set<ArcId> free_;
    std::map<ArcId, int> free_labels_;
    std::map<ArcId, ArcId> merged_; // old -> newer (chase to resolve)
    std::map<std::string, std::set<int>> roles_;
    int next_arc_, next_cross_, next_vert_;
};

} // namespace sg
