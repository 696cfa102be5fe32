#pragma once

#include "sg/invariants.hpp"
#include "sg/multigraph.hpp"

namespace sg {

// placeholder; filled in after the invariant pipeline settles
struct ParityReport {
    int parity = 0;
    std::vector<long long> linking_numbers;
    std::pair<Cycle, Cycle> odd_pair;
};

} // namespace sg
