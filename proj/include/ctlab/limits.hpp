#pragma once

#include <cstddef>

namespace ctlab {

struct Limits {
    std::size_t nodes = 1000000;     // formula nodes / enumeration items
    std::size_t team_cap = 12;       // largest team split by subset enumeration
    std::size_t universe_cap = 14;   // largest |Sem_σ/≈| for class enumeration
    std::size_t family_cap = 16;     // largest universe for subteam-family bitsets

    // Defaults, with CTLAB_BUDGET_NODES applied when set.
    static Limits defaults();
};

}  // namespace ctlab
