#include "ctlab/limits.hpp"

#include <cstdlib>
#include <string>

namespace ctlab {

Limits Limits::defaults()
{
    Limits l;
    if (const char* env = std::getenv("CTLAB_BUDGET_NODES")) {
        try {
            auto v = std::stoull(env);
            if (v > 0)
                l.nodes = static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    return l;
}

}  // namespace ctlab
