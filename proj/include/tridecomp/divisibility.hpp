#pragma once

#include "tridecomp/graph.hpp"

namespace tridecomp {

// 3 | e(G) and every degree even: necessary for a triangle decomposition.
inline bool is_k3_divisible(const Graph& g) {
    if (g.edge_count() % 3 != 0) return false;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) % 2 != 0) return false;
    return true;
}

}  // namespace tridecomp
