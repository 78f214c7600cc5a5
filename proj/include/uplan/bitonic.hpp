#pragma once

#include "uplan/core.hpp"
#include "uplan/geometry.hpp"

#include <optional>

namespace uplan {

// 1-based successor indices i <= j at `vertex`: a directed path from successor i to
// successor i-1 and one from successor j to successor j+1 both exist.
struct ValleyWitness {
    int vertex = -1;
    int i = 0, j = 0;
    int left_head = -1;  // head of the path leaving successor i leftward
    int right_head = -1; // head of the path leaving successor j rightward
};

struct StOrdering {
    std::vector<int> pi; // vertex -> 1..n, increasing along every edge
};

// single source and sink, both on the outer face, acyclic, connected
Expected<std::monostate> check_plane_st(const PlaneDag& p);

// per face of an st-graph: the unique vertex whose boundary angle has both edges
// incoming (top) resp. outgoing (bottom)
struct FaceTopBottom {
    std::vector<int> top, bottom;
};
FaceTopBottom face_tops_bottoms(const PlaneDag& p, const FaceSet& fs);

// heads of each vertex's outgoing edges, left to right
Expected<std::vector<std::vector<int>>> successor_lists(const PlaneDag& p);

Expected<std::optional<ValleyWitness>> has_valley(const PlaneDag& p);

Expected<StOrdering> bitonic_st_ordering(const PlaneDag& p);

// y(v) = pi(v); x found by a bottom-up sweep that keeps every vertex's pending
// out-edges as one contiguous column bundle. Fails only on invalid input; the result
// always passes validate_ldrawing against p.
Expected<LDrawing> realize_from_bitonic(const PlaneDag& p, const StOrdering& ord);

} // namespace uplan
