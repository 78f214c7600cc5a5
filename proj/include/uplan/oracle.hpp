#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "uplan/bitonic.hpp"
#include "uplan/geometry.hpp"
#include "uplan/switches.hpp"

namespace uplan {

// Exhaustive search for an upward-planar L-drawing. Tries every topological
// order as the y-assignment and every column permutation as the x-assignment,
// with incremental crossing pruning, and returns the first drawing accepted by
// the validator (first in lexicographic order of the vertex sequence by
// ascending y, then of the x vector). With embed_fixed the drawing must also
// reproduce the given rotations and outer face; otherwise any planar drawing
// of the underlying graph is accepted. Returns nullopt when no drawing exists
// and TooLarge above max_n. The parallel path splits on the first vertex's
// column and is bit-identical to the serial one.
struct BruteForceOptions {
    bool embed_fixed = true;
    int max_n = 7;
    bool parallel = true;
};

Expected<std::optional<LDrawing>> brute_force_ldrawing(const PlaneDag& p,
                                                       const BruteForceOptions& opt = {});
Expected<std::optional<LDrawing>> brute_force_ldrawing(const Dag& g,
                                                       const BruteForceOptions& opt = {});

// Valley check straight from the definition: for each inner face pair it
// decides ascending/descending via global reachability between the pair's
// heads, and reports a descending pair that is later followed by an ascending
// one. Independent of the sweep in has_valley; used to cross-check it.
Expected<std::optional<ValleyWitness>> brute_force_valley(const PlaneDag& p);

// Single-source upward-planarity test for a fixed embedding: the source lies
// on the outer face and every other vertex lies on the outer face of the
// sub-embedding induced by its ancestors. Equivalent to the large-angle
// assignment being feasible; used to cross-check it.
Expected<bool> hutton_lubiw_check(const PlaneDag& p);

// Ladder tree on 2k vertices whose fixed embedding needs Omega(n) bends in any
// upward-planar polyline drawing, yet admits an upward-planar L-drawing. Rungs
// alternate along a diagonal; odd rungs carry a pendant sink below, even rungs
// a pendant source above. Returns the tree and its embedding.
std::pair<Dag, PlaneDag> generate_frati_tree(int k);

// Seeded generators. Identical seeds give identical graphs.
PlaneDag random_plane_dag(std::uint64_t seed, int n_target, Mode mode);
Dag random_tree(std::uint64_t seed, int n);
Dag random_cactus(std::uint64_t seed, int n, Mode mode);
Dag random_sp_dag(std::uint64_t seed, int max_n);
PlaneDag random_sp_st_plane(std::uint64_t seed, int max_n);

}
