#pragma once

#include "uplan/core.hpp"

namespace uplan {

// Drawing-only checks: upwardness, per-axis coordinate distinctness, and segment
// crossings (with distinct coordinates the only possible violation is a vertical of
// one edge against a horizontal of another, meeting strictly inside both).
Expected<std::monostate> validate_geometry(const Dag& g, const LDrawing& d);

// validate_geometry plus rotation match against p and outer-face match. Errors carry
// ValidatorFailure with the failed check.
Expected<std::monostate> validate_ldrawing(const PlaneDag& p, const LDrawing& d);

// Reads the embedding off a drawing with distinct per-axis coordinates.
// Rotation at v, ccw: incoming-from-East darts by tail column ascending; outgoing darts
// (east-bending by head row ascending, then west-bending by head row descending);
// incoming-from-West darts by tail column ascending. The outer face is the one below
// the lowest vertex.
PlaneDag extract_embedding(const Dag& g, const LDrawing& d);

// Left-to-right orders induced by the embedding.
std::vector<Dart> successors_l2r(const PlaneDag& p, const FaceSet& fs, int v);
std::vector<Dart> predecessors_l2r(const PlaneDag& p, const FaceSet& fs, int v);
int face_at_angle(const PlaneDag& p, const FaceSet& fs, int v, int i); // angle rot[i]->rot[i+1]

// Encloses the drawing in a directed triangle (new source, corner vertex, new sink),
// then gives every original sink an outgoing edge toward the first horizontal hit by a
// ray shot upward, and every original source an incoming edge from the tail of the
// first vertical hit by a ray shot to the right. The result is a plane st-graph with
// the original drawing untouched inside; coordinates are renumbered to ranks.
struct Augmented {
    PlaneDag plane;
    LDrawing drawing;
    int s, x, t; // vertex indices of the added triangle
};
Expected<Augmented> augment_from_ldrawing(const PlaneDag& p, const LDrawing& d);

// Compresses coordinates to ranks 1..n per axis, preserving order.
LDrawing to_ranks(const LDrawing& d);

std::string render_svg(const Dag& g, const LDrawing& d);

} // namespace uplan
