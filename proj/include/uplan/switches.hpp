#pragma once

#include "uplan/core.hpp"

#include <map>

namespace uplan {

// The angle at `vertex` between consecutive rotation entries `before` and `after`
// (ccw), lying in face `face` of trace_faces on the same graph.
struct AngleRef {
    int vertex = -1;
    Dart before{-1, false};
    Dart after{-1, false};
    int face = -1;

    bool operator==(const AngleRef&) const = default;
};

enum class SwitchKind { SourceSwitch, SinkSwitch, NonSwitch };

enum class Mode { SingleSource, SingleSink };

std::vector<std::pair<AngleRef, SwitchKind>> classify_angles(const PlaneDag& p,
                                                             const FaceSet& fs);

// In single-source mode every sink carries exactly one large angle, inner faces have
// exactly one small sink-switch angle (its vertex is top(f)), the outer face has none,
// and the source gets one large angle on the outer face. Single-sink is the dual.
struct LargeAngleAssignment {
    Mode mode = Mode::SingleSource;
    std::map<int, AngleRef> large_at; // sink (resp. source) vertex -> its large angle
    AngleRef pole_angle;              // outer large angle of the global source (sink)
    std::map<int, int> top;           // inner face -> top(f) (bottom(f) in sink mode)
    int outer_face = -1;
};

Expected<LargeAngleAssignment> assign_large_angles(const PlaneDag& p, Mode mode);

Expected<int> top_of_face(const LargeAngleAssignment& a, int face);

// Same embedding with every edge direction flipped; rotation orders are untouched,
// darts just swap which end they mark. Involutive.
PlaneDag reverse_plane(const PlaneDag& p);

} // namespace uplan
