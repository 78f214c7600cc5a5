#include "uplan/switches.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace uplan {

std::vector<std::pair<AngleRef, SwitchKind>> classify_angles(const PlaneDag& p,
                                                             const FaceSet& fs) {
    std::vector<std::pair<AngleRef, SwitchKind>> out;
    for (int v = 0; v < p.g.n(); ++v) {
        const auto& rot = p.rotation[v];
        const int k = (int)rot.size();
        for (int i = 0; i < k; ++i) {
            Dart before = rot[i];
            Dart after = rot[(i + 1) % k];
            AngleRef a{v, before, after, fs.face_of_dart(after)};
            SwitchKind kind = SwitchKind::NonSwitch;
            bool out1 = p.dart_outgoing(before), out2 = p.dart_outgoing(after);
            if (out1 && out2) kind = SwitchKind::SourceSwitch;
            if (!out1 && !out2) kind = SwitchKind::SinkSwitch;
            out.push_back({a, kind});
        }
    }
    return out;
}

PlaneDag reverse_plane(const PlaneDag& p) {
    PlaneDag q;
    q.g.names = p.g.names;
    for (const Edge& e : p.g.edges) q.g.edges.push_back({e.id, e.head, e.tail});
    q.rotation = p.rotation;
    for (auto& rot : q.rotation)
        for (Dart& d : rot) d.at_head = !d.at_head;
    q.outer = Dart{p.outer.edge, !p.outer.at_head};
    return q;
}

namespace {

// Exact assignment for the single-source case. Small sink angles are a bipartite
// matching: each inner face without a forced small angle takes exactly one, each sink
// of degree d supplies exactly d-1.
Expected<LargeAngleAssignment> assign_single_source(const PlaneDag& p) {
    const int n = p.g.n();
    FaceSet fs = trace_faces(p);
    LargeAngleAssignment res;
    res.mode = Mode::SingleSource;
    res.outer_face = fs.outer;
    if (p.g.m() == 0) return res;

    if (!is_bimodal(p))
        return Error{ErrorCode::NotUpwardPlane, "embedding is not bimodal"};
    auto sources = source_vertices(p.g);
    if (sources.size() != 1)
        return Error{ErrorCode::WrongSourceCount,
                     "expected one source, found " + std::to_string(sources.size())};
    const int s = sources[0];

    auto angles = classify_angles(p, fs);
    auto out_deg = p.g.out_adj();

    std::vector<char> is_sink(n, 0);
    for (int v = 0; v < n; ++v) is_sink[v] = out_deg[v].empty() && !p.rotation[v].empty();

    // the source must reach the outer face, where its large angle lives
    for (const auto& [a, kind] : angles)
        if (a.vertex == s && a.face == fs.outer) {
            res.pole_angle = a;
            break;
        }
    if (res.pole_angle.vertex != s)
        return Error{ErrorCode::NotUpwardPlane, "source has no angle on the outer face"};

    const int num_faces = (int)fs.faces.size();
    std::vector<int> forced_vertex(num_faces, -1);
    std::vector<int> forced_count(num_faces, 0);
    for (const auto& [a, kind] : angles)
        if (kind == SwitchKind::SinkSwitch && !is_sink[a.vertex]) {
            forced_count[a.face]++;
            forced_vertex[a.face] = a.vertex;
        }
    if (forced_count[fs.outer] > 0)
        return Error{ErrorCode::NotUpwardPlane,
                     "outer face holds a sink switch at a non-sink vertex"};
    for (int f = 0; f < num_faces; ++f)
        if (forced_count[f] > 1)
            return Error{ErrorCode::NotUpwardPlane,
                         "a face holds two sink switches at non-sink vertices"};

    // demand faces still owe one small angle; forced faces already spent theirs
    std::vector<int> demand_faces;
    std::vector<int> face_slot(num_faces, -1);
    for (int f = 0; f < num_faces; ++f)
        if (f != fs.outer && forced_count[f] == 0) {
            face_slot[f] = (int)demand_faces.size();
            demand_faces.push_back(f);
        }

    // sink angles grouped per vertex, and per (vertex, demand face) adjacency
    std::vector<std::vector<AngleRef>> sink_angles(n);
    for (const auto& [a, kind] : angles)
        if (kind == SwitchKind::SinkSwitch && is_sink[a.vertex]) sink_angles[a.vertex].push_back(a);

    std::vector<int> sinks;
    long long total_slots = 0;
    for (int v = 0; v < n; ++v)
        if (is_sink[v]) {
            sinks.push_back(v);
            assert((int)sink_angles[v].size() == (int)p.rotation[v].size());
            total_slots += (int)p.rotation[v].size() - 1;
        }
    if (total_slots != (long long)demand_faces.size())
        return Error{ErrorCode::NotUpwardPlane,
                     "small angle supply does not meet face demand"};

    // Kuhn matching, faces on the left, sinks with capacity deg-1 on the right.
    std::vector<std::vector<int>> adj(demand_faces.size());
    for (int v : sinks) {
        std::vector<int> seen;
        for (const AngleRef& a : sink_angles[v])
            if (face_slot[a.face] >= 0 &&
                std::find(seen.begin(), seen.end(), face_slot[a.face]) == seen.end())
                seen.push_back(face_slot[a.face]);
        for (int fslot : seen) adj[fslot].push_back(v);
    }
    std::vector<int> cap(n, 0);
    for (int v : sinks) cap[v] = (int)p.rotation[v].size() - 1;
    std::vector<std::vector<int>> matched_faces(n); // sink -> face slots taken
    std::vector<int> face_match(demand_faces.size(), -1);

    // augmenting search over alternating paths; face -> sink edges, sinks have capacity
    std::vector<char> visited_face;
    std::function<bool(int)> augment = [&](int fslot) -> bool {
        for (int v : adj[fslot]) {
            if ((int)matched_faces[v].size() < cap[v]) {
                matched_faces[v].push_back(fslot);
                face_match[fslot] = v;
                return true;
            }
        }
        for (int v : adj[fslot]) {
            for (int& other : matched_faces[v]) {
                if (visited_face[other]) continue;
                visited_face[other] = 1;
                if (augment(other)) {
                    other = fslot;
                    face_match[fslot] = v;
                    return true;
                }
            }
        }
        return false;
    };
    for (int fslot = 0; fslot < (int)demand_faces.size(); ++fslot) {
        visited_face.assign(demand_faces.size(), 0);
        visited_face[fslot] = 1;
        if (!augment(fslot))
            return Error{ErrorCode::NotUpwardPlane,
                         "no consistent placement of small angles exists"};
    }

    // pick one concrete small angle per matched face, the leftover angle is the large one
    for (int v : sinks) {
        std::vector<char> used(sink_angles[v].size(), 0);
        for (int fslot : matched_faces[v]) {
            int f = demand_faces[fslot];
            for (size_t i = 0; i < sink_angles[v].size(); ++i)
                if (!used[i] && sink_angles[v][i].face == f) {
                    used[i] = 1;
                    res.top[f] = v;
                    break;
                }
        }
        int large = -1;
        for (size_t i = 0; i < sink_angles[v].size(); ++i)
            if (!used[i]) {
                assert(large < 0);
                large = (int)i;
            }
        assert(large >= 0);
        res.large_at[v] = sink_angles[v][large];
    }
    for (int f = 0; f < num_faces; ++f)
        if (f != fs.outer && forced_count[f] == 1) res.top[f] = forced_vertex[f];
    assert((int)res.top.size() == num_faces - 1);
    return res;
}

} // namespace

Expected<LargeAngleAssignment> assign_large_angles(const PlaneDag& p, Mode mode) {
    if (mode == Mode::SingleSource) return assign_single_source(p);

    PlaneDag q = reverse_plane(p);
    auto sub = assign_single_source(q);
    if (!sub.ok()) return sub.error();
    const LargeAngleAssignment& a = sub.value();

    // translate darts back and re-key faces by the original trace
    FaceSet fs = trace_faces(p);
    auto flip = [](AngleRef x) {
        x.before.at_head = !x.before.at_head;
        x.after.at_head = !x.after.at_head;
        return x;
    };
    auto reface = [&](AngleRef x) {
        x.face = fs.face_of_dart(x.after);
        return x;
    };
    LargeAngleAssignment res;
    res.mode = Mode::SingleSink;
    res.outer_face = fs.outer;
    if (a.pole_angle.vertex >= 0) res.pole_angle = reface(flip(a.pole_angle));
    for (const auto& [v, ang] : a.large_at) res.large_at[v] = reface(flip(ang));
    FaceSet fq = trace_faces(q);
    for (const auto& [f, v] : a.top) {
        assert(!fq.faces[f].empty());
        Dart d = fq.faces[f][0];
        res.top[fs.face_of_dart(Dart{d.edge, !d.at_head})] = v;
    }
    return res;
}

Expected<int> top_of_face(const LargeAngleAssignment& a, int face) {
    if (face == a.outer_face)
        return Error{ErrorCode::OuterFace, "the outer face has no top"};
    auto it = a.top.find(face);
    if (it == a.top.end())
        return Error{ErrorCode::OuterFace, "unknown face " + std::to_string(face)};
    return it->second;
}

} // namespace uplan
