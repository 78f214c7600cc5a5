#include "uplan/fixed_test.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <string>

namespace uplan {

namespace {

// one new edge, drawn as a chord through `face` from the tail's angle to either a
// receiving angle of an existing vertex or the fresh sink pole (head == -1)
struct Chord {
    int tail = -1;
    AngleRef tail_angle;
    int head = -1;
    AngleRef head_angle;
    int face = -1;
    int orbit_pos = 0; // index of the tail angle along the face orbit
    int edge = -1;
};

std::string fresh_name(const Dag& g, const std::string& base) {
    if (g.vertex(base) < 0) return base;
    for (int i = 1;; ++i) {
        std::string cand = base + std::to_string(i);
        if (g.vertex(cand) < 0) return cand;
    }
}

// index i such that the consecutive orbit darts (o[i], o[i+1]) form the angle:
// the angle sits between twin(o[i]) and o[i+1] in the vertex rotation
int orbit_position(const FaceSet& fs, const AngleRef& a) {
    const auto& o = fs.faces[a.face];
    int k = (int)o.size();
    for (int i = 0; i < k; ++i) {
        if (twin(o[i]) == a.before && o[(i + 1) % k] == a.after) return i;
    }
    return -1;
}

// the unique small sink-switch angle of face f, sitting at its top vertex z
Expected<AngleRef> receiving_angle(const PlaneDag& p, const FaceSet& fs, int f, int z,
                                   const std::map<int, AngleRef>& large_at) {
    const auto& o = fs.faces[f];
    int k = (int)o.size();
    std::optional<AngleRef> found;
    for (int i = 0; i < k; ++i) {
        Dart d1 = o[i], d2 = o[(i + 1) % k];
        if (p.dart_vertex(twin(d1)) != z) continue;
        if (d1.at_head || !d2.at_head) continue; // keep only both-incoming angles
        AngleRef a{z, twin(d1), d2, f};
        auto it = large_at.find(z);
        if (it != large_at.end() && it->second == a) continue;
        if (found) return Error{ErrorCode::ValidatorFailure, "face has two small sink angles"};
        found = a;
    }
    if (!found) return Error{ErrorCode::ValidatorFailure, "face has no receiving angle"};
    return *found;
}

Expected<Augmentation> augment_source_impl(const PlaneDag& p) {
    auto srcs = source_vertices(p.g);
    if (srcs.size() != 1) {
        return Error{ErrorCode::WrongSourceCount,
                     "expected exactly one source, found " + std::to_string(srcs.size())};
    }
    auto asg = assign_large_angles(p, Mode::SingleSource);
    if (!asg.ok()) return asg.error();
    const LargeAngleAssignment& a = asg.value();
    FaceSet fs = trace_faces(p);
    int s = a.pole_angle.vertex;

    std::map<int, std::vector<Chord>> by_face;
    std::vector<int> outer_sinks;
    for (const auto& [w, ang] : a.large_at) {
        if (ang.face == a.outer_face) {
            outer_sinks.push_back(w);
            continue;
        }
        Chord c;
        c.tail = w;
        c.tail_angle = ang;
        c.head = a.top.at(ang.face);
        auto recv = receiving_angle(p, fs, ang.face, c.head, a.large_at);
        if (!recv.ok()) return recv.error();
        c.head_angle = recv.value();
        c.face = ang.face;
        c.orbit_pos = orbit_position(fs, ang);
        by_face[c.face].push_back(c);
    }
    assert(!outer_sinks.empty());

    Dag g2 = p.g;
    bool new_sink = outer_sinks.size() > 1;
    int t = new_sink ? g2.add_vertex(fresh_name(g2, "t")) : outer_sinks.front();

    int st_edge = -1;
    for (int e = 0; e < p.g.m(); ++e) {
        if (p.g.edges[e].tail == s && p.g.edges[e].head == t) {
            st_edge = e;
            break;
        }
    }
    if (new_sink) {
        for (int w : outer_sinks) {
            Chord c;
            c.tail = w;
            c.tail_angle = a.large_at.at(w);
            c.head = -1;
            c.face = a.outer_face;
            c.orbit_pos = orbit_position(fs, c.tail_angle);
            by_face[c.face].push_back(c);
        }
    }
    bool st_added = st_edge < 0;
    if (st_added) {
        Chord c;
        c.tail = s;
        c.tail_angle = a.pole_angle;
        c.head = new_sink ? -1 : t;
        if (!new_sink) c.head_angle = a.large_at.at(t);
        c.face = a.outer_face;
        c.orbit_pos = orbit_position(fs, a.pole_angle);
        by_face[c.face].push_back(c);
    }

    Augmentation out;
    for (auto& [f, chords] : by_face) {
        std::sort(chords.begin(), chords.end(),
                  [](const Chord& l, const Chord& r) { return l.orbit_pos < r.orbit_pos; });
        for (Chord& c : chords) {
            c.edge = g2.add_edge(c.tail, c.head < 0 ? t : c.head);
            out.added_edges.push_back(c.edge);
            if (c.tail == s && (c.head < 0 ? t : c.head) == t) st_edge = c.edge;
        }
    }

    std::vector<std::vector<Dart>> rot = p.rotation;
    rot.resize(g2.n());
    std::map<std::pair<int, Dart>, std::vector<Dart>> insert_after;
    for (auto& [f, chords] : by_face) {
        for (const Chord& c : chords) {
            insert_after[{c.tail, c.tail_angle.before}].push_back(Dart{c.edge, false});
        }
        // receivers: sweeping ccw across an angle runs against the orbit direction,
        // so each group goes in by descending orbit position of the chord tails
        int k = (int)fs.faces[f].size();
        std::map<std::pair<int, Dart>, std::vector<const Chord*>> groups;
        std::vector<const Chord*> pole_group;
        for (const Chord& c : chords) {
            if (c.head < 0) {
                pole_group.push_back(&c);
            } else {
                groups[{c.head, c.head_angle.before}].push_back(&c);
            }
        }
        for (auto& [key, grp] : groups) {
            int z_pos = orbit_position(fs, grp.front()->head_angle);
            std::sort(grp.begin(), grp.end(), [&](const Chord* l, const Chord* r) {
                return (l->orbit_pos - z_pos + k) % k > (r->orbit_pos - z_pos + k) % k;
            });
            auto& slot = insert_after[key];
            for (const Chord* c : grp) slot.push_back(Dart{c->edge, true});
        }
        if (!pole_group.empty()) {
            std::sort(pole_group.begin(), pole_group.end(),
                      [](const Chord* l, const Chord* r) { return l->orbit_pos > r->orbit_pos; });
            for (const Chord* c : pole_group) rot[t].push_back(Dart{c->edge, true});
        }
    }
    for (int v = 0; v < p.g.n(); ++v) {
        std::vector<Dart> nr;
        nr.reserve(rot[v].size());
        for (Dart d : p.rotation[v]) {
            nr.push_back(d);
            auto it = insert_after.find({v, d});
            if (it != insert_after.end()) {
                nr.insert(nr.end(), it->second.begin(), it->second.end());
            }
        }
        rot[v] = std::move(nr);
    }

    if (!is_acyclic(g2)) {
        return Error{ErrorCode::ValidatorFailure, "augmentation created a cycle"};
    }

    std::vector<Dart> outer_darts;
    if (st_added) {
        outer_darts = {Dart{st_edge, false}, Dart{st_edge, true}};
    } else {
        outer_darts = {p.outer};
    }
    for (Dart od : outer_darts) {
        auto built = build_plane_dag(g2, rot, od);
        if (!built.ok()) return built.error();
        out.candidates.push_back(std::move(built.value()));
    }
    out.s = s;
    out.t = t;
    return out;
}

} // namespace

Expected<Augmentation> augment_single_source(const PlaneDag& p) {
    return augment_source_impl(p);
}

Expected<Augmentation> augment_single_sink(const PlaneDag& p) {
    auto sinks = sink_vertices(p.g);
    if (sinks.size() != 1) {
        return Error{ErrorCode::WrongSourceCount,
                     "expected exactly one sink, found " + std::to_string(sinks.size())};
    }
    auto aug = augment_source_impl(reverse_plane(p));
    if (!aug.ok()) return aug.error();
    Augmentation out;
    out.added_edges = aug.value().added_edges;
    out.s = aug.value().t;
    out.t = aug.value().s;
    for (const PlaneDag& c : aug.value().candidates) {
        out.candidates.push_back(reverse_plane(c));
    }
    return out;
}

Expected<FixedDecision> test_fixed(const PlaneDag& p, Mode mode) {
    if (p.g.m() == 0) {
        FixedDecision d;
        d.yes = true;
        d.augmented = p;
        d.s = d.t = 0;
        d.ordering = StOrdering{{1}};
        return d;
    }
    auto aug = mode == Mode::SingleSource ? augment_single_source(p) : augment_single_sink(p);
    if (!aug.ok()) return aug.error();

    FixedDecision d;
    d.added_edges = aug.value().added_edges;
    d.s = aug.value().s;
    d.t = aug.value().t;
    std::optional<ValleyWitness> first_witness;
    for (const PlaneDag& cand : aug.value().candidates) {
        auto w = has_valley(cand);
        if (!w.ok()) return w.error();
        if (!w.value().has_value()) {
            auto ord = bitonic_st_ordering(cand);
            if (!ord.ok()) return ord.error();
            d.yes = true;
            d.augmented = cand;
            d.ordering = std::move(ord.value());
            return d;
        }
        if (!first_witness) first_witness = w.value();
    }
    d.yes = false;
    d.augmented = aug.value().candidates.front();
    d.witness = first_witness;
    return d;
}

} // namespace uplan
