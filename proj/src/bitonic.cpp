#include "uplan/bitonic.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <set>

namespace uplan {

namespace {

bool vertex_on_face(const PlaneDag& p, const FaceSet& fs, int v, int face) {
    for (Dart d : p.rotation[v])
        if (fs.face_of_dart(d) == face)
            return true;
    return false;
}

} // namespace

Expected<std::monostate> check_plane_st(const PlaneDag& p) {
    if (!is_acyclic(p.g))
        return Error{ErrorCode::NotStGraph, "graph has a directed cycle"};
    auto sources = source_vertices(p.g);
    auto sinks = sink_vertices(p.g);
    if (sources.size() != 1)
        return Error{ErrorCode::NotStGraph,
                     "expected one source, found " + std::to_string(sources.size())};
    if (sinks.size() != 1)
        return Error{ErrorCode::NotStGraph,
                     "expected one sink, found " + std::to_string(sinks.size())};
    if (!is_bimodal(p))
        return Error{ErrorCode::NotUpwardPlane, "rotation is not bimodal"};
    if (p.g.m() > 0) {
        FaceSet fs = trace_faces(p);
        if (!vertex_on_face(p, fs, sources[0], fs.outer))
            return Error{ErrorCode::NotStGraph,
                         "source " + p.g.names[sources[0]] + " is not on the outer face"};
        if (!vertex_on_face(p, fs, sinks[0], fs.outer))
            return Error{ErrorCode::NotStGraph,
                         "sink " + p.g.names[sinks[0]] + " is not on the outer face"};
    }
    return std::monostate{};
}

FaceTopBottom face_tops_bottoms(const PlaneDag& p, const FaceSet& fs) {
    FaceTopBottom r;
    r.top.assign(fs.faces.size(), -1);
    r.bottom.assign(fs.faces.size(), -1);
    for (size_t fi = 0; fi < fs.faces.size(); ++fi) {
        const auto& orbit = fs.faces[fi];
        for (size_t i = 0; i < orbit.size(); ++i) {
            Dart d1 = orbit[i];
            Dart d2 = orbit[(i + 1) % orbit.size()];
            int v = p.dart_vertex(twin(d1)); // common vertex of the two boundary edges
            bool into1 = !d1.at_head;        // d1 travels tail to head, arriving at v
            bool into2 = d2.at_head;
            if (into1 && into2) {
                assert(r.top[fi] == -1);
                r.top[fi] = v;
            } else if (!into1 && !into2) {
                assert(r.bottom[fi] == -1);
                r.bottom[fi] = v;
            }
        }
        assert(r.top[fi] != -1 && r.bottom[fi] != -1);
    }
    return r;
}

Expected<std::vector<std::vector<int>>> successor_lists(const PlaneDag& p) {
    if (auto st = check_plane_st(p); !st.ok())
        return st.error();
    FaceSet fs = trace_faces(p);
    std::vector<std::vector<int>> out(p.g.n());
    for (int v = 0; v < p.g.n(); ++v)
        for (Dart d : successors_l2r(p, fs, v))
            out[v].push_back(p.g.edges[d.edge].head);
    return out;
}

namespace {

// Pair categories for consecutive successors, read off the face between them.
enum class PairCat { Ascend, Descend, Free };

std::vector<PairCat> pair_categories(const PlaneDag& p, const FaceSet& fs,
                                     const FaceTopBottom& tb, const std::vector<Dart>& succ) {
    std::vector<PairCat> cats;
    for (size_t g = 0; g + 1 < succ.size(); ++g) {
        int f = fs.face_of_dart(succ[g]); // face between successors g and g+1
        int a = p.g.edges[succ[g].edge].head;
        int b = p.g.edges[succ[g + 1].edge].head;
        if (a == b)
            cats.push_back(PairCat::Free); // parallel pair, no proper path either way
        else if (tb.top[f] == b)
            cats.push_back(PairCat::Ascend); // the face closes with a path a to b
        else if (tb.top[f] == a)
            cats.push_back(PairCat::Descend); // the face closes with a path b to a
        else
            cats.push_back(PairCat::Free);
    }
    return cats;
}

} // namespace

Expected<std::optional<ValleyWitness>> has_valley(const PlaneDag& p) {
    if (auto st = check_plane_st(p); !st.ok())
        return st.error();
    FaceSet fs = trace_faces(p);
    FaceTopBottom tb = face_tops_bottoms(p, fs);
    for (int v = 0; v < p.g.n(); ++v) {
        auto succ = successors_l2r(p, fs, v);
        if (succ.size() < 3)
            continue;
        auto cats = pair_categories(p, fs, tb, succ);
        int first_d = -1, last_a = -1;
        for (int g = 0; g < (int)cats.size(); ++g) {
            if (cats[g] == PairCat::Descend && first_d == -1)
                first_d = g;
            if (cats[g] == PairCat::Ascend)
                last_a = g;
        }
        if (first_d != -1 && last_a > first_d) {
            ValleyWitness w;
            w.vertex = v;
            w.i = first_d + 2; // 1-based successor reached by the leftward path
            w.j = last_a + 1;
            w.left_head = p.g.edges[succ[first_d].edge].head;
            w.right_head = p.g.edges[succ[last_a + 1].edge].head;
            return std::optional<ValleyWitness>(w);
        }
    }
    return std::optional<ValleyWitness>();
}

Expected<StOrdering> bitonic_st_ordering(const PlaneDag& p) {
    auto valley = has_valley(p);
    if (!valley.ok())
        return valley.error();
    if (valley.value().has_value()) {
        const ValleyWitness& w = *valley.value();
        return Error{ErrorCode::ValleyPresent,
                     "valley at " + p.g.names[w.vertex] + ": successors " + std::to_string(w.i) +
                         ".." + std::to_string(w.j) + " are walled in by paths toward " +
                         p.g.names[w.left_head] + " and " + p.g.names[w.right_head]};
    }

    int n = p.g.n();
    std::set<std::pair<int, int>> before; // pi(first) < pi(second)
    for (const Edge& e : p.g.edges)
        before.insert({e.tail, e.head});

    FaceSet fs = trace_faces(p);
    FaceTopBottom tb = face_tops_bottoms(p, fs);
    for (int v = 0; v < n; ++v) {
        auto succ = successors_l2r(p, fs, v);
        if (succ.size() < 2)
            continue;
        auto cats = pair_categories(p, fs, tb, succ);
        int first_d = (int)cats.size();
        for (int g = 0; g < (int)cats.size(); ++g)
            if (cats[g] == PairCat::Descend) {
                first_d = g;
                break;
            }
        // One peak: ranks ascend left of the first descending pair, then descend.
        for (int g = 0; g < (int)cats.size(); ++g) {
            int a = p.g.edges[succ[g].edge].head;
            int b = p.g.edges[succ[g + 1].edge].head;
            if (a == b)
                continue;
            if (g < first_d)
                before.insert({a, b});
            else
                before.insert({b, a});
        }
    }

    std::vector<std::vector<int>> adj(n);
    std::vector<int> indeg(n, 0);
    for (auto [a, b] : before) {
        adj[a].push_back(b);
        ++indeg[b];
    }
    std::priority_queue<int, std::vector<int>, std::greater<int>> heap;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0)
            heap.push(v);
    StOrdering ord;
    ord.pi.assign(n, 0);
    int rank = 0;
    while (!heap.empty()) {
        int v = heap.top();
        heap.pop();
        ord.pi[v] = ++rank;
        for (int w : adj[v])
            if (--indeg[w] == 0)
                heap.push(w);
    }
    if (rank != n)
        return Error{ErrorCode::ValleyPresent, "successor rank constraints form a cycle"};
    return ord;
}

Expected<LDrawing> realize_from_bitonic(const PlaneDag& p, const StOrdering& ord) {
    if (auto st = check_plane_st(p); !st.ok())
        return st.error();
    auto fail = [](std::string d) { return Error{ErrorCode::RealizationFailed, std::move(d)}; };

    int n = p.g.n();
    if ((int)ord.pi.size() != n)
        return fail("ordering has " + std::to_string(ord.pi.size()) + " ranks for " +
                    std::to_string(n) + " vertices");
    std::vector<int> by_rank(n, -1);
    for (int v = 0; v < n; ++v) {
        int r = ord.pi[v];
        if (r < 1 || r > n || by_rank[r - 1] != -1)
            return fail("ordering is not a permutation of 1.." + std::to_string(n));
        by_rank[r - 1] = v;
    }
    for (const Edge& e : p.g.edges)
        if (ord.pi[e.tail] >= ord.pi[e.head])
            return fail("ordering does not increase along edge " + std::to_string(e.id));

    FaceSet fs = trace_faces(p);
    auto in_adj = p.g.in_adj();

    // Sweep bottom to top. The sequence holds, in column order, every edge whose tail
    // is placed but whose head is not, plus one settled-column marker per placed
    // vertex. All open edges of a vertex share its column and stay one contiguous
    // bundle around its marker; heads may only peel edges off a bundle's ends.
    struct Entry {
        int edge; // -1 for a settled-column marker
        int vertex;
    };
    std::vector<Entry> seq;

    for (int r = 0; r < n; ++r) {
        int v = by_rank[r];
        std::set<int> inset(in_adj[v].begin(), in_adj[v].end());
        std::vector<int> pos;
        for (int i = 0; i < (int)seq.size(); ++i)
            if (seq[i].edge >= 0 && inset.count(seq[i].edge))
                pos.push_back(i);
        if (pos.size() != inset.size())
            return fail("open edge missing below " + p.g.names[v]);

        int insert_at = (int)seq.size();
        if (!pos.empty()) {
            auto pred = predecessors_l2r(p, fs, v);
            if (pred.size() != pos.size())
                return fail("predecessor count mismatch at " + p.g.names[v]);
            for (size_t i = 0; i < pos.size(); ++i)
                if (seq[pos[i]].edge != pred[i].edge)
                    return fail("predecessor order mismatch at " + p.g.names[v]);

            // The row of v may pass only over settled columns and over the columns of
            // its own outermost predecessors, which it touches at a bend.
            int u_front = seq[pos.front()].vertex;
            int u_back = seq[pos.back()].vertex;
            for (int i = pos.front() + 1; i < pos.back(); ++i) {
                const Entry& en = seq[i];
                if (en.edge < 0 || inset.count(en.edge))
                    continue;
                if (en.vertex != u_front && en.vertex != u_back)
                    return fail("open edge of " + p.g.names[en.vertex] + " blocks the row of " +
                                p.g.names[v]);
            }

            // Within each predecessor's bundle the consumed edges must sit at the ends.
            std::set<int> tails;
            for (int i : pos)
                tails.insert(seq[i].vertex);
            for (int u : tails) {
                int a = -1;
                for (int i : pos)
                    if (seq[i].vertex == u) {
                        a = i;
                        break;
                    }
                int b = a;
                while (a > 0 && seq[a - 1].vertex == u)
                    --a;
                while (b + 1 < (int)seq.size() && seq[b + 1].vertex == u)
                    ++b;
                int first_kept = -1, last_kept = -1;
                for (int i = a; i <= b; ++i) {
                    if (seq[i].edge < 0 || inset.count(seq[i].edge))
                        continue;
                    if (first_kept == -1)
                        first_kept = i;
                    last_kept = i;
                }
                if (first_kept != -1)
                    for (int i = first_kept; i <= last_kept; ++i)
                        if (seq[i].edge >= 0 && inset.count(seq[i].edge))
                            return fail("out-edges of " + p.g.names[u] + " close out of order");
            }

            insert_at = pos.back() - (int)pos.size() + 1;
            for (auto it = pos.rbegin(); it != pos.rend(); ++it)
                seq.erase(seq.begin() + *it);
        }

        auto succ = successors_l2r(p, fs, v);
        std::vector<Entry> block;
        if (succ.empty()) {
            block.push_back({-1, v});
        } else {
            int peak = 0;
            for (int i = 1; i < (int)succ.size(); ++i)
                if (ord.pi[p.g.edges[succ[i].edge].head] > ord.pi[p.g.edges[succ[peak].edge].head])
                    peak = i;
            for (int i = 0; i <= peak; ++i)
                block.push_back({succ[i].edge, v});
            block.push_back({-1, v});
            for (int i = peak + 1; i < (int)succ.size(); ++i)
                block.push_back({succ[i].edge, v});
        }
        seq.insert(seq.begin() + insert_at, block.begin(), block.end());
    }

    LDrawing d;
    d.x.assign(n, 0);
    d.y.assign(n, 0);
    if ((int)seq.size() != n)
        return fail("sweep left " + std::to_string(seq.size()) + " columns for " +
                    std::to_string(n) + " vertices");
    for (int i = 0; i < n; ++i) {
        assert(seq[i].edge < 0);
        d.x[seq[i].vertex] = i + 1;
    }
    for (int v = 0; v < n; ++v)
        d.y[v] = ord.pi[v];

    if (auto ok = validate_ldrawing(p, d); !ok.ok())
        return fail("constructed drawing rejected: " + ok.error().detail);
    return d;
}

} // namespace uplan
