#include "uplan/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <functional>
#include <numeric>
#include <random>

namespace uplan {

namespace {

// All linear extensions, each as the vertex sequence from bottom to top, in
// lexicographic order of the sequence. Bounded by max_n! which is small.
std::vector<std::vector<int>> linear_extensions(const Dag& g) {
    int n = g.n();
    auto out_adj = g.out_adj();
    std::vector<int> indeg(n, 0);
    for (const Edge& e : g.edges) ++indeg[e.head];
    std::vector<std::vector<int>> result;
    std::vector<int> seq;
    std::function<void()> rec = [&] {
        if ((int)seq.size() == n) {
            result.push_back(seq);
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (indeg[v] != 0) continue;
            indeg[v] = -1; // placed
            seq.push_back(v);
            for (int e : out_adj[v]) --indeg[g.edges[e].head];
            rec();
            for (int e : out_adj[v]) ++indeg[g.edges[e].head];
            seq.pop_back();
            indeg[v] = 0;
        }
    };
    rec();
    return result;
}

// Does the vertical of edge a cross the horizontal of edge b? Mirrors the
// validator: strict interior on both segments. Requires both x values of b and
// the tail x of a to be assigned.
bool seg_cross(const Dag& g, const std::vector<long long>& x, const std::vector<long long>& y,
               int a, int b) {
    const Edge& ea = g.edges[a];
    const Edge& eb = g.edges[b];
    long long col = x[ea.tail];
    long long y0 = std::min(y[ea.tail], y[ea.head]);
    long long y1 = std::max(y[ea.tail], y[ea.head]);
    long long row = y[eb.head];
    long long x0 = std::min(x[eb.tail], x[eb.head]);
    long long x1 = std::max(x[eb.tail], x[eb.head]);
    return x0 < col && col < x1 && y0 < row && row < y1;
}

// After assigning x[v], check every newly determined segment against every
// determined one. A vertical is determined once its tail has a column, a
// horizontal once both endpoints do. Unassigned columns are 0; real columns
// start at 1.
bool conflict_after_assign(const Dag& g, const std::vector<long long>& x,
                           const std::vector<long long>& y, int v) {
    const int m = g.m();
    for (int e = 0; e < m; ++e) {
        const Edge& ee = g.edges[e];
        bool new_vert = ee.tail == v;
        bool new_horz = (ee.tail == v && x[ee.head] != 0) || (ee.head == v && x[ee.tail] != 0);
        if (!new_vert && !new_horz) continue;
        for (int f = 0; f < m; ++f) {
            if (f == e) continue;
            const Edge& ef = g.edges[f];
            if (new_vert && x[ef.tail] != 0 && x[ef.head] != 0 && seg_cross(g, x, y, e, f))
                return true;
            if (new_horz && x[ef.tail] != 0 && seg_cross(g, x, y, f, e))
                return true;
        }
    }
    return false;
}

// Depth-first column assignment in vertex id order, columns tried ascending, so
// the first completed assignment is the lexicographically smallest x vector.
// cutoff carries the best first-column found by a concurrent branch; a branch
// whose own first column can no longer win stops early.
bool dfs_columns(const Dag& g, const PlaneDag* embed, const std::vector<long long>& y,
                 std::vector<long long>& x, std::vector<bool>& used, int v,
                 std::optional<LDrawing>& out, const std::atomic<int>* cutoff, int branch) {
    if (cutoff && cutoff->load(std::memory_order_relaxed) < branch)
        return false;
    int n = g.n();
    if (v == n) {
        LDrawing d{x, y};
        bool geo = validate_geometry(g, d).ok();
        assert(geo); // pruning matches the validator, so leaves are planar
        bool ok = geo && (!embed || validate_ldrawing(*embed, d).ok());
        if (ok) out = d;
        return ok;
    }
    for (int c = 1; c <= n; ++c) {
        if (used[c]) continue;
        x[v] = c;
        used[c] = true;
        if (!conflict_after_assign(g, x, y, v) &&
            dfs_columns(g, embed, y, x, used, v + 1, out, cutoff, branch))
            return true;
        used[c] = false;
        x[v] = 0;
    }
    return false;
}

std::optional<LDrawing> search_extension(const Dag& g, const PlaneDag* embed,
                                         const std::vector<long long>& y, bool parallel) {
    int n = g.n();
#ifdef UPLAN_HAVE_OPENMP
    if (parallel && n > 1) {
        // Split on the first vertex's column. Every branch below the eventual
        // winner runs to completion, so the chosen result is the same one the
        // serial scan finds.
        std::vector<std::optional<LDrawing>> res(n + 1);
        std::atomic<int> best{n + 1};
#pragma omp parallel for schedule(dynamic, 1)
        for (int c = 1; c <= n; ++c) {
            if (best.load(std::memory_order_relaxed) < c) continue;
            std::vector<long long> x(n, 0);
            std::vector<bool> used(n + 1, false);
            x[0] = c;
            used[c] = true;
            if (conflict_after_assign(g, x, y, 0)) continue;
            std::optional<LDrawing> out;
            if (dfs_columns(g, embed, y, x, used, 1, out, &best, c)) {
                res[c] = out;
                int cur = best.load();
                while (c < cur && !best.compare_exchange_weak(cur, c)) {}
            }
        }
        for (int c = 1; c <= n; ++c)
            if (res[c]) return res[c];
        return std::nullopt;
    }
#else
    (void)parallel;
#endif
    std::vector<long long> x(n, 0);
    std::vector<bool> used(n + 1, false);
    std::optional<LDrawing> out;
    dfs_columns(g, embed, y, x, used, 0, out, nullptr, 0);
    return out;
}

Expected<std::optional<LDrawing>> brute_core(const Dag& g, const PlaneDag* embed,
                                             const BruteForceOptions& opt) {
    if (g.n() > opt.max_n)
        return Error{ErrorCode::TooLarge, "brute force limited to " + std::to_string(opt.max_n) +
                                              " vertices, got " + std::to_string(g.n())};
    if (!is_acyclic(g))
        return std::optional<LDrawing>(); // no upward drawing of a cyclic graph
    for (const auto& ext : linear_extensions(g)) {
        std::vector<long long> y(g.n());
        for (int i = 0; i < g.n(); ++i) y[ext[i]] = i + 1;
        if (auto d = search_extension(g, embed, y, opt.parallel))
            return std::optional<LDrawing>(*d);
    }
    return std::optional<LDrawing>();
}

} // namespace

Expected<std::optional<LDrawing>> brute_force_ldrawing(const PlaneDag& p,
                                                       const BruteForceOptions& opt) {
    return brute_core(p.g, opt.embed_fixed ? &p : nullptr, opt);
}

Expected<std::optional<LDrawing>> brute_force_ldrawing(const Dag& g, const BruteForceOptions& opt) {
    return brute_core(g, nullptr, opt);
}

Expected<std::optional<ValleyWitness>> brute_force_valley(const PlaneDag& p) {
    if (auto st = check_plane_st(p); !st.ok())
        return st.error();
    auto reach = reachability(p.g);
    FaceSet fs = trace_faces(p);
    for (int v = 0; v < p.g.n(); ++v) {
        auto succ = successors_l2r(p, fs, v);
        if (succ.size() < 3)
            continue;
        // Pair g of consecutive successors descends when the right head reaches
        // the left one and ascends when the left reaches the right; parallel or
        // incomparable heads constrain nothing.
        int first_down = -1, last_up = -1;
        for (int g = 0; g + 1 < (int)succ.size(); ++g) {
            int a = p.g.edges[succ[g].edge].head;
            int b = p.g.edges[succ[g + 1].edge].head;
            if (a == b) continue;
            if (reach[b][a] && first_down == -1) first_down = g;
            if (reach[a][b]) last_up = g;
        }
        if (first_down != -1 && last_up > first_down) {
            ValleyWitness w;
            w.vertex = v;
            w.i = first_down + 2;
            w.j = last_up + 1;
            w.left_head = p.g.edges[succ[first_down].edge].head;
            w.right_head = p.g.edges[succ[last_up + 1].edge].head;
            return std::optional<ValleyWitness>(w);
        }
    }
    return std::optional<ValleyWitness>();
}

Expected<bool> hutton_lubiw_check(const PlaneDag& p) {
    if (!is_acyclic(p.g))
        return Error{ErrorCode::NotStGraph, "graph has a directed cycle"};
    auto srcs = source_vertices(p.g);
    if (srcs.size() != 1)
        return Error{ErrorCode::WrongSourceCount,
                     "expected one source, found " + std::to_string(srcs.size())};
    if (p.g.m() == 0)
        return true;
    int s = srcs[0];
    FaceSet fs = trace_faces(p);
    bool s_on_outer = false;
    for (Dart d : p.rotation[s])
        if (fs.face_of_dart(d) == fs.outer) s_on_outer = true;
    if (!s_on_outer)
        return false;

    // For each vertex v, deleting every edge whose head cannot reach v leaves
    // the sub-embedding induced by v's ancestors. Removing an edge merges the
    // faces on its two sides, so the induced outer face is the union-find class
    // of the original outer; v must keep a dart on that class.
    auto reach = reachability(p.g);
    int nf = (int)fs.faces.size();
    std::vector<int> dsu(nf);
    auto find = [&](int a) {
        while (dsu[a] != a) {
            dsu[a] = dsu[dsu[a]];
            a = dsu[a];
        }
        return a;
    };
    for (int v = 0; v < p.g.n(); ++v) {
        if (v == s) continue;
        std::iota(dsu.begin(), dsu.end(), 0);
        for (int e = 0; e < p.g.m(); ++e) {
            if (reach[p.g.edges[e].head][v]) continue; // edge survives
            dsu[find(fs.face_of[e][0])] = find(fs.face_of[e][1]);
        }
        int outer_class = find(fs.outer);
        bool on_outer = false;
        for (Dart d : p.rotation[v]) {
            if (!reach[p.g.edges[d.edge].head][v]) continue;
            if (find(fs.face_of_dart(d)) == outer_class) {
                on_outer = true;
                break;
            }
        }
        if (!on_outer)
            return false;
    }
    return true;
}

std::pair<Dag, PlaneDag> generate_frati_tree(int k) {
    assert(k >= 1);
    int top_odd = 2 * ((k + 1) / 2) - 1;
    int top_even = 2 * (k / 2);
    Dag g;
    std::vector<int> rung(top_odd + 2, -1), below(top_odd + 2, -1), above(top_even + 2, -1);
    // Rungs climb a diagonal: odd rungs from the top odd down to 1, then even
    // rungs from 2 up. Each odd rung carries a pendant sink below the diagonal,
    // each even rung a pendant source above it.
    for (int o = top_odd; o >= 1; o -= 2) {
        below[o] = g.add_vertex("s" + std::to_string(o));
        rung[o] = g.add_vertex("v" + std::to_string(o));
    }
    for (int e = 2; e <= top_even; e += 2) {
        rung[e] = g.add_vertex("v" + std::to_string(e));
        above[e] = g.add_vertex("t" + std::to_string(e));
    }
    std::map<std::pair<int, int>, int> eix;
    auto add = [&](int a, int b) { eix[{a, b}] = g.add_edge(a, b); };
    for (int o = 1; o <= top_odd; o += 2) add(rung[o], below[o]);
    if (top_even >= 2) add(rung[2], rung[1]);
    for (int e = 2; e <= top_even; e += 2) {
        if (e + 1 <= top_odd) add(rung[e + 1], rung[e]);
        if (e - 1 >= 3) add(rung[e - 1], rung[e]);
        add(above[e], rung[e]);
    }
    auto dart_at = [&](int a, int b, int at) {
        int e = eix.at({a, b});
        return Dart{e, g.edges[e].head == at};
    };
    std::vector<std::vector<Dart>> rot(g.n());
    for (int o = 1; o <= top_odd; o += 2) {
        std::vector<Dart>& r = rot[rung[o]];
        if (o == 1) {
            if (top_even >= 2) r.push_back(dart_at(rung[2], rung[1], rung[1]));
            r.push_back(dart_at(rung[1], below[1], rung[1]));
        } else {
            r.push_back(dart_at(rung[o], rung[o - 1], rung[o]));
            if (o + 1 <= top_even) r.push_back(dart_at(rung[o], rung[o + 1], rung[o]));
            r.push_back(dart_at(rung[o], below[o], rung[o]));
        }
        rot[below[o]] = {dart_at(rung[o], below[o], below[o])};
    }
    for (int e = 2; e <= top_even; e += 2) {
        std::vector<Dart>& r = rot[rung[e]];
        r.push_back(dart_at(above[e], rung[e], rung[e]));
        if (e == 2)
            r.push_back(dart_at(rung[2], rung[1], rung[2]));
        else
            r.push_back(dart_at(rung[e - 1], rung[e], rung[e]));
        if (e + 1 <= top_odd) r.push_back(dart_at(rung[e + 1], rung[e], rung[e]));
        rot[above[e]] = {dart_at(above[e], rung[e], above[e])};
    }
    auto p = build_plane_dag(g, rot, Dart{0, false}); // a tree has one face
    assert(p.ok());
    return {g, p.value()};
}

namespace {

void insert_after(std::vector<Dart>& r, Dart after, Dart nd) {
    auto it = std::find(r.begin(), r.end(), after);
    assert(it != r.end());
    r.insert(std::next(it), nd);
}

void insert_before(std::vector<Dart>& r, Dart before, Dart nd) {
    auto it = std::find(r.begin(), r.end(), before);
    assert(it != r.end());
    r.insert(it, nd);
}

} // namespace

PlaneDag random_plane_dag(std::uint64_t seed, int n_target, Mode mode) {
    std::mt19937_64 rng(seed);
    Dag g;
    g.add_vertex("v0");
    g.add_vertex("v1");
    g.add_edge(0, 1);
    PlaneDag p{g, {{Dart{0, false}}, {Dart{0, true}}}, Dart{0, false}};
    // Pendants always leave an existing vertex, so v0 stays the only source:
    // a chord into v0 would close a cycle and is never eligible. Single-sink
    // graphs are the reversal of single-source ones. Chords never duplicate an
    // existing adjacency, so the output is simple: parallel edges coincide
    // entirely in an L-drawing, which blurs which embedding a drawing
    // preserves, and these graphs feed equivalence checks against the drawing
    // search.
    int extra_chords = (int)(rng() % (std::uint64_t)(n_target + 1));
    int stale = 0;
    while (p.g.n() < n_target || extra_chords > 0) {
        if (++stale > 300) break; // no eligible chord left in a small graph
        bool pendant = p.g.n() < n_target && rng() % 100 < 55;
        FaceSet fs = trace_faces(p);
        const auto& orbit = fs.faces[rng() % fs.faces.size()];
        int k = (int)orbit.size();
        if (pendant) {
            Dart before = twin(orbit[rng() % k]);
            int u = p.dart_vertex(before);
            int w = p.g.add_vertex("v" + std::to_string(p.g.n()));
            int e = p.g.add_edge(u, w);
            insert_after(p.rotation[u], before, Dart{e, false});
            p.rotation.push_back({Dart{e, true}});
            stale = 0;
        } else {
            int i = (int)(rng() % k), j = (int)(rng() % k);
            if (i == j) continue;
            Dart bu = twin(orbit[i]), bv = twin(orbit[j]);
            int u = p.dart_vertex(bu), v = p.dart_vertex(bv);
            if (u == v) continue;
            bool dup = false;
            for (const Edge& ed : p.g.edges)
                dup = dup || (ed.tail == u && ed.head == v) ||
                      (ed.tail == v && ed.head == u);
            if (dup) continue;
            auto reach = reachability(p.g);
            bool uv_ok = !reach[v][u], vu_ok = !reach[u][v];
            if (!uv_ok && !vu_ok) continue;
            bool forward = uv_ok && (!vu_ok || rng() % 2 == 0);
            if (!forward) {
                std::swap(u, v);
                std::swap(bu, bv);
            }
            int e = p.g.add_edge(u, v);
            insert_after(p.rotation[u], bu, Dart{e, false});
            insert_after(p.rotation[v], bv, Dart{e, true});
            if (p.g.n() >= n_target) --extra_chords;
            stale = 0;
        }
    }
    assert(source_vertices(p.g).size() == 1);
    if (mode == Mode::SingleSink) p = reverse_plane(p);
    return p;
}

Dag random_tree(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    Dag g;
    g.add_vertex("v0");
    for (int i = 1; i < n; ++i) {
        int parent = (int)(rng() % (std::uint64_t)i);
        g.add_vertex("v" + std::to_string(i));
        if (rng() % 2 == 0)
            g.add_edge(parent, i);
        else
            g.add_edge(i, parent);
    }
    return g;
}

Dag random_cactus(std::uint64_t seed, int n, Mode mode) {
    std::mt19937_64 rng(seed);
    Dag g;
    g.add_vertex("v0");
    auto fresh = [&] { return g.add_vertex("v" + std::to_string(g.n())); };
    while (g.n() < n) {
        int u = (int)(rng() % (std::uint64_t)g.n());
        int room = n - g.n();
        if (room >= 2 && rng() % 100 < 45) {
            // A cycle block: two directed paths from u to a new common sink.
            int nv = 2 + (int)(rng() % (std::uint64_t)std::min(room - 1, 3));
            int la = 1 + (int)(rng() % (std::uint64_t)nv); // path lengths la + lb = nv + 1
            int lb = nv + 1 - la;
            int w = fresh();
            for (int side = 0; side < 2; ++side) {
                int len = side == 0 ? la : lb;
                int prev = u;
                for (int i = 1; i < len; ++i) {
                    int x = fresh();
                    g.add_edge(prev, x);
                    prev = x;
                }
                g.add_edge(prev, w);
            }
        } else {
            int w = fresh();
            g.add_edge(u, w);
        }
    }
    if (mode == Mode::SingleSink)
        for (Edge& e : g.edges) std::swap(e.tail, e.head);
    return g;
}

Dag random_sp_dag(std::uint64_t seed, int max_n) {
    std::mt19937_64 rng(seed);
    int n_target = 2 + (int)(rng() % (std::uint64_t)std::max(1, max_n - 1));
    Dag g;
    g.add_vertex("s");
    g.add_vertex("t");
    g.add_edge(0, 1);
    g.add_edge(0, 1); // parallel start keeps the result biconnected
    int extra_par = (int)(rng() % (std::uint64_t)(n_target + 1));
    while (g.n() < n_target || extra_par > 0) {
        int e = (int)(rng() % (std::uint64_t)g.m());
        if (g.n() < n_target && rng() % 100 < 60) {
            int w = g.add_vertex("v" + std::to_string(g.n()));
            int head = g.edges[e].head;
            g.edges[e].head = w;
            g.add_edge(w, head);
        } else {
            g.add_edge(g.edges[e].tail, g.edges[e].head);
            if (g.n() >= n_target) --extra_par;
        }
    }
    return g;
}

PlaneDag random_sp_st_plane(std::uint64_t seed, int max_n) {
    std::mt19937_64 rng(seed);
    int n_target = 2 + (int)(rng() % (std::uint64_t)std::max(1, max_n - 1));
    Dag g;
    g.add_vertex("s");
    g.add_vertex("t");
    g.add_edge(0, 1);
    g.add_edge(0, 1);
    PlaneDag p{g,
               {{Dart{0, false}, Dart{1, false}}, {Dart{1, true}, Dart{0, true}}},
               Dart{0, false}};
    int extra_par = (int)(rng() % (std::uint64_t)(n_target + 1));
    while (p.g.n() < n_target || extra_par > 0) {
        int e = (int)(rng() % (std::uint64_t)p.g.m());
        int tail = p.g.edges[e].tail, head = p.g.edges[e].head;
        if (p.g.n() < n_target && rng() % 100 < 60) {
            // Subdivide e: it keeps its tail dart, a new edge takes over at the head.
            int w = p.g.add_vertex("v" + std::to_string(p.g.n()));
            int e2 = p.g.add_edge(w, head);
            p.g.edges[e].head = w;
            *std::find(p.rotation[head].begin(), p.rotation[head].end(), Dart{e, true}) =
                Dart{e2, true};
            p.rotation.push_back({Dart{e, true}, Dart{e2, false}});
        } else {
            // Duplicate e: the copy sits on one side of it, so the tail darts
            // are adjacent one way round and the head darts the other.
            int e2 = p.g.add_edge(tail, head);
            if (rng() % 2 == 0) {
                insert_after(p.rotation[tail], Dart{e, false}, Dart{e2, false});
                insert_before(p.rotation[head], Dart{e, true}, Dart{e2, true});
            } else {
                insert_before(p.rotation[tail], Dart{e, false}, Dart{e2, false});
                insert_after(p.rotation[head], Dart{e, true}, Dart{e2, true});
            }
            if (p.g.n() >= n_target) --extra_par;
        }
    }
    // Make a face with both poles the outer face; one always exists because the
    // growth steps never separate s from t along a face boundary.
    FaceSet fs = trace_faces(p);
    for (Dart d : p.rotation[0]) {
        const auto& orbit = fs.faces[fs.face_of_dart(d)];
        bool has_t = false;
        for (Dart o : orbit)
            if (p.dart_vertex(o) == 1) has_t = true;
        if (has_t) {
            p.outer = d;
            break;
        }
    }
    return p;
}

}
