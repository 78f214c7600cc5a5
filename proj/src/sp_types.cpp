#include "uplan/sp_types.hpp"

#include "uplan/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace uplan {

namespace {

Dart dart_at(const Dag& g, int e, int v) {
    assert(g.edges[e].tail == v || g.edges[e].head == v);
    return Dart{e, g.edges[e].head == v};
}

// Biconnectivity of the underlying undirected multigraph. Tracking the parent
// edge rather than the parent vertex makes a parallel edge count as a back
// edge, so digons are biconnected.
bool undirected_biconnected(const Dag& g) {
    const int n = g.n();
    const int m = g.m();
    if (n < 2 || m == 0) return false;
    std::vector<std::vector<std::pair<int, int>>> adj(n); // (neighbor, edge)
    for (int e = 0; e < m; ++e) {
        adj[g.edges[e].tail].push_back({g.edges[e].head, e});
        adj[g.edges[e].head].push_back({g.edges[e].tail, e});
    }
    std::vector<int> disc(n, -1), low(n, 0), it(n, 0), parent_edge(n, -1), stack;
    int timer = 0;
    disc[0] = low[0] = timer++;
    stack.push_back(0);
    int root_children = 0;
    while (!stack.empty()) {
        int v = stack.back();
        if (it[v] == (int)adj[v].size()) {
            stack.pop_back();
            if (!stack.empty()) {
                int p = stack.back();
                low[p] = std::min(low[p], low[v]);
                if (p != 0 && low[v] >= disc[p]) return false; // articulation
            }
            continue;
        }
        auto [w, e] = adj[v][it[v]++];
        if (e == parent_edge[v]) continue;
        if (disc[w] == -1) {
            disc[w] = low[w] = timer++;
            parent_edge[w] = e;
            stack.push_back(w);
            if (v == 0) ++root_children;
        } else {
            low[v] = std::min(low[v], disc[w]);
        }
    }
    if (timer != n) return false; // disconnected
    if (root_children > 1) return false;
    return true;
}

// Series-parallel reduction of the undirected multigraph minus the reference
// edge. Each working edge carries the decomposition node it stands for;
// merges splice nested nodes of the same kind so chains and bundles stay flat.
struct Reducer {
    std::vector<SpNode>& nodes;
    struct RE {
        int u, v, node;
        bool alive;
    };
    std::vector<RE> re;
    int n;
    std::vector<bool> protect;

    Reducer(std::vector<SpNode>& ns, int nverts) : nodes(ns), n(nverts), protect(nverts, false) {}

    void add(int u, int v, int node) { re.push_back({u, v, node, true}); }

    int other(int i, int w) const { return re[i].u == w ? re[i].v : re[i].u; }

    void run() {
        bool changed = true;
        while (changed) {
            changed = false;
            // parallel merges
            std::map<std::pair<int, int>, std::vector<int>> buckets;
            for (int i = 0; i < (int)re.size(); ++i)
                if (re[i].alive)
                    buckets[{std::min(re[i].u, re[i].v), std::max(re[i].u, re[i].v)}].push_back(i);
            for (auto& [pr, ids] : buckets) {
                if (ids.size() < 2) continue;
                std::vector<int> ch;
                for (int i : ids) {
                    int nd = re[i].node;
                    if (nodes[nd].kind == SpKind::parallel) {
                        for (int c : nodes[nd].children) ch.push_back(c);
                    } else {
                        ch.push_back(nd);
                    }
                    re[i].alive = false;
                }
                nodes.push_back({SpKind::parallel, -1, ch, pr.first, pr.second});
                add(pr.first, pr.second, (int)nodes.size() - 1);
                changed = true;
            }
            if (changed) continue;
            // one series merge per pass; incidence is recomputed afterwards
            std::vector<std::vector<int>> inc(n);
            for (int i = 0; i < (int)re.size(); ++i)
                if (re[i].alive) {
                    inc[re[i].u].push_back(i);
                    inc[re[i].v].push_back(i);
                }
            for (int w = 0; w < n && !changed; ++w) {
                if (protect[w] || inc[w].size() != 2) continue;
                int i1 = inc[w][0], i2 = inc[w][1];
                if (i1 == i2) continue; // self loop, cannot happen in a dag
                int u = other(i1, w), v = other(i2, w);
                if (u == v) continue; // handled as a parallel pair
                if (u > v) {
                    std::swap(i1, i2);
                    std::swap(u, v);
                }
                auto part = [&](int i, int from) {
                    int nd = re[i].node;
                    if (nodes[nd].kind == SpKind::series) {
                        std::vector<int> cs = nodes[nd].children;
                        if (nodes[nd].pole_a != from) {
                            assert(nodes[nd].pole_b == from);
                            std::reverse(cs.begin(), cs.end());
                        }
                        return cs;
                    }
                    return std::vector<int>{nd};
                };
                std::vector<int> ch = part(i1, u);
                std::vector<int> tail = part(i2, w);
                ch.insert(ch.end(), tail.begin(), tail.end());
                nodes.push_back({SpKind::series, -1, ch, u, v});
                re[i1].alive = false;
                re[i2].alive = false;
                add(u, v, (int)nodes.size() - 1);
                changed = true;
            }
        }
    }

    std::vector<int> alive_edges() const {
        std::vector<int> out;
        for (int i = 0; i < (int)re.size(); ++i)
            if (re[i].alive) out.push_back(i);
        return out;
    }
};

// Drop nodes unreachable from the root and renumber the survivors.
void compact_tree(DecompTree& t) {
    std::vector<int> order, map(t.nodes.size(), -1), stack{t.root};
    std::vector<bool> seen(t.nodes.size(), false);
    seen[t.root] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (int c : t.nodes[v].children)
            if (!seen[c]) {
                seen[c] = true;
                stack.push_back(c);
            }
    }
    std::sort(order.begin(), order.end());
    for (int i = 0; i < (int)order.size(); ++i) map[order[i]] = i;
    std::vector<SpNode> fresh;
    fresh.reserve(order.size());
    for (int old : order) {
        SpNode nd = t.nodes[old];
        for (int& c : nd.children) c = map[c];
        fresh.push_back(std::move(nd));
    }
    t.nodes = std::move(fresh);
    t.root = map[t.root];
    t.ref_leaf = map[t.ref_leaf];
}

bool far_outgoing(FarLetter f) { return f != FarLetter::W && f != FarLetter::E; }

bool far_auto_right(FarLetter f) { return !far_auto_left(f); }

FarLetter lift_near(NearLetter x, bool cc) {
    if (x == NearLetter::L) return cc ? FarLetter::Lcc : FarLetter::Lc;
    return cc ? FarLetter::Rcc : FarLetter::Rc;
}

bool far_seam_ok(FarLetter ya, bool a_rfree, FarLetter xb, bool b_lfree) {
    if ((int)ya > (int)xb) return false;
    if (ya == xb) return far_auto_left(ya) ? a_rfree : b_lfree;
    bool a_lw = ya == FarLetter::Lcc || ya == FarLetter::Lc;
    bool a_rw = ya == FarLetter::Rcc || ya == FarLetter::Rc;
    bool b_lw = xb == FarLetter::Lcc || xb == FarLetter::Lc;
    bool b_rw = xb == FarLetter::Rcc || xb == FarLetter::Rc;
    if ((a_lw && b_rw) || (a_rw && b_lw)) return a_rfree || b_lfree;
    return true;
}

bool path_is(const PathType& p, FarLetter f, NearLetter x) { return p.far == f && p.near == x; }

bool has_wr_boundary(const CompType& t) {
    return path_is(t.left, FarLetter::W, NearLetter::R) || path_is(t.right, FarLetter::W, NearLetter::R);
}

bool has_el_boundary(const CompType& t) {
    return path_is(t.left, FarLetter::E, NearLetter::L) || path_is(t.right, FarLetter::E, NearLetter::L);
}

// A single edge bending right must stay west of every taller component whose
// boundary repeats its shape, and mirrored for the left-bending edge.
struct PlacementState {
    bool tall_wr = false; // composite with a (W,R) boundary path seen
    bool single_el = false;
};

bool placement_step(PlacementState& st, const CompType& t) {
    if (t.single_edge && path_is(t.left, FarLetter::W, NearLetter::R) && st.tall_wr) return false;
    if (!t.single_edge && has_el_boundary(t) && st.single_el) return false;
    if (!t.single_edge && has_wr_boundary(t)) st.tall_wr = true;
    if (t.single_edge && path_is(t.left, FarLetter::E, NearLetter::L)) st.single_el = true;
    return true;
}

std::uint32_t masked_key(const CompType& t) { return comp_type_key(t) & ~1u; }

} // namespace

std::uint32_t comp_type_key(const CompType& t) {
    std::uint32_t k = 0;
    k |= (std::uint32_t)t.left.far << 13;
    k |= (std::uint32_t)t.left.near << 12;
    k |= (std::uint32_t)t.right.far << 9;
    k |= (std::uint32_t)t.right.near << 8;
    k |= (std::uint32_t)t.near_lfree << 7;
    k |= (std::uint32_t)t.near_rfree << 6;
    k |= (std::uint32_t)t.far_lfree << 5;
    k |= (std::uint32_t)t.far_rfree << 4;
    k |= (std::uint32_t)t.single_edge << 3;
    k |= (std::uint32_t)t.left_single << 2;
    k |= (std::uint32_t)t.right_single << 1;
    k |= (std::uint32_t)t.near_is_a;
    return k;
}

bool far_auto_left(FarLetter f) {
    return f == FarLetter::Rcc || f == FarLetter::E || f == FarLetter::Rc;
}

const char* far_letter_name(FarLetter f, Mode mode) {
    static const char* src[] = {"R^cc", "L^cc", "W", "E", "R^c", "L^c"};
    static const char* snk[] = {"E^c", "W^c", "L", "R", "E^cc", "W^cc"};
    return (mode == Mode::SingleSource ? src : snk)[(int)f];
}

const char* near_letter_name(NearLetter x, Mode mode) {
    static const char* src[] = {"L", "R"};
    static const char* snk[] = {"W", "E"};
    return (mode == Mode::SingleSource ? src : snk)[(int)x];
}

std::string comp_type_name(const CompType& t, Mode mode) {
    std::string s = "<(";
    s += far_letter_name(t.left.far, mode);
    s += ",";
    s += near_letter_name(t.left.near, mode);
    s += "),(";
    s += far_letter_name(t.right.far, mode);
    s += ",";
    s += near_letter_name(t.right.near, mode);
    s += ")>";
    return s;
}

bool p_adjacent(const CompType& a, const CompType& b) {
    if (!far_seam_ok(a.right.far, a.far_rfree, b.left.far, b.far_lfree)) return false;
    NearLetter ya = a.right.near, xb = b.left.near;
    if (ya == NearLetter::L && xb == NearLetter::L) return a.near_rfree;
    if (ya == NearLetter::R && xb == NearLetter::R) return b.near_lfree;
    if (ya == NearLetter::L && xb == NearLetter::R) return a.near_rfree || b.near_lfree;
    return false;
}

bool starrable(const CompType& t) {
    return t.left == t.right && t.near_lfree && t.near_rfree && t.far_lfree && t.far_rfree;
}

bool TypeSet::contains(const CompType& t) const {
    for (const TypeEntry& e : entries)
        if (e.type == t) return true;
    return false;
}

// --- decomposition -----------------------------------------------------------

Expected<DecompTree> decompose_at_edge(const Dag& g, int ref_edge) {
    const int n = g.n();
    const int m = g.m();
    if (ref_edge < 0 || ref_edge >= m)
        return Error{ErrorCode::NotSeriesParallel, "reference edge out of range"};
    if (!undirected_biconnected(g))
        return Error{ErrorCode::NotBiconnected, "graph is not biconnected"};
    if (m == 1)
        return Error{ErrorCode::NotSeriesParallel, "a single edge has no two-terminal decomposition"};
    const int s = g.edges[ref_edge].tail;
    const int t = g.edges[ref_edge].head;

    DecompTree tree;
    tree.ref_edge = ref_edge;
    Reducer red(tree.nodes, n);
    red.protect[s] = red.protect[t] = true;
    for (int e = 0; e < m; ++e) {
        if (e == ref_edge) continue;
        tree.nodes.push_back({SpKind::edge, e, {}, g.edges[e].tail, g.edges[e].head});
        red.add(g.edges[e].tail, g.edges[e].head, (int)tree.nodes.size() - 1);
    }
    red.run();
    auto alive = red.alive_edges();
    if (alive.size() != 1)
        return Error{ErrorCode::NotSeriesParallel, "reduction stuck with " +
                                                       std::to_string(alive.size()) + " edges"};
    int h = red.re[alive[0]].node;
    assert((red.re[alive[0]].u == s && red.re[alive[0]].v == t) ||
           (red.re[alive[0]].u == t && red.re[alive[0]].v == s));

    tree.nodes.push_back({SpKind::edge, ref_edge, {}, s, t});
    tree.ref_leaf = (int)tree.nodes.size() - 1;
    if (tree.nodes[h].kind == SpKind::parallel) {
        tree.nodes[h].children.push_back(tree.ref_leaf);
        tree.nodes[h].pole_a = s;
        tree.nodes[h].pole_b = t;
        tree.root = h;
    } else {
        tree.nodes.push_back({SpKind::parallel, -1, {h, tree.ref_leaf}, s, t});
        tree.root = (int)tree.nodes.size() - 1;
    }
    compact_tree(tree);
    return tree;
}

Expected<DecompTree> decompose(const Dag& g, int pole) {
    if (pole < 0 || pole >= g.n())
        return Error{ErrorCode::NotSeriesParallel, "pole out of range"};
    int ref = -1;
    for (int e = 0; e < g.m(); ++e)
        if (g.edges[e].tail == pole || g.edges[e].head == pole) {
            ref = e;
            break;
        }
    if (ref == -1) return Error{ErrorCode::NotBiconnected, "pole has no incident edge"};
    auto tr = decompose_at_edge(g, ref);
    if (!tr.ok()) return tr.error();
    DecompTree tree = std::move(tr.value());
    if (tree.nodes[tree.root].pole_a != pole) {
        assert(tree.nodes[tree.root].pole_b == pole);
        std::swap(tree.nodes[tree.root].pole_a, tree.nodes[tree.root].pole_b);
    }
    return tree;
}

std::vector<int> subtree_edges(const DecompTree& t, int node) {
    std::vector<int> out, stack{node};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (t.nodes[v].kind == SpKind::edge) out.push_back(t.nodes[v].edge);
        for (int c : t.nodes[v].children) stack.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// --- embedding enumeration ---------------------------------------------------

namespace {

// Chain vertices v_0..v_k of a series node, derived from the shared poles of
// consecutive children.
std::vector<int> chain_vertices(const DecompTree& t, int node) {
    const SpNode& nd = t.nodes[node];
    std::vector<int> v{nd.pole_a};
    for (int c : nd.children) {
        const SpNode& ch = t.nodes[c];
        assert(ch.pole_a == v.back() || ch.pole_b == v.back());
        v.push_back(ch.pole_a == v.back() ? ch.pole_b : ch.pole_a);
    }
    assert(v.back() == nd.pole_b);
    return v;
}

// Builds the rotation system for one choice of child orders. Returns the
// contiguous dart arcs of `node` at its two poles; rotations of vertices
// interior to the subtree are written into rot. At a parallel node the arc at
// the near pole lists children east to west and the far pole west to east;
// which pole counts as near comes from `nears` (or pole_a when absent). In
// sink mode the composite hangs below its near pole, which mirrors the two
// concatenation orders.
struct ArcResult {
    std::vector<Dart> at_a, at_b;
};

ArcResult build_arcs(const Dag& g, const DecompTree& t, int node,
                     const std::vector<std::vector<int>>& orders, const std::vector<int>* nears,
                     bool sink_mode, std::vector<std::vector<Dart>>& rot) {
    const SpNode& nd = t.nodes[node];
    if (nd.kind == SpKind::edge) {
        return {{dart_at(g, nd.edge, nd.pole_a)}, {dart_at(g, nd.edge, nd.pole_b)}};
    }
    if (nd.kind == SpKind::series) {
        std::vector<int> verts = chain_vertices(t, node);
        std::vector<ArcResult> sub(nd.children.size());
        for (size_t i = 0; i < nd.children.size(); ++i)
            sub[i] = build_arcs(g, t, nd.children[i], orders, nears, sink_mode, rot);
        auto arc_of = [&](size_t i, int v) -> std::vector<Dart>& {
            return t.nodes[nd.children[i]].pole_a == v ? sub[i].at_a : sub[i].at_b;
        };
        for (size_t i = 1; i < verts.size() - 1; ++i) {
            std::vector<Dart> r = arc_of(i - 1, verts[i]);
            const std::vector<Dart>& up = arc_of(i, verts[i]);
            r.insert(r.end(), up.begin(), up.end());
            rot[verts[i]] = std::move(r);
        }
        return {arc_of(0, nd.pole_a), arc_of(nd.children.size() - 1, nd.pole_b)};
    }
    std::vector<ArcResult> sub(nd.children.size());
    for (size_t i = 0; i < nd.children.size(); ++i)
        sub[i] = build_arcs(g, t, nd.children[i], orders, nears, sink_mode, rot);
    const std::vector<int>& sigma = orders[node];
    assert(sigma.size() == nd.children.size());
    int near = nears ? (*nears)[node] : nd.pole_a;
    assert(near == nd.pole_a || near == nd.pole_b);
    int far = near == nd.pole_a ? nd.pole_b : nd.pole_a;
    auto concat = [&](int v, bool forward) {
        std::vector<Dart> out;
        for (size_t i = 0; i < sigma.size(); ++i) {
            int pos = sigma[forward ? i : sigma.size() - 1 - i];
            const SpNode& ch = t.nodes[nd.children[pos]];
            const std::vector<Dart>& arc = ch.pole_a == v ? sub[pos].at_a : sub[pos].at_b;
            out.insert(out.end(), arc.begin(), arc.end());
        }
        return out;
    };
    // near pole of an upward composite: counterclockwise runs east to west
    std::vector<Dart> near_arc = concat(near, sink_mode);
    std::vector<Dart> far_arc = concat(far, !sink_mode);
    if (near == nd.pole_a) return {std::move(near_arc), std::move(far_arc)};
    return {std::move(far_arc), std::move(near_arc)};
}

std::vector<std::vector<Dart>> rotation_for(const Dag& g, const DecompTree& t,
                                            const std::vector<std::vector<int>>& orders,
                                            const std::vector<int>* nears, bool sink_mode) {
    std::vector<std::vector<Dart>> rot(g.n());
    ArcResult root = build_arcs(g, t, t.root, orders, nears, sink_mode, rot);
    rot[t.nodes[t.root].pole_a] = std::move(root.at_a);
    rot[t.nodes[t.root].pole_b] = std::move(root.at_b);
    return rot;
}

std::vector<long long> canonical_rotation_key(const std::vector<std::vector<Dart>>& rot) {
    std::vector<long long> key;
    for (const auto& r : rot) {
        key.push_back(-1);
        if (r.empty()) continue;
        size_t best = 0;
        auto code = [&](const Dart& d) { return (long long)d.edge * 2 + (d.at_head ? 1 : 0); };
        for (size_t i = 1; i < r.size(); ++i)
            if (code(r[i]) < code(r[best])) best = i;
        for (size_t i = 0; i < r.size(); ++i) key.push_back(code(r[(best + i) % r.size()]));
    }
    return key;
}

} // namespace

Expected<std::vector<PlaneDag>> enumerate_embeddings_sp(const Dag& g, std::size_t limit) {
    if (g.m() == 0) return Error{ErrorCode::NotBiconnected, "graph has no edges"};
    auto tr = decompose_at_edge(g, 0);
    if (!tr.ok()) return tr.error();
    const DecompTree& tree = tr.value();

    std::vector<int> pnodes;
    std::size_t combos = 1;
    for (int i = 0; i < (int)tree.nodes.size(); ++i)
        if (tree.nodes[i].kind == SpKind::parallel) {
            pnodes.push_back(i);
            std::size_t k = tree.nodes[i].children.size();
            for (std::size_t f = 2; f <= k; ++f) {
                combos *= f;
                if (combos > limit)
                    return Error{ErrorCode::TooLarge, "embedding count exceeds limit"};
            }
        }

    std::vector<std::vector<int>> orders(tree.nodes.size());
    for (int i : pnodes) {
        orders[i].resize(tree.nodes[i].children.size());
        for (size_t j = 0; j < orders[i].size(); ++j) orders[i][j] = (int)j;
    }

    std::vector<PlaneDag> out;
    std::set<std::vector<long long>> seen;
    for (;;) {
        std::vector<std::vector<Dart>> rot = rotation_for(g, tree, orders, nullptr, false);
        std::vector<long long> base = canonical_rotation_key(rot);
        PlaneDag probe;
        probe.g = g;
        probe.rotation = rot;
        probe.outer = Dart{0, false};
        FaceSet fs = trace_faces(probe);
        for (size_t f = 0; f < fs.faces.size(); ++f) {
            Dart od = fs.faces[f][0];
            for (const Dart& d : fs.faces[f])
                if (std::pair(d.edge, d.at_head) < std::pair(od.edge, od.at_head)) od = d;
            std::vector<long long> key = base;
            key.push_back(-2);
            key.push_back((long long)od.edge * 2 + (od.at_head ? 1 : 0));
            if (!seen.insert(std::move(key)).second) continue;
            auto pd = build_plane_dag(g, rot, od);
            assert(pd.ok());
            out.push_back(std::move(pd.value()));
            if (out.size() > limit) return Error{ErrorCode::TooLarge, "embedding count exceeds limit"};
        }
        // odometer over the parallel orders
        size_t i = 0;
        for (; i < pnodes.size(); ++i) {
            if (std::next_permutation(orders[pnodes[i]].begin(), orders[pnodes[i]].end())) break;
        }
        if (i == pnodes.size()) break;
    }
    return out;
}

// --- type algebra ------------------------------------------------------------

TypeSet edge_types(Mode mode, bool near_is_a) {
    (void)mode; // letters are positional slots shared by both modes
    TypeSet out;
    CompType wr;
    wr.left = wr.right = PathType{FarLetter::W, NearLetter::R};
    wr.single_edge = wr.left_single = wr.right_single = true;
    wr.near_is_a = near_is_a;
    CompType el = wr;
    el.left = el.right = PathType{FarLetter::E, NearLetter::L};
    out.entries.push_back({wr, {}, {}});
    out.entries.push_back({el, {}, {}});
    return out;
}

std::optional<std::vector<int>> regex_select(const SimpleRegex& rho,
                                             const std::vector<std::vector<int>>& avail) {
    const int r = (int)rho.letters.size();
    assert(rho.starred.size() == rho.letters.size());
    const int n = (int)avail.size();
    // group occurrences by letter value
    std::vector<int> group_of(r, -1);
    std::vector<CompType> values;
    for (int j = 0; j < r; ++j) {
        for (int gidx = 0; gidx < (int)values.size(); ++gidx)
            if (values[gidx] == rho.letters[j]) group_of[j] = gidx;
        if (group_of[j] == -1) {
            values.push_back(rho.letters[j]);
            group_of[j] = (int)values.size() - 1;
        }
    }
    const int gcount = (int)values.size();
    std::vector<int> aleph(gcount, 0);
    std::vector<bool> unbounded(gcount, false);
    for (int j = 0; j < r; ++j) {
        if (rho.starred[j])
            unbounded[group_of[j]] = true;
        else
            ++aleph[group_of[j]];
    }
    // per child: available groups, and the first position for each group
    std::vector<std::vector<int>> child_groups(n);
    std::vector<std::map<int, int>> child_pos(n);
    for (int i = 0; i < n; ++i) {
        for (int j : avail[i]) {
            assert(j >= 0 && j < r);
            int gidx = group_of[j];
            if (!child_pos[i].count(gidx)) {
                child_pos[i][gidx] = j;
                child_groups[i].push_back(gidx);
            }
        }
        if (child_groups[i].empty()) return std::nullopt;
    }
    // one demand unit per mandatory occurrence; units need distinct children
    std::vector<int> unit_group;
    for (int gidx = 0; gidx < gcount; ++gidx)
        for (int c = 0; c < aleph[gidx]; ++c) unit_group.push_back(gidx);
    const int units = (int)unit_group.size();
    if (units > n) return std::nullopt;

    std::vector<int> unit_of_child(n, -1), child_of_unit(units, -1);
    std::vector<char> visited(n, 0);
    auto child_has = [&](int i, int gidx) {
        return child_pos[i].count(gidx) != 0;
    };
    std::function<bool(int)> augment_unit = [&](int u) {
        for (int i = 0; i < n; ++i) {
            if (visited[i] || !child_has(i, unit_group[u])) continue;
            visited[i] = 1;
            if (unit_of_child[i] == -1 || augment_unit(unit_of_child[i])) {
                unit_of_child[i] = u;
                child_of_unit[u] = i;
                return true;
            }
        }
        return false;
    };
    for (int u = 0; u < units; ++u) {
        std::fill(visited.begin(), visited.end(), 0);
        if (!augment_unit(u)) return std::nullopt;
    }
    // children that cannot absorb into a starred letter must take a unit;
    // free one by walking an alternating path to a child that can absorb
    auto absorbs = [&](int i) {
        for (int gidx : child_groups[i])
            if (unbounded[gidx]) return true;
        return false;
    };
    std::function<bool(int)> place_child = [&](int i) {
        for (int gidx : child_groups[i]) {
            for (int u = 0; u < units; ++u) {
                if (unit_group[u] != gidx) continue;
                int j = child_of_unit[u];
                assert(j != -1);
                if (visited[j]) continue;
                visited[j] = 1;
                if (absorbs(j)) {
                    unit_of_child[j] = -1;
                } else if (!place_child(j)) {
                    continue;  // j released nothing, u stays with j
                }
                unit_of_child[i] = u;
                child_of_unit[u] = i;
                return true;
            }
        }
        return false;
    };
    for (int i = 0; i < n; ++i) {
        if (unit_of_child[i] != -1 || absorbs(i)) continue;
        std::fill(visited.begin(), visited.end(), 0);
        visited[i] = 1;
        if (!place_child(i)) return std::nullopt;
    }

    std::vector<int> pick(n, -1);
    for (int i = 0; i < n; ++i) {
        if (unit_of_child[i] != -1) {
            pick[i] = child_pos[i][unit_group[unit_of_child[i]]];
        } else {
            for (int gidx : child_groups[i])
                if (unbounded[gidx]) {
                    pick[i] = child_pos[i][gidx];
                    break;
                }
            assert(pick[i] != -1);
        }
    }
    return pick;
}

TypeSet parallel_types(const std::vector<const TypeSet*>& children) {
    const int k = (int)children.size();
    assert(k >= 2);
    // dedup the available types across children, ignoring the pole bit
    std::vector<CompType> letters;
    std::map<std::uint32_t, int> letter_id;
    std::vector<std::vector<int>> child_letters(k);   // letter ids per child
    std::vector<std::map<int, int>> child_entry(k);   // letter id -> entry index
    for (int i = 0; i < k; ++i) {
        for (int e = 0; e < (int)children[i]->entries.size(); ++e) {
            CompType t = children[i]->entries[e].type;
            t.near_is_a = true;
            std::uint32_t mk = masked_key(t);
            auto it = letter_id.find(mk);
            int id;
            if (it == letter_id.end()) {
                id = (int)letters.size();
                letter_id[mk] = id;
                letters.push_back(t);
            } else {
                id = it->second;
            }
            if (!child_entry[i].count(id)) {
                child_entry[i][id] = e;
                child_letters[i].push_back(id);
            }
        }
        assert(!child_letters[i].empty());
    }
    const int nl = (int)letters.size();
    std::vector<bool> star(nl);
    for (int a = 0; a < nl; ++a) star[a] = starrable(letters[a]);
    std::vector<std::vector<bool>> adj(nl, std::vector<bool>(nl));
    for (int a = 0; a < nl; ++a)
        for (int b = 0; b < nl; ++b) adj[a][b] = p_adjacent(letters[a], letters[b]);
    std::vector<std::vector<bool>> in_child(k, std::vector<bool>(nl, false));
    for (int i = 0; i < k; ++i)
        for (int id : child_letters[i]) in_child[i][id] = true;

    TypeSet out;
    std::set<std::uint32_t> emitted;
    std::vector<int> seq;
    std::vector<PlacementState> pstack{PlacementState{}};
    long long nodes_budget = 20'000'000;
    long long patterns_budget = 2'000'000;

    auto realize = [&]() {
        assert(--patterns_budget > 0);
        const int d = (int)seq.size();
        CompType first = letters[seq.front()], last = letters[seq.back()];
        CompType comp;
        comp.left = first.left;
        comp.right = last.right;
        comp.near_lfree = first.near_lfree;
        comp.far_lfree = first.far_lfree;
        comp.near_rfree = last.near_rfree;
        comp.far_rfree = last.far_rfree;
        comp.single_edge = false;
        comp.left_single = first.left_single;
        comp.right_single = last.right_single;
        comp.near_is_a = true;
        if (comp.left.far == FarLetter::Rcc && comp.right.far == FarLetter::Lc) return;
        if (emitted.count(comp_type_key(comp))) return; // a cheaper pattern already produced it
        // one mandatory occurrence per slot; a starred copy absorbs repeats
        SimpleRegex rho;
        std::vector<int> slot_of_pos;
        for (int p = 0; p < d; ++p) {
            rho.letters.push_back(letters[seq[p]]);
            rho.starred.push_back(false);
            slot_of_pos.push_back(p);
            if (star[seq[p]]) {
                rho.letters.push_back(letters[seq[p]]);
                rho.starred.push_back(true);
                slot_of_pos.push_back(p);
            }
        }
        std::vector<std::vector<int>> avail(k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < (int)rho.letters.size(); ++j)
                if (in_child[i][seq[slot_of_pos[j]]]) avail[i].push_back(j);
        auto sel = regex_select(rho, avail);
        if (!sel) return;
        // distribute children over the slots of their selected value: matched
        // slots first in child order, extras join the first starred slot
        std::vector<std::vector<int>> slot_children(d);
        std::vector<std::vector<int>> value_slots; // per letter id
        value_slots.assign(nl, {});
        for (int p = 0; p < d; ++p) value_slots[seq[p]].push_back(p);
        std::vector<int> used(nl, 0);
        std::vector<std::pair<int, int>> extras; // (letter id, child)
        for (int i = 0; i < k; ++i) {
            int id = seq[slot_of_pos[(*sel)[i]]];
            if (used[id] < (int)value_slots[id].size())
                slot_children[value_slots[id][used[id]++]].push_back(i);
            else
                extras.push_back({id, i});
        }
        for (auto [id, i] : extras) {
            assert(star[id]);
            slot_children[value_slots[id][0]].push_back(i);
        }
        ParProv prov;
        for (int p = 0; p < d; ++p) {
            assert(!slot_children[p].empty());
            std::sort(slot_children[p].begin(), slot_children[p].end());
            for (int i : slot_children[p]) {
                prov.order.push_back(i);
                prov.pick.push_back(child_entry[i][seq[p]]);
            }
        }
#ifndef NDEBUG
        {
            PlacementState st;
            for (int p = 0; p < d; ++p)
                for (size_t c = 0; c < slot_children[p].size(); ++c) {
                    assert(placement_step(st, letters[seq[p]]));
                    if (p + 1 < d || c + 1 < slot_children[p].size()) {
                        int nid = (c + 1 < slot_children[p].size()) ? seq[p] : seq[p + 1];
                        assert(adj[seq[p]][nid]);
                    }
                }
        }
#endif
        emitted.insert(comp_type_key(comp));
        out.entries.push_back({comp, std::move(prov), {}});
    };

    std::function<void()> extend = [&]() {
        assert(--nodes_budget > 0);
        if (!seq.empty()) realize();
        if ((int)seq.size() == k) return;
        for (int h = 0; h < nl; ++h) {
            if (!seq.empty()) {
                int last = seq.back();
                if (h == last && star[h]) continue; // runs come from the star
                if (!adj[last][h]) continue;
            }
            PlacementState st = pstack.back();
            if (!placement_step(st, letters[h])) continue;
            seq.push_back(h);
            pstack.push_back(st);
            extend();
            pstack.pop_back();
            seq.pop_back();
        }
    };
    extend();

    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const TypeEntry& a, const TypeEntry& b) {
                         return comp_type_key(a.type) < comp_type_key(b.type);
                     });
    return out;
}

namespace {

void emit_entry(TypeSet& out, std::set<std::uint32_t>& seen, const CompType& t, SerProv prov) {
    if (!seen.insert(comp_type_key(t)).second) return;
    out.entries.push_back({t, {}, prov});
}

// Stacked merge: `a` below, `b` above, sharing a.far = b.near. The composite
// runs a.near -> b.far. When b's boundary path is a single edge and a's far
// final on that side is an outgoing wrap, the wrap's vertical may or may not
// cover the single edge's bend, so both flag variants are emitted.
void chain_merge(const CompType& a, const CompType& b, SerProv prov, bool near_is_a, TypeSet& out,
                 std::set<std::uint32_t>& seen) {
    bool left_ok = b.left.near == NearLetter::L && a.left.far != FarLetter::Rcc;
    bool right_ok = b.right.near == NearLetter::R && a.right.far != FarLetter::Lc;
    if (!left_ok && !right_ok) return;
    CompType t;
    t.left = PathType{b.left.far, a.left.near};
    t.right = PathType{b.right.far, a.right.near};
    t.near_lfree = a.near_lfree;
    t.near_rfree = a.near_rfree;
    t.far_lfree = b.far_lfree;
    t.far_rfree = b.far_rfree;
    t.single_edge = t.left_single = t.right_single = false;
    t.near_is_a = near_is_a;
    assert(!(t.left.far == FarLetter::Rcc && t.right.far == FarLetter::Lc));
    bool trig_l = b.left_single && far_outgoing(a.left.far);
    bool trig_r = b.right_single && far_outgoing(a.right.far);
    for (int mask = 0; mask < 4; ++mask) {
        if ((mask & 1) && !trig_l) continue;
        if ((mask & 2) && !trig_r) continue;
        CompType v = t;
        SerProv p = prov;
        p.variant = (uint8_t)mask;
        if (mask & 1) v.far_lfree = far_auto_left(v.left.far);
        if (mask & 2) v.far_rfree = far_auto_right(v.right.far);
        emit_entry(out, seen, v, p);
    }
}

// Shared-apex merge: a.far = b.far, with `a` keeping the composite near pole
// and b hanging upside down above it; b's near letters lift to wrap letters,
// counterclockwise when a sits west. The two boundary paths meet at the apex
// like a parallel seam.
void hat_merge(const CompType& a, const CompType& b, SerProv prov, bool a_west, bool near_is_a,
               TypeSet& out, std::set<std::uint32_t>& seen) {
    const CompType& w = a_west ? a : b;
    const CompType& e = a_west ? b : a;
    if (!far_seam_ok(w.right.far, w.far_rfree, e.left.far, e.far_lfree)) return;
    bool all_we = w.left.far == w.right.far && w.right.far == e.left.far &&
                  e.left.far == e.right.far &&
                  (w.left.far == FarLetter::W || w.left.far == FarLetter::E);
    if (!((int)w.left.far < (int)e.right.far || all_we)) return;
    if (w.left.far == FarLetter::Rcc && e.right.far == FarLetter::Lc) return;

    // the composite left path runs over the apex and descends b's right flank
    // into the far pole, and symmetrically for the right path
    bool cc = a_west;
    FarLetter lf = lift_near(b.right.near, cc);
    FarLetter rf = lift_near(b.left.near, cc);
    CompType t;
    t.left = PathType{lf, a.left.near};
    t.right = PathType{rf, a.right.near};
    t.near_lfree = a.near_lfree;
    t.near_rfree = a.near_rfree;
    t.far_lfree = true;
    t.far_rfree = true;
    t.single_edge = t.left_single = t.right_single = false;
    t.near_is_a = near_is_a;
    assert(!(t.left.far == FarLetter::Rcc && t.right.far == FarLetter::Lc));
    // forced coverings at the apex when a boundary path consists of one edge
    // and meets an equal-lettered partner there
    auto eq_we = [](FarLetter x, FarLetter y) {
        return x == y && (x == FarLetter::W || x == FarLetter::E);
    };
    if (b.right_single && eq_we(a.left.far, b.right.far) &&
        ((a.left.far == FarLetter::W) == cc))
        t.far_lfree = far_auto_left(lf);
    if (b.left_single && eq_we(a.right.far, b.left.far) &&
        ((a.right.far == FarLetter::W) == cc))
        t.far_rfree = far_auto_right(rf);
    if (a.left_single && eq_we(a.left.far, b.right.far) &&
        ((a.left.far == FarLetter::W) == !cc))
        t.near_lfree = a.left.near == NearLetter::L;
    if (a.right_single && eq_we(a.right.far, b.left.far) &&
        ((a.right.far == FarLetter::W) == !cc))
        t.near_rfree = a.right.near == NearLetter::R;
    emit_entry(out, seen, t, prov);
}

} // namespace

TypeSet series_types(const TypeSet& first, const TypeSet& second, SeriesMerge merge) {
    TypeSet out;
    std::set<std::uint32_t> seen;
    for (int ia = 0; ia < (int)first.entries.size(); ++ia)
        for (int ib = 0; ib < (int)second.entries.size(); ++ib) {
            const CompType& a = first.entries[ia].type;
            const CompType& b = second.entries[ib].type;
            if (merge == SeriesMerge::chain) {
                chain_merge(a, b, SerProv{ia, ib, SeriesCase::chain, 0}, true, out, seen);
            } else {
                hat_merge(a, b, SerProv{ia, ib, SeriesCase::hat_first_west, 0}, true, true, out,
                          seen);
                hat_merge(a, b, SerProv{ia, ib, SeriesCase::hat_second_west, 0}, false, true, out,
                          seen);
            }
        }
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const TypeEntry& x, const TypeEntry& y) {
                         return comp_type_key(x.type) < comp_type_key(y.type);
                     });
    return out;
}

// --- bottom-up driver --------------------------------------------------------

namespace {

int entry_near_vertex(const SpNode& nd, const CompType& t) {
    return t.near_is_a ? nd.pole_a : nd.pole_b;
}

void sort_entries(TypeSet& ts) {
    std::stable_sort(ts.entries.begin(), ts.entries.end(),
                     [](const TypeEntry& x, const TypeEntry& y) {
                         return comp_type_key(x.type) < comp_type_key(y.type);
                     });
}

} // namespace

Expected<SpTypesResult> sp_compute_types(const Dag& g, Mode mode) {
    auto poles = mode == Mode::SingleSource ? source_vertices(g) : sink_vertices(g);
    const char* what = mode == Mode::SingleSource ? "source" : "sink";
    if (poles.size() != 1)
        return Error{ErrorCode::WrongSourceCount, std::string("expected exactly one ") + what +
                                                      ", found " + std::to_string(poles.size())};
    auto tr = decompose(g, poles[0]);
    if (!tr.ok()) return tr.error();

    SpTypesResult res;
    res.tree = std::move(tr.value());
    const DecompTree& tree = res.tree;
    const int nn = (int)tree.nodes.size();
    res.types.resize(nn);
    res.steps.resize(nn);

    // post-order
    std::vector<int> order, stack{tree.root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (int c : tree.nodes[v].children) stack.push_back(c);
    }
    std::reverse(order.begin(), order.end());

    for (int node : order) {
        const SpNode& nd = tree.nodes[node];
        if (nd.kind == SpKind::edge) {
            int near_v = mode == Mode::SingleSource ? g.edges[nd.edge].tail : g.edges[nd.edge].head;
            res.types[node] = edge_types(mode, near_v == nd.pole_a);
            continue;
        }
        if (nd.kind == SpKind::series) {
            const int k = (int)nd.children.size();
            assert(k >= 2);
            std::vector<int> verts = chain_vertices(tree, node);
            res.steps[node].resize(k);
            res.steps[node][0] = res.types[nd.children[0]];
            // prefix entries carry near_is_a relative to (verts[0], verts[j]);
            // rewrite the copied bits into that frame, keeping entry order
            for (TypeEntry& e : res.steps[node][0].entries)
                e.type.near_is_a =
                    entry_near_vertex(tree.nodes[nd.children[0]], e.type) == verts[0];
            for (int j = 1; j < k; ++j) {
                const TypeSet& acc = res.steps[node][j - 1];
                const TypeSet& chs = res.types[nd.children[j]];
                const SpNode& chn = tree.nodes[nd.children[j]];
                const int m = verts[j];
                TypeSet next;
                std::set<std::uint32_t> seen;
                for (int ia = 0; ia < (int)acc.entries.size(); ++ia) {
                    const CompType& at = acc.entries[ia].type;
                    // prefix poles are (verts[0], verts[j]) with pole_a = verts[0]
                    int a_near = at.near_is_a ? verts[0] : m;
                    for (int ib = 0; ib < (int)chs.entries.size(); ++ib) {
                        const CompType& bt = chs.entries[ib].type;
                        int b_near = entry_near_vertex(chn, bt);
                        bool acc_far_at_m = a_near != m;
                        bool ch_near_at_m = b_near == m;
                        if (acc_far_at_m && ch_near_at_m) {
                            chain_merge(at, bt, SerProv{ia, ib, SeriesCase::chain, 0}, true, next,
                                        seen);
                        } else if (acc_far_at_m && !ch_near_at_m) {
                            // both parts end at m: either may keep the composite near pole
                            hat_merge(at, bt, SerProv{ia, ib, SeriesCase::hat_first_west, 0}, true,
                                      true, next, seen);
                            hat_merge(at, bt, SerProv{ia, ib, SeriesCase::hat_second_west, 0},
                                      false, true, next, seen);
                            hat_merge(bt, at, SerProv{ia, ib, SeriesCase::hat_second_west, 0}, true,
                                      false, next, seen);
                            hat_merge(bt, at, SerProv{ia, ib, SeriesCase::hat_first_west, 0}, false,
                                      false, next, seen);
                        } else if (!acc_far_at_m && !ch_near_at_m) {
                            chain_merge(bt, at, SerProv{ia, ib, SeriesCase::chain, 0}, false, next,
                                        seen);
                        } else {
                            // both parts with the near pole at m would make m a
                            // second source (or sink); the mode pole is a root pole
                            assert(false);
                        }
                    }
                }
                sort_entries(next);
                res.steps[node][j] = std::move(next);
            }
            res.types[node] = res.steps[node][k - 1];
            continue;
        }
        // parallel node: children share both poles; compose per near polarity
        const int k = (int)nd.children.size();
        assert(k >= 2);
        TypeSet combined;
        for (int pol = 0; pol < 2; ++pol) {
            int near_v = pol == 0 ? nd.pole_a : nd.pole_b;
            std::vector<TypeSet> filtered(k);
            std::vector<std::vector<int>> back(k);
            bool feasible = true;
            for (int i = 0; i < k && feasible; ++i) {
                const SpNode& chn = tree.nodes[nd.children[i]];
                assert((chn.pole_a == nd.pole_a && chn.pole_b == nd.pole_b) ||
                       (chn.pole_a == nd.pole_b && chn.pole_b == nd.pole_a));
                const TypeSet& full = res.types[nd.children[i]];
                for (int e = 0; e < (int)full.entries.size(); ++e)
                    if (entry_near_vertex(chn, full.entries[e].type) == near_v) {
                        filtered[i].entries.push_back(full.entries[e]);
                        back[i].push_back(e);
                    }
                if (filtered[i].entries.empty()) feasible = false;
            }
            if (!feasible) continue;
            std::vector<const TypeSet*> ptrs;
            for (int i = 0; i < k; ++i) ptrs.push_back(&filtered[i]);
            TypeSet ts = parallel_types(ptrs);
            for (TypeEntry& e : ts.entries) {
                for (size_t t2 = 0; t2 < e.par.order.size(); ++t2)
                    e.par.pick[t2] = back[e.par.order[t2]][e.par.pick[t2]];
                e.type.near_is_a = near_v == nd.pole_a;
                combined.entries.push_back(std::move(e));
            }
        }
        sort_entries(combined);
        res.types[node] = std::move(combined);
    }
    return res;
}

// --- decision and certificate ------------------------------------------------

namespace {

void extract_choices(const SpTypesResult& res, int node, int entry,
                     std::vector<std::vector<int>>& choices) {
    const SpNode& nd = res.tree.nodes[node];
    if (nd.kind == SpKind::edge) return;
    if (nd.kind == SpKind::parallel) {
        const TypeEntry& te = res.types[node].entries[entry];
        choices[node] = te.par.order;
        for (size_t i = 0; i < te.par.order.size(); ++i)
            extract_choices(res, nd.children[te.par.order[i]], te.par.pick[i], choices);
        return;
    }
    const int k = (int)nd.children.size();
    std::vector<int> cases(k - 1);
    int idx = entry;
    for (int j = k - 1; j >= 1; --j) {
        const SerProv& sp = res.steps[node][j].entries[idx].ser;
        cases[j - 1] = (int)sp.merge_case;
        extract_choices(res, nd.children[j], sp.second, choices);
        idx = sp.first;
    }
    extract_choices(res, nd.children[0], idx, choices);
    choices[node] = std::move(cases);
}

} // namespace

Expected<VariableDecision> test_variable(const Dag& g, Mode mode) {
    if (!is_acyclic(g)) return VariableDecision{false, {}, std::nullopt};
    auto rt = sp_compute_types(g, mode);
    if (!rt.ok()) return rt.error();
    const SpTypesResult& res = rt.value();
    const TypeSet& root = res.types[res.tree.root];

    VariableDecision dec;
    dec.yes = false;
    int pick = -1;
    for (int i = 0; i < (int)root.entries.size(); ++i) {
        if (!root.entries[i].type.near_is_a) continue; // near pole must be the mode pole
        dec.root_types.push_back(root.entries[i].type);
        if (pick == -1) pick = i;
    }
    if (pick == -1) return dec;
    dec.yes = true;
    SpCertificate cert;
    cert.mode = mode;
    cert.root_type = root.entries[pick].type;
    cert.choices.assign(res.tree.nodes.size(), {});
    extract_choices(res, res.tree.root, pick, cert.choices);
    dec.cert = std::move(cert);
    return dec;
}

Expected<PlaneDag> certificate_to_plane_dag(const Dag& g, const SpCertificate& cert) {
    auto poles = cert.mode == Mode::SingleSource ? source_vertices(g) : sink_vertices(g);
    const char* what = cert.mode == Mode::SingleSource ? "source" : "sink";
    if (poles.size() != 1)
        return Error{ErrorCode::WrongSourceCount, std::string("expected exactly one ") + what +
                                                      ", found " + std::to_string(poles.size())};
    int pole = poles[0];
    auto tr = decompose(g, pole);
    if (!tr.ok()) return tr.error();
    const DecompTree& tree = tr.value();
    const int nn = (int)tree.nodes.size();
    if ((int)cert.choices.size() != nn)
        return Error{ErrorCode::InconsistentCertificate,
                     "choice list does not match the decomposition"};
    for (int i = 0; i < nn; ++i) {
        const SpNode& nd = tree.nodes[i];
        const std::vector<int>& ch = cert.choices[i];
        if (nd.kind == SpKind::edge) {
            if (!ch.empty())
                return Error{ErrorCode::InconsistentCertificate, "edge node carries choices"};
        } else if (nd.kind == SpKind::parallel) {
            if (ch.size() != nd.children.size())
                return Error{ErrorCode::InconsistentCertificate, "bad parallel order length"};
            std::vector<bool> seen(nd.children.size(), false);
            for (int v : ch) {
                if (v < 0 || v >= (int)nd.children.size() || seen[v])
                    return Error{ErrorCode::InconsistentCertificate, "parallel order is not a permutation"};
                seen[v] = true;
            }
        } else {
            if (ch.size() + 1 != nd.children.size())
                return Error{ErrorCode::InconsistentCertificate, "bad series case count"};
            for (int v : ch)
                if (v < 0 || v > 2)
                    return Error{ErrorCode::InconsistentCertificate, "bad series case"};
        }
    }

    // assign each node the pole it is drawn from, walking the fold backwards
    std::vector<int> nears(nn, -1);
    nears[tree.root] = pole;
    std::vector<int> stack{tree.root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        const SpNode& nd = tree.nodes[v];
        if (nd.kind == SpKind::edge) continue;
        if (nd.kind == SpKind::parallel) {
            for (int c : nd.children) {
                nears[c] = nears[v];
                stack.push_back(c);
            }
            continue;
        }
        std::vector<int> verts = chain_vertices(tree, v);
        const int k = (int)nd.children.size();
        int cur = nears[v];
        if (cur != verts[0] && cur != verts[k])
            return Error{ErrorCode::InconsistentCertificate, "series near pole mismatch"};
        for (int j = k - 1; j >= 1; --j) {
            SeriesCase sc = (SeriesCase)cert.choices[v][j - 1];
            if (sc == SeriesCase::chain) {
                if (cur == verts[0]) {
                    nears[nd.children[j]] = verts[j];
                } else {
                    assert(cur == verts[j + 1]);
                    nears[nd.children[j]] = verts[j + 1];
                    cur = verts[j];
                }
            } else {
                nears[nd.children[j]] = verts[j + 1];
                cur = verts[0];
            }
            stack.push_back(nd.children[j]);
        }
        nears[nd.children[0]] = cur;
        stack.push_back(nd.children[0]);
    }

    std::vector<std::vector<int>> orders(nn);
    for (int i = 0; i < nn; ++i)
        if (tree.nodes[i].kind == SpKind::parallel) orders[i] = cert.choices[i];
    bool sink = cert.mode == Mode::SingleSink;
    std::vector<std::vector<Dart>> rot = rotation_for(g, tree, orders, &nears, sink);

    PlaneDag probe;
    probe.g = g;
    probe.rotation = rot;
    probe.outer = Dart{0, false};
    FaceSet fs = trace_faces(probe);
    assert(!rot[pole].empty());
    int fid = face_at_angle(probe, fs, pole, (int)rot[pole].size() - 1);
    return build_plane_dag(g, rot, fs.faces[fid][0]);
}

} // namespace uplan
