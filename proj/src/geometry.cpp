#include "uplan/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace uplan {

namespace {

struct VSeg {
    long long col, y0, y1; // y0 < y1, tail at (col, y0)
    int edge;
};
struct HSeg {
    long long row, x0, x1; // x0 < x1, head row
    int edge;
};

VSeg vseg_of(const Dag& g, const LDrawing& d, int e) {
    const Edge& ed = g.edges[e];
    return VSeg{d.x[ed.tail], std::min(d.y[ed.tail], d.y[ed.head]),
                std::max(d.y[ed.tail], d.y[ed.head]), e};
}

HSeg hseg_of(const Dag& g, const LDrawing& d, int e) {
    const Edge& ed = g.edges[e];
    return HSeg{d.y[ed.head], std::min(d.x[ed.tail], d.x[ed.head]),
                std::max(d.x[ed.tail], d.x[ed.head]), e};
}

Error check_fail(const std::string& what) {
    return Error{ErrorCode::ValidatorFailure, what};
}

} // namespace

Expected<std::monostate> validate_geometry(const Dag& g, const LDrawing& d) {
    const int n = g.n();
    const int m = g.m();
    if ((int)d.x.size() != n || (int)d.y.size() != n)
        return check_fail("coordinate vectors do not match vertex count");

    for (const Edge& e : g.edges)
        if (d.y[e.head] <= d.y[e.tail])
            return check_fail("upwardness: edge " + std::to_string(e.id) + " (" +
                              g.names[e.tail] + "," + g.names[e.head] + ") does not rise");

    for (int axis = 0; axis < 2; ++axis) {
        const auto& c = axis == 0 ? d.x : d.y;
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return c[a] < c[b]; });
        for (int i = 0; i + 1 < n; ++i)
            if (c[order[i]] == c[order[i + 1]])
                return check_fail(std::string("distinctness: vertices ") + g.names[order[i]] +
                                  " and " + g.names[order[i + 1]] + " share " +
                                  (axis == 0 ? "a column" : "a row"));
    }

    // With distinct coordinates a vertex strictly inside a segment would have to be
    // that segment's own tail or head, so this only fires on malformed input.
    for (int e = 0; e < m; ++e) {
        VSeg v = vseg_of(g, d, e);
        HSeg h = hseg_of(g, d, e);
        for (int w = 0; w < n; ++w) {
            if (w == g.edges[e].tail || w == g.edges[e].head) continue;
            if (d.x[w] == v.col && v.y0 < d.y[w] && d.y[w] < v.y1)
                return check_fail("vertex " + g.names[w] + " lies inside the vertical of edge " +
                                  std::to_string(g.edges[e].id));
            if (d.y[w] == h.row && h.x0 < d.x[w] && d.x[w] < h.x1)
                return check_fail("vertex " + g.names[w] + " lies inside the horizontal of edge " +
                                  std::to_string(g.edges[e].id));
        }
    }

    // Parallel segments can only overlap when they share the tail (verticals) or the
    // head (horizontals), which is legal; the one genuine crossing shape is a vertical
    // through a horizontal with the meeting point strictly inside both.
    std::vector<VSeg> vs;
    std::vector<HSeg> hs;
    vs.reserve(m);
    hs.reserve(m);
    for (int e = 0; e < m; ++e) {
        vs.push_back(vseg_of(g, d, e));
        hs.push_back(hseg_of(g, d, e));
    }
    for (const VSeg& v : vs)
        for (const HSeg& h : hs) {
            if (v.edge == h.edge) continue;
            if (h.x0 < v.col && v.col < h.x1 && v.y0 < h.row && h.row < v.y1)
                return check_fail("crossing: vertical of edge " +
                                  std::to_string(g.edges[v.edge].id) + " and horizontal of edge " +
                                  std::to_string(g.edges[h.edge].id));
        }
    return std::monostate{};
}

Expected<std::monostate> validate_ldrawing(const PlaneDag& p, const LDrawing& d) {
    const Dag& g = p.g;
    const int n = g.n();
    const int m = g.m();
    if (auto geo = validate_geometry(g, d); !geo.ok()) return geo.error();

    // Parallel edges draw as coincident curves, so their darts are interchangeable in
    // the drawn rotation. Sort every run of same-shape darts before comparing.
    auto dart_shape = [&](Dart dd) {
        const Edge& e = g.edges[dd.edge];
        return std::pair<bool, int>(dd.at_head, dd.at_head ? e.tail : e.head);
    };
    auto canonical = [&](const std::vector<Dart>& rot) {
        const size_t k = rot.size();
        std::vector<Dart> r;
        size_t st = 0;
        bool split = false;
        for (size_t i = 0; i < k; ++i)
            if (dart_shape(rot[i]) != dart_shape(rot[(i + k - 1) % k])) {
                st = i;
                split = true;
                break;
            }
        for (size_t i = 0; i < k; ++i) r.push_back(rot[(st + i) % k]);
        if (!split) { // every incident edge coincides
            std::sort(r.begin(), r.end());
            return r;
        }
        for (size_t i = 0; i < k;) {
            size_t j = i;
            while (j < k && dart_shape(r[j]) == dart_shape(r[i])) ++j;
            std::sort(r.begin() + i, r.begin() + j);
            i = j;
        }
        return r;
    };
    PlaneDag induced = extract_embedding(g, d);
    for (int v = 0; v < n; ++v) {
        std::vector<Dart> a = canonical(p.rotation[v]);
        std::vector<Dart> b = canonical(induced.rotation[v]);
        if (a.size() != b.size())
            return check_fail("rotation mismatch at vertex " + g.names[v]);
        if (a.empty()) continue;
        auto it = std::find(a.begin(), a.end(), b[0]);
        if (it == a.end())
            return check_fail("rotation mismatch at vertex " + g.names[v]);
        size_t off = (size_t)(it - a.begin());
        for (size_t i = 0; i < a.size(); ++i)
            if (a[(off + i) % a.size()] != b[i])
                return check_fail("rotation mismatch at vertex " + g.names[v]);
    }

    if (m > 0) {
        FaceSet fs = trace_faces(p);
        // The claimed outer face must be the one at the south wrap of the lowest
        // vertex. Coincident darts around the wrap make equally valid claims.
        int low = 0;
        for (int v = 1; v < n; ++v)
            if (d.y[v] < d.y[low]) low = v;
        const auto& rot = induced.rotation[low];
        const int k = (int)rot.size();
        std::vector<Dart> wrap{rot[0]};
        for (int i = 1; i < k && dart_shape(rot[i]) == dart_shape(rot[0]); ++i)
            wrap.push_back(rot[i]);
        for (int i = k - 1; i > 0 && dart_shape(rot[i]) == dart_shape(rot[0]); --i)
            wrap.push_back(rot[i]);
        int claimed = fs.face_of_dart(p.outer);
        bool found = false;
        for (Dart dd : wrap)
            if (fs.face_of_dart(dd) == claimed) found = true;
        if (!found)
            return check_fail("outer face mismatch: drawing puts a different face outside");
    }
    return std::monostate{};
}

PlaneDag extract_embedding(const Dag& g, const LDrawing& d) {
    const int n = g.n();
    PlaneDag p;
    p.g = g;
    p.rotation.assign(n, {});
    for (int v = 0; v < n; ++v) {
        std::vector<Dart> east_in, west_in, east_out, west_out;
        for (int e = 0; e < g.m(); ++e) {
            const Edge& ed = g.edges[e];
            if (ed.head == v)
                (d.x[ed.tail] > d.x[v] ? east_in : west_in).push_back(Dart{e, true});
            if (ed.tail == v)
                (d.x[ed.head] > d.x[v] ? east_out : west_out).push_back(Dart{e, false});
        }
        // Coinciding parallel edges tie; their order must reverse between the
        // tail end and the head end or the zero-area lens face cannot close.
        // west_out picks up the reversal below, pairing with east_in ascending,
        // so west_in must descend to pair with east_out.
        auto tail_col = [&](Dart a, Dart b) {
            long long ca = d.x[g.edges[a.edge].tail], cb = d.x[g.edges[b.edge].tail];
            return ca != cb ? ca < cb : a < b;
        };
        auto tail_col_desc_tie = [&](Dart a, Dart b) {
            long long ca = d.x[g.edges[a.edge].tail], cb = d.x[g.edges[b.edge].tail];
            return ca != cb ? ca < cb : b < a;
        };
        auto head_row_asc = [&](Dart a, Dart b) {
            long long ra = d.y[g.edges[a.edge].head], rb = d.y[g.edges[b.edge].head];
            return ra != rb ? ra < rb : a < b;
        };
        std::sort(east_in.begin(), east_in.end(), tail_col);
        std::sort(west_in.begin(), west_in.end(), tail_col_desc_tie);
        std::sort(east_out.begin(), east_out.end(), head_row_asc);
        std::sort(west_out.begin(), west_out.end(), head_row_asc);
        std::reverse(west_out.begin(), west_out.end());
        auto& rot = p.rotation[v];
        rot.insert(rot.end(), east_in.begin(), east_in.end());
        rot.insert(rot.end(), east_out.begin(), east_out.end());
        rot.insert(rot.end(), west_out.begin(), west_out.end());
        rot.insert(rot.end(), west_in.begin(), west_in.end());
    }
    if (g.m() == 0) {
        p.outer = Dart{-1, false};
        return p;
    }
    int low = 0;
    for (int v = 1; v < n; ++v)
        if (d.y[v] < d.y[low]) low = v;
    // The half plane below the lowest vertex is empty, so the wrap-around angle of its
    // rotation faces outside; the face walk through that angle continues with rot[0].
    assert(!p.rotation[low].empty());
    p.outer = p.rotation[low][0];
    return p;
}

int face_at_angle(const PlaneDag& p, const FaceSet& fs, int v, int i) {
    const auto& rot = p.rotation[v];
    assert(!rot.empty());
    return fs.face_of_dart(rot[(i + 1) % rot.size()]);
}

std::vector<Dart> successors_l2r(const PlaneDag& p, const FaceSet& fs, int v) {
    const auto& rot = p.rotation[v];
    const int k = (int)rot.size();
    std::vector<Dart> out;
    int outdeg = 0;
    for (const Dart& d : rot)
        if (p.dart_outgoing(d)) ++outdeg;
    if (outdeg == 0) return out;
    int start = -1;
    if (outdeg < k) {
        for (int i = 0; i < k; ++i)
            if (p.dart_outgoing(rot[i]) && !p.dart_outgoing(rot[(i - 1 + k) % k])) {
                start = i;
                break;
            }
        assert(start >= 0);
        for (int i = 0; i < outdeg; ++i) out.push_back(rot[(start + i) % k]);
        for (const Dart& d : out) assert(p.dart_outgoing(d)); // bimodal rotation expected
    } else {
        // A source's outgoing run is cyclic; split it at the angle facing outside.
        int j = 0;
        for (int i = 0; i < k; ++i)
            if (face_at_angle(p, fs, v, i) == fs.outer) {
                j = (i + 1) % k;
                break;
            }
        for (int i = 0; i < k; ++i) out.push_back(rot[(j + i) % k]);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<Dart> predecessors_l2r(const PlaneDag& p, const FaceSet& fs, int v) {
    const auto& rot = p.rotation[v];
    const int k = (int)rot.size();
    std::vector<Dart> in;
    int indeg = 0;
    for (const Dart& d : rot)
        if (!p.dart_outgoing(d)) ++indeg;
    if (indeg == 0) return in;
    if (indeg < k) {
        int start = -1;
        for (int i = 0; i < k; ++i)
            if (!p.dart_outgoing(rot[i]) && p.dart_outgoing(rot[(i - 1 + k) % k])) {
                start = i;
                break;
            }
        assert(start >= 0);
        for (int i = 0; i < indeg; ++i) in.push_back(rot[(start + i) % k]);
        for (const Dart& d : in) assert(!p.dart_outgoing(d));
    } else {
        int j = 0;
        for (int i = 0; i < k; ++i)
            if (face_at_angle(p, fs, v, i) == fs.outer) {
                j = (i + 1) % k;
                break;
            }
        for (int i = 0; i < k; ++i) in.push_back(rot[(j + i) % k]);
    }
    return in;
}

LDrawing to_ranks(const LDrawing& d) {
    const int n = (int)d.x.size();
    LDrawing r;
    r.x.resize(n);
    r.y.resize(n);
    for (int axis = 0; axis < 2; ++axis) {
        const auto& src = axis == 0 ? d.x : d.y;
        auto& dst = axis == 0 ? r.x : r.y;
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return src[a] < src[b]; });
        for (int i = 0; i < n; ++i) dst[order[i]] = i + 1;
    }
    return r;
}

Expected<Augmented> augment_from_ldrawing(const PlaneDag& p, const LDrawing& d) {
    {
        auto ok = validate_ldrawing(p, d);
        if (!ok.ok()) return ok.error();
    }
    const int n = p.g.n();
    if (n == 0) return Error{ErrorCode::Disconnected, "empty graph"};

    Dag g = p.g;
    LDrawing draw = d;
    long long min_x = d.x[0], max_x = d.x[0], min_y = d.y[0], max_y = d.y[0];
    for (int v = 0; v < n; ++v) {
        min_x = std::min(min_x, d.x[v]);
        max_x = std::max(max_x, d.x[v]);
        min_y = std::min(min_y, d.y[v]);
        max_y = std::max(max_y, d.y[v]);
    }
    auto fresh_name = [&](std::string base) {
        while (g.vertex(base) >= 0) base += "_";
        return base;
    };
    int vs = g.add_vertex(fresh_name("s"));
    int vx = g.add_vertex(fresh_name("x"));
    int vt = g.add_vertex(fresh_name("t"));
    draw.x.resize(n + 3);
    draw.y.resize(n + 3);
    draw.x[vs] = min_x - 2;
    draw.y[vs] = min_y - 2;
    draw.x[vx] = max_x + 1;
    draw.y[vx] = min_y - 1;
    draw.x[vt] = max_x + 2;
    draw.y[vt] = max_y + 1;
    g.add_edge(vs, vx);
    g.add_edge(vx, vt);
    g.add_edge(vs, vt);

    // Rays scan the drawing as it grows, so earlier insertions can catch later rays.
    auto up_hit = [&](int v) {
        long long best_row = 0;
        int best = -1;
        for (int e = 0; e < g.m(); ++e) {
            HSeg h = hseg_of(g, draw, e);
            if (h.x0 < draw.x[v] && draw.x[v] < h.x1 && h.row > draw.y[v])
                if (best < 0 || h.row < best_row) {
                    best_row = h.row;
                    best = e;
                }
        }
        return best;
    };
    auto right_hit = [&](int v) {
        long long best_col = 0;
        int best = -1;
        for (int e = 0; e < g.m(); ++e) {
            VSeg s = vseg_of(g, draw, e);
            if (s.y0 < draw.y[v] && draw.y[v] < s.y1 && s.col > draw.x[v])
                if (best < 0 || s.col < best_col) {
                    best_col = s.col;
                    best = e;
                }
        }
        return best;
    };
    for (int v = 0; v < n; ++v) {
        if (g.out_adj()[v].empty()) {
            int e = up_hit(v);
            assert(e >= 0); // the top edge of the triangle spans every column
            g.add_edge(v, g.edges[e].head);
        }
        if (g.in_adj()[v].empty()) {
            int e = right_hit(v);
            assert(e >= 0); // the east edge of the triangle spans every row
            g.add_edge(g.edges[e].tail, v);
        }
    }

    Augmented res;
    res.drawing = to_ranks(draw);
    res.plane = extract_embedding(g, res.drawing);
    res.s = vs;
    res.x = vx;
    res.t = vt;
    auto ok = validate_ldrawing(res.plane, res.drawing);
    if (!ok.ok())
        return Error{ErrorCode::ValidatorFailure,
                     "augmentation produced an invalid drawing: " + ok.error().detail};
    if (source_vertices(g) != std::vector<int>{vs} || sink_vertices(g) != std::vector<int>{vt})
        return Error{ErrorCode::NotStGraph, "augmentation left extra sources or sinks"};
    return res;
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string r;
    for (char c : s) {
        if (c == '&') r += "&amp;";
        else if (c == '<') r += "&lt;";
        else if (c == '>') r += "&gt;";
        else r += c;
    }
    return r;
}

} // namespace

std::string render_svg(const Dag& g, const LDrawing& d) {
    const int n = g.n();
    long long min_x = 0, max_x = 1, min_y = 0, max_y = 1;
    if (n > 0) {
        min_x = max_x = d.x[0];
        min_y = max_y = d.y[0];
        for (int v = 0; v < n; ++v) {
            min_x = std::min(min_x, d.x[v]);
            max_x = std::max(max_x, d.x[v]);
            min_y = std::min(min_y, d.y[v]);
            max_y = std::max(max_y, d.y[v]);
        }
    }
    const long long unit = 48, margin = 48;
    auto X = [&](long long x) { return margin + (x - min_x) * unit; };
    auto Y = [&](long long y) { return margin + (max_y - y) * unit; }; // y axis points up
    long long w = X(max_x) + margin, h = Y(min_y) + margin;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w
        << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    for (const Edge& e : g.edges) {
        long long x0 = X(d.x[e.tail]), y0 = Y(d.y[e.tail]);
        long long x1 = X(d.x[e.head]), y1 = Y(d.y[e.head]);
        out << "<path d=\"M " << x0 << " " << y0 << " L " << x0 << " " << y1 << " L " << x1
            << " " << y1
            << "\" fill=\"none\" stroke=\"#3a5a8c\" stroke-width=\"2\""
               " stroke-linejoin=\"round\" stroke-linecap=\"round\"/>\n";
    }
    for (int v = 0; v < n; ++v) {
        out << "<circle cx=\"" << X(d.x[v]) << "\" cy=\"" << Y(d.y[v])
            << "\" r=\"5\" fill=\"#222\"/>\n";
        out << "<text x=\"" << X(d.x[v]) + 8 << "\" y=\"" << Y(d.y[v]) - 8
            << "\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(g.names[v])
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace uplan
