#include "uplan/core.hpp"

#include <algorithm>
#include <array>
#include <queue>

#include "json.hpp"

namespace uplan {

const char* to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::EulerViolation: return "EulerViolation";
    case ErrorCode::DanglingDart: return "DanglingDart";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NotStGraph: return "NotStGraph";
    case ErrorCode::ValleyPresent: return "ValleyPresent";
    case ErrorCode::NotUpwardPlane: return "NotUpwardPlane";
    case ErrorCode::OuterFace: return "OuterFace";
    case ErrorCode::NotCactus: return "NotCactus";
    case ErrorCode::MultipleSources: return "MultipleSources";
    case ErrorCode::NotTree: return "NotTree";
    case ErrorCode::NotSeriesParallel: return "NotSeriesParallel";
    case ErrorCode::NotBiconnected: return "NotBiconnected";
    case ErrorCode::WrongSourceCount: return "WrongSourceCount";
    case ErrorCode::InconsistentCertificate: return "InconsistentCertificate";
    case ErrorCode::ValidatorFailure: return "ValidatorFailure";
    case ErrorCode::RealizationFailed: return "RealizationFailed";
    case ErrorCode::TooLarge: return "TooLarge";
    }
    return "Unknown";
}

int Dag::vertex(const std::string& name) const {
    for (int i = 0; i < n(); ++i)
        if (names[i] == name) return i;
    return -1;
}

int Dag::add_vertex(const std::string& name) {
    names.push_back(name);
    return n() - 1;
}

int Dag::add_edge(int tail, int head) {
    edges.push_back({m(), tail, head});
    return m() - 1;
}

std::vector<std::vector<int>> Dag::out_adj() const {
    std::vector<std::vector<int>> a(n());
    for (int e = 0; e < m(); ++e) a[edges[e].tail].push_back(e);
    return a;
}

std::vector<std::vector<int>> Dag::in_adj() const {
    std::vector<std::vector<int>> a(n());
    for (int e = 0; e < m(); ++e) a[edges[e].head].push_back(e);
    return a;
}

bool is_connected(const Dag& g) {
    if (g.n() == 0) return true;
    std::vector<char> seen(g.n(), 0);
    std::vector<std::vector<int>> adj(g.n());
    for (const Edge& e : g.edges) {
        adj[e.tail].push_back(e.head);
        adj[e.head].push_back(e.tail);
    }
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++cnt;
                q.push(w);
            }
    }
    return cnt == g.n();
}

std::optional<std::vector<int>> topo_order(const Dag& g) {
    std::vector<int> indeg(g.n(), 0);
    for (const Edge& e : g.edges) ++indeg[e.head];
    auto out = g.out_adj();
    // min-id heap so the order is deterministic
    std::priority_queue<int, std::vector<int>, std::greater<int>> q;
    for (int v = 0; v < g.n(); ++v)
        if (indeg[v] == 0) q.push(v);
    std::vector<int> order;
    while (!q.empty()) {
        int v = q.top();
        q.pop();
        order.push_back(v);
        for (int e : out[v])
            if (--indeg[g.edges[e].head] == 0) q.push(g.edges[e].head);
    }
    if ((int)order.size() != g.n()) return std::nullopt;
    return order;
}

bool is_acyclic(const Dag& g) { return topo_order(g).has_value(); }

std::vector<int> source_vertices(const Dag& g) {
    std::vector<char> has_in(g.n(), 0);
    for (const Edge& e : g.edges) has_in[e.head] = 1;
    std::vector<int> r;
    for (int v = 0; v < g.n(); ++v)
        if (!has_in[v]) r.push_back(v);
    return r;
}

std::vector<int> sink_vertices(const Dag& g) {
    std::vector<char> has_out(g.n(), 0);
    for (const Edge& e : g.edges) has_out[e.tail] = 1;
    std::vector<int> r;
    for (int v = 0; v < g.n(); ++v)
        if (!has_out[v]) r.push_back(v);
    return r;
}

std::vector<std::vector<bool>> reachability(const Dag& g) {
    std::vector<std::vector<bool>> reach(g.n(), std::vector<bool>(g.n(), false));
    auto ord = topo_order(g);
    auto out = g.out_adj();
    std::vector<int> vs = ord ? *ord : [&] {
        std::vector<int> all(g.n());
        for (int i = 0; i < g.n(); ++i) all[i] = i;
        return all;
    }();
    for (int i = (int)vs.size() - 1; i >= 0; --i) {
        int v = vs[i];
        reach[v][v] = true;
        for (int e : out[v]) {
            int w = g.edges[e].head;
            for (int u = 0; u < g.n(); ++u)
                if (reach[w][u]) reach[v][u] = true;
        }
    }
    return reach;
}

bool is_bimodal(const PlaneDag& p) {
    for (int v = 0; v < p.g.n(); ++v) {
        const auto& rot = p.rotation[v];
        int switches = 0;
        int k = (int)rot.size();
        for (int i = 0; i < k; ++i)
            if (p.dart_outgoing(rot[i]) != p.dart_outgoing(rot[(i + 1) % k])) ++switches;
        if (switches > 2) return false;
    }
    return true;
}

Expected<PlaneDag> build_plane_dag(Dag g, std::vector<std::vector<Dart>> rotation, Dart outer) {
    int n = g.n(), m = g.m();
    if ((int)rotation.size() != n)
        return Error{ErrorCode::DanglingDart, "rotation must list every vertex"};
    std::vector<std::array<int, 2>> seen(m, {0, 0});
    PlaneDag p{std::move(g), std::move(rotation), outer};
    for (int v = 0; v < n; ++v) {
        for (Dart d : p.rotation[v]) {
            if (d.edge < 0 || d.edge >= m)
                return Error{ErrorCode::DanglingDart, "unknown edge in rotation at " + p.g.names[v]};
            if (p.dart_vertex(d) != v)
                return Error{ErrorCode::DanglingDart,
                             "dart listed at wrong vertex: " + p.g.names[v]};
            if (++seen[d.edge][d.at_head ? 1 : 0] > 1)
                return Error{ErrorCode::DanglingDart, "dart listed twice"};
        }
    }
    for (int e = 0; e < m; ++e)
        if (seen[e][0] + seen[e][1] != 2)
            return Error{ErrorCode::DanglingDart, "edge missing from rotation"};
    if (outer.edge < 0 || outer.edge >= m)
        return Error{ErrorCode::OuterFace, "outer dart names an unknown edge"};
    if (!is_connected(p.g)) return Error{ErrorCode::Disconnected, "graph is not connected"};
    // Euler: v - e + f = 2 on the sphere
    FaceSet fs = trace_faces(p);
    long long f = (long long)fs.faces.size();
    if (n - (long long)m + f != 2)
        return Error{ErrorCode::EulerViolation,
                     "v-e+f=" + std::to_string(n - (long long)m + f)};
    return p;
}

Dart next_in_face(const PlaneDag& p, Dart d) {
    Dart t = twin(d);
    int v = p.dart_vertex(t);
    const auto& rot = p.rotation[v];
    for (int i = 0; i < (int)rot.size(); ++i)
        if (rot[i] == t) return rot[(i + 1) % rot.size()];
    return {-1, false};
}

FaceSet trace_faces(const PlaneDag& p) {
    FaceSet fs;
    fs.face_of.assign(p.g.m(), {-1, -1});
    for (int v = 0; v < p.g.n(); ++v) {
        for (Dart d0 : p.rotation[v]) {
            if (fs.face_of_dart(d0) != -1) continue;
            int id = (int)fs.faces.size();
            std::vector<Dart> cyc;
            Dart d = d0;
            do {
                fs.face_of[d.edge][d.at_head ? 1 : 0] = id;
                cyc.push_back(d);
                d = next_in_face(p, d);
            } while (!(d == d0));
            fs.faces.push_back(std::move(cyc));
        }
    }
    if (p.outer.edge >= 0 && p.outer.edge < p.g.m()) fs.outer = fs.face_of_dart(p.outer);
    return fs;
}

// ---- JSON ----

using ordered_json = nlohmann::ordered_json;

static std::variant<Dart, ParseError> parse_dart(const ordered_json& j,
                                                 const std::map<int, int>& edge_ix,
                                                 const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_string())
        return ParseError{std::string(what) + ": dart must be [edgeId, \"tail\"|\"head\"]"};
    int ext = j[0].get<int>();
    auto it = edge_ix.find(ext);
    if (it == edge_ix.end())
        return ParseError{std::string(what) + ": unknown edge id " + std::to_string(ext)};
    std::string end = j[1].get<std::string>();
    if (end != "tail" && end != "head")
        return ParseError{std::string(what) + ": dart end must be \"tail\" or \"head\""};
    return Dart{it->second, end == "head"};
}

std::variant<GraphInput, ParseError> parse_graph_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        return ParseError{std::string("json: ") + e.what()};
    }
    GraphInput in;
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        return ParseError{"graph: missing \"vertices\" array"};
    for (const auto& v : j["vertices"]) {
        if (!v.is_string()) return ParseError{"graph: vertex names must be strings"};
        if (in.dag.vertex(v.get<std::string>()) != -1)
            return ParseError{"graph: duplicate vertex name " + v.get<std::string>()};
        in.dag.add_vertex(v.get<std::string>());
    }
    if (!j.contains("edges") || !j["edges"].is_array())
        return ParseError{"graph: missing \"edges\" array"};
    std::map<int, int> edge_ix; // external id -> index
    for (const auto& e : j["edges"]) {
        if (!e.is_object() || !e.contains("id") || !e.contains("tail") || !e.contains("head"))
            return ParseError{"graph: each edge needs id, tail, head"};
        if (!e["id"].is_number_integer() || e["id"].get<long long>() < 0)
            return ParseError{"graph: edge id must be a non-negative integer"};
        int id = e["id"].get<int>();
        if (edge_ix.count(id)) return ParseError{"graph: duplicate edge id " + std::to_string(id)};
        if (!e["tail"].is_string() || !e["head"].is_string())
            return ParseError{"graph: edge endpoints must be vertex names"};
        int t = in.dag.vertex(e["tail"].get<std::string>());
        int h = in.dag.vertex(e["head"].get<std::string>());
        if (t < 0 || h < 0)
            return ParseError{"graph: edge " + std::to_string(id) + " references unknown vertex"};
        edge_ix[id] = in.dag.m();
        in.dag.edges.push_back({id, t, h});
    }
    if (j.contains("rotation")) {
        if (!j["rotation"].is_object()) return ParseError{"graph: \"rotation\" must be an object"};
        std::vector<std::vector<Dart>> rot(in.dag.n());
        for (const auto& [name, list] : j["rotation"].items()) {
            int v = in.dag.vertex(name);
            if (v < 0) return ParseError{"rotation: unknown vertex " + name};
            if (!list.is_array()) return ParseError{"rotation: list for " + name + " must be an array"};
            for (const auto& dj : list) {
                auto d = parse_dart(dj, edge_ix, "rotation");
                if (d.index() == 1) return std::get<1>(d);
                Dart dart = std::get<0>(d);
                const Edge& ed = in.dag.edges[dart.edge];
                if ((dart.at_head ? ed.head : ed.tail) != v)
                    return ParseError{"rotation: dart for edge " + std::to_string(ed.id) +
                                      " listed at " + name + ", which is not its " +
                                      (dart.at_head ? "head" : "tail")};
                rot[v].push_back(dart);
            }
        }
        in.rotation = std::move(rot);
    }
    if (j.contains("outer")) {
        auto d = parse_dart(j["outer"], edge_ix, "outer");
        if (d.index() == 1) return std::get<1>(d);
        in.outer = std::get<0>(d);
    }
    return in;
}

static ordered_json dart_json(const Dag& g, Dart d) {
    return ordered_json::array({g.edges[d.edge].id, d.at_head ? "head" : "tail"});
}

static ordered_json dag_json_obj(const Dag& g) {
    ordered_json j;
    j["vertices"] = ordered_json::array();
    for (const auto& nm : g.names) j["vertices"].push_back(nm);
    j["edges"] = ordered_json::array();
    for (const Edge& e : g.edges)
        j["edges"].push_back({{"id", e.id}, {"tail", g.names[e.tail]}, {"head", g.names[e.head]}});
    return j;
}

std::string dag_to_json(const Dag& g) { return dag_json_obj(g).dump(); }

std::string graph_to_json(const PlaneDag& p) {
    ordered_json j = dag_json_obj(p.g);
    ordered_json rot = ordered_json::object();
    for (int v = 0; v < p.g.n(); ++v) {
        ordered_json list = ordered_json::array();
        for (Dart d : p.rotation[v]) list.push_back(dart_json(p.g, d));
        rot[p.g.names[v]] = std::move(list);
    }
    j["rotation"] = std::move(rot);
    j["outer"] = dart_json(p.g, p.outer);
    return j.dump();
}

std::variant<LDrawing, ParseError> parse_drawing_json(const std::string& text, const Dag& g) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        return ParseError{std::string("json: ") + e.what()};
    }
    if (!j.is_object() || !j.contains("coords") || !j["coords"].is_object())
        return ParseError{"drawing: missing \"coords\" object"};
    LDrawing d;
    d.x.assign(g.n(), 0);
    d.y.assign(g.n(), 0);
    std::vector<char> seen(g.n(), 0);
    for (const auto& [name, xy] : j["coords"].items()) {
        int v = g.vertex(name);
        if (v < 0) return ParseError{"drawing: unknown vertex " + name};
        if (!xy.is_array() || xy.size() != 2 || !xy[0].is_number_integer() ||
            !xy[1].is_number_integer())
            return ParseError{"drawing: coords for " + name + " must be [x, y] integers"};
        d.x[v] = xy[0].get<long long>();
        d.y[v] = xy[1].get<long long>();
        seen[v] = 1;
    }
    for (int v = 0; v < g.n(); ++v)
        if (!seen[v]) return ParseError{"drawing: no coords for vertex " + g.names[v]};
    return d;
}

std::string drawing_to_json(const Dag& g, const LDrawing& d) {
    ordered_json coords = ordered_json::object();
    for (int v = 0; v < g.n(); ++v)
        coords[g.names[v]] = ordered_json::array({d.x[v], d.y[v]});
    ordered_json j;
    j["coords"] = std::move(coords);
    return j.dump();
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace uplan
