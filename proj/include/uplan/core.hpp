#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace uplan {

enum class ErrorCode {
    EulerViolation,
    DanglingDart,
    Disconnected,
    NotStGraph,
    ValleyPresent,
    NotUpwardPlane,
    OuterFace,
    NotCactus,
    MultipleSources,
    NotTree,
    NotSeriesParallel,
    NotBiconnected,
    WrongSourceCount,
    InconsistentCertificate,
    ValidatorFailure,
    RealizationFailed,
    TooLarge,
};

const char* to_string(ErrorCode c);

struct Error {
    ErrorCode code;
    std::string detail;
};

template <class T>
class Expected {
    std::variant<T, Error> v_;

public:
    Expected(T t) : v_(std::move(t)) {}
    Expected(Error e) : v_(std::move(e)) {}
    bool ok() const { return v_.index() == 0; }
    explicit operator bool() const { return ok(); }
    const T& value() const { return std::get<0>(v_); }
    T& value() { return std::get<0>(v_); }
    const Error& error() const { return std::get<1>(v_); }
};

struct Edge {
    int id;   // external id, preserved through serialization
    int tail; // vertex index
    int head; // vertex index
};

struct Dag {
    std::vector<std::string> names; // vertex index -> name
    std::vector<Edge> edges;        // edge index -> edge; internal code uses indices

    int n() const { return (int)names.size(); }
    int m() const { return (int)edges.size(); }
    int vertex(const std::string& name) const; // -1 if absent
    int add_vertex(const std::string& name);
    int add_edge(int tail, int head); // id = index
    std::vector<std::vector<int>> out_adj() const; // vertex -> edge indices
    std::vector<std::vector<int>> in_adj() const;
};

// A dart is one of the two ends of an edge; it attaches at that endpoint's vertex.
struct Dart {
    int edge = -1;
    bool at_head = false;

    bool operator==(const Dart&) const = default;
    auto operator<=>(const Dart&) const = default;
};

inline Dart twin(Dart d) { return {d.edge, !d.at_head}; }

struct PlaneDag {
    Dag g;
    std::vector<std::vector<Dart>> rotation; // per vertex, ccw
    Dart outer;                              // face left of this dart's traversal

    int dart_vertex(Dart d) const {
        const Edge& e = g.edges[d.edge];
        return d.at_head ? e.head : e.tail;
    }
    // true if the edge leaves the vertex the dart attaches at
    bool dart_outgoing(Dart d) const { return !d.at_head; }
};

Expected<PlaneDag> build_plane_dag(Dag g, std::vector<std::vector<Dart>> rotation, Dart outer);

struct FaceSet {
    std::vector<std::vector<Dart>> faces; // each face: darts in traversal order, face on the left
    std::vector<std::vector<int>> face_of; // [edge][at_head] -> face index
    int outer = -1;

    int face_of_dart(Dart d) const { return face_of[d.edge][d.at_head ? 1 : 0]; }
};

// Walks phi(d) = rotation-successor of twin(d); each orbit is one face with the face
// on the left of each dart's tail-to-head direction of travel.
FaceSet trace_faces(const PlaneDag& p);
Dart next_in_face(const PlaneDag& p, Dart d);

bool is_connected(const Dag& g);
bool is_acyclic(const Dag& g);
std::optional<std::vector<int>> topo_order(const Dag& g); // vertex order, nullopt on cycle
std::vector<int> source_vertices(const Dag& g);
std::vector<int> sink_vertices(const Dag& g);
// reach[u][v] true if a directed path u to v exists (u==v included)
std::vector<std::vector<bool>> reachability(const Dag& g);
bool is_bimodal(const PlaneDag& p);

struct LDrawing {
    std::vector<long long> x, y; // per vertex
};

// ---- JSON ----

struct ParseError {
    std::string message; // includes position info where available
};

struct GraphInput {
    Dag dag;
    std::optional<std::vector<std::vector<Dart>>> rotation;
    std::optional<Dart> outer;
};

std::variant<GraphInput, ParseError> parse_graph_json(const std::string& text);
std::string graph_to_json(const PlaneDag& p);
std::string dag_to_json(const Dag& g);
std::variant<LDrawing, ParseError> parse_drawing_json(const std::string& text, const Dag& g);
std::string drawing_to_json(const Dag& g, const LDrawing& d);

std::uint64_t fnv1a64(const std::string& bytes);

} // namespace uplan
