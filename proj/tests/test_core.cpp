#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "uplan/core.hpp"

using namespace uplan;

namespace {

Dag path_dag(std::initializer_list<std::pair<int, int>> edges, int n) {
    Dag g;
    for (int i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
    for (auto [a, b] : edges) g.add_edge(a, b);
    return g;
}

} // namespace

TEST_CASE("dag basics") {
    Dag g;
    CHECK(g.add_vertex("s") == 0);
    CHECK(g.add_vertex("a") == 1);
    CHECK(g.add_vertex("t") == 2);
    CHECK(g.vertex("a") == 1);
    CHECK(g.vertex("zz") == -1);
    CHECK(g.add_edge(0, 1) == 0);
    CHECK(g.add_edge(1, 2) == 1);
    CHECK(g.add_edge(0, 2) == 2);
    auto out = g.out_adj();
    auto in = g.in_adj();
    CHECK(out[0] == std::vector<int>{0, 2});
    CHECK(in[2] == std::vector<int>{1, 2});
    CHECK(g.edges[2].id == 2);
}

TEST_CASE("topo order is deterministic and detects cycles") {
    Dag g = path_dag({{0, 1}, {0, 2}, {1, 3}, {2, 3}}, 4);
    auto t = topo_order(g);
    REQUIRE(t.has_value());
    CHECK(*t == std::vector<int>{0, 1, 2, 3});
    CHECK(is_acyclic(g));

    Dag c = path_dag({{0, 1}, {1, 2}, {2, 0}}, 3);
    CHECK(!is_acyclic(c));
    CHECK(!topo_order(c).has_value());
}

TEST_CASE("sources sinks reachability") {
    Dag g = path_dag({{0, 1}, {0, 2}, {1, 3}, {2, 3}}, 4);
    CHECK(source_vertices(g) == std::vector<int>{0});
    CHECK(sink_vertices(g) == std::vector<int>{3});
    auto r = reachability(g);
    CHECK(r[0][3]);
    CHECK(r[1][3]);
    CHECK(!r[1][2]);
    CHECK(r[2][2]);
}

TEST_CASE("single edge has one face") {
    Dag g = path_dag({{0, 1}}, 2);
    std::vector<std::vector<Dart>> rot = {{Dart{0, false}}, {Dart{0, true}}};
    auto p = build_plane_dag(g, rot, Dart{0, false});
    REQUIRE(p.ok());
    FaceSet fs = trace_faces(p.value());
    CHECK(fs.faces.size() == 1);
    CHECK(fs.outer == 0);
}

TEST_CASE("two parallel edges bound two faces") {
    Dag g;
    g.add_vertex("u");
    g.add_vertex("v");
    g.add_edge(0, 1);
    g.add_edge(0, 1);
    std::vector<std::vector<Dart>> rot = {{Dart{0, false}, Dart{1, false}},
                                          {Dart{0, true}, Dart{1, true}}};
    auto p = build_plane_dag(g, rot, Dart{0, false});
    REQUIRE(p.ok());
    FaceSet fs = trace_faces(p.value());
    CHECK(fs.faces.size() == 2);
}

TEST_CASE("transitive triangle bounds two faces") {
    Dag g = path_dag({{0, 1}, {1, 2}, {0, 2}}, 3);
    std::vector<std::vector<Dart>> rot = {{Dart{0, false}, Dart{2, false}},
                                          {Dart{0, true}, Dart{1, false}},
                                          {Dart{1, true}, Dart{2, true}}};
    auto p = build_plane_dag(g, rot, Dart{2, false});
    REQUIRE(p.ok());
    FaceSet fs = trace_faces(p.value());
    CHECK(fs.faces.size() == 2);
    // every dart lands in exactly one face
    int total = 0;
    for (auto& f : fs.faces) total += (int)f.size();
    CHECK(total == 6);
}

TEST_CASE("a rotation system for a nonplanar orientation violates the euler count") {
    Dag g;
    for (int i = 0; i < 5; ++i) g.add_vertex("v" + std::to_string(i));
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) g.add_edge(i, j);
    std::vector<std::vector<Dart>> rot(5);
    for (int e = 0; e < g.m(); ++e) {
        rot[g.edges[e].tail].push_back(Dart{e, false});
        rot[g.edges[e].head].push_back(Dart{e, true});
    }
    auto p = build_plane_dag(g, rot, Dart{0, false});
    REQUIRE(!p.ok());
    CHECK(p.error().code == ErrorCode::EulerViolation);
}

TEST_CASE("malformed rotations are rejected") {
    Dag g = path_dag({{0, 1}}, 2);
    auto bad1 = build_plane_dag(g, {{Dart{0, false}, Dart{0, false}}, {Dart{0, true}}},
                                Dart{0, false});
    REQUIRE(!bad1.ok());
    CHECK(bad1.error().code == ErrorCode::DanglingDart);

    auto bad2 = build_plane_dag(g, {{Dart{0, false}}}, Dart{0, false});
    REQUIRE(!bad2.ok());
    CHECK(bad2.error().code == ErrorCode::DanglingDart);

    auto bad3 = build_plane_dag(g, {{Dart{0, false}}, {Dart{0, true}}}, Dart{7, false});
    REQUIRE(!bad3.ok());
    CHECK(bad3.error().code == ErrorCode::OuterFace);

    Dag h = path_dag({{0, 1}, {2, 3}}, 4);
    auto bad4 = build_plane_dag(
        h, {{Dart{0, false}}, {Dart{0, true}}, {Dart{1, false}}, {Dart{1, true}}},
        Dart{0, false});
    REQUIRE(!bad4.ok());
    CHECK(bad4.error().code == ErrorCode::Disconnected);
}

TEST_CASE("bimodality") {
    Dag g = path_dag({{0, 1}, {0, 1}, {1, 2}, {1, 2}}, 3);
    // at vertex 1: in, out, in, out is not bimodal
    std::vector<std::vector<Dart>> rot = {
        {Dart{0, false}, Dart{1, false}},
        {Dart{0, true}, Dart{2, false}, Dart{1, true}, Dart{3, false}},
        {Dart{2, true}, Dart{3, true}}};
    PlaneDag p;
    p.g = g;
    p.rotation = rot;
    p.outer = Dart{0, false};
    CHECK(!is_bimodal(p));
    // grouping the blocks fixes it
    p.rotation[1] = {Dart{0, true}, Dart{1, true}, Dart{2, false}, Dart{3, false}};
    CHECK(is_bimodal(p));
    // a cyclic shift changes nothing
    p.rotation[1] = {Dart{3, false}, Dart{0, true}, Dart{1, true}, Dart{2, false}};
    CHECK(is_bimodal(p));
}

TEST_CASE("graph json round trip") {
    std::string text = R"({
      "vertices": ["s", "a", "t"],
      "edges": [
        {"id": 0, "tail": "s", "head": "a"},
        {"id": 1, "tail": "a", "head": "t"},
        {"id": 2, "tail": "s", "head": "t"}
      ],
      "rotation": {
        "s": [[0, "tail"], [2, "tail"]],
        "a": [[0, "head"], [1, "tail"]],
        "t": [[1, "head"], [2, "head"]]
      },
      "outer": [2, "tail"]
    })";
    auto parsed = parse_graph_json(text);
    REQUIRE(std::holds_alternative<GraphInput>(parsed));
    const GraphInput& gi = std::get<GraphInput>(parsed);
    CHECK(gi.dag.n() == 3);
    CHECK(gi.dag.m() == 3);
    REQUIRE(gi.rotation.has_value());
    REQUIRE(gi.outer.has_value());
    auto p = build_plane_dag(gi.dag, *gi.rotation, *gi.outer);
    REQUIRE(p.ok());
    std::string out = graph_to_json(p.value());
    auto reparsed = parse_graph_json(out);
    REQUIRE(std::holds_alternative<GraphInput>(reparsed));
    const GraphInput& gi2 = std::get<GraphInput>(reparsed);
    CHECK(gi2.dag.names == gi.dag.names);
    REQUIRE(gi2.rotation.has_value());
    CHECK(*gi2.rotation == *gi.rotation);
    CHECK(*gi2.outer == *gi.outer);
}

TEST_CASE("graph json rejects malformed input") {
    auto r1 = parse_graph_json("{");
    CHECK(std::holds_alternative<ParseError>(r1));
    auto r2 = parse_graph_json(R"({"vertices": ["a", "a"], "edges": []})");
    CHECK(std::holds_alternative<ParseError>(r2));
    auto r3 = parse_graph_json(R"({"vertices": ["a"], "edges": [{"id": 0, "tail": "a", "head": "zz"}]})");
    CHECK(std::holds_alternative<ParseError>(r3));
    auto r4 = parse_graph_json(
        R"({"vertices": ["a", "b"], "edges": [{"id": 0, "tail": "a", "head": "b"}],
            "rotation": {"a": [[0, "head"]], "b": [[0, "tail"]]}})");
    CHECK(std::holds_alternative<ParseError>(r4));
}

TEST_CASE("drawing json round trip") {
    Dag g = path_dag({{0, 1}}, 2);
    LDrawing d;
    d.x = {1, 2};
    d.y = {1, 2};
    std::string text = drawing_to_json(g, d);
    auto parsed = parse_drawing_json(text, g);
    REQUIRE(std::holds_alternative<LDrawing>(parsed));
    const LDrawing& d2 = std::get<LDrawing>(parsed);
    CHECK(d2.x == d.x);
    CHECK(d2.y == d.y);
    auto bad = parse_drawing_json(R"({"coords": {"v0": [1, 1]}})", g);
    CHECK(std::holds_alternative<ParseError>(bad));
}

TEST_CASE("fnv1a64 reference values") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}
