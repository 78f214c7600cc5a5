#include "uplan/core.hpp"
#include "uplan/geometry.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using nlohmann::ordered_json;
using namespace uplan;

namespace {

// exit codes: 0 yes/ok, 1 no/violation, 2 usage or malformed input, 3 oracle disagreement
constexpr int kOk = 0, kNo = 1, kUsage = 2;

struct Ctx {
    std::string checksum_input; // raw bytes of all inputs, in argument order
    bool timing = false;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return buf;
}

int emit(const Ctx& ctx, const std::string& command, ordered_json body, int code) {
    ordered_json out;
    out["command"] = command;
    out["input_fnv1a64"] = hex64(fnv1a64(ctx.checksum_input));
    for (auto& [k, v] : body.items()) out[k] = v;
    if (ctx.timing) {
        auto dt = std::chrono::steady_clock::now() - ctx.start;
        out["timing_ms"] =
            std::chrono::duration_cast<std::chrono::microseconds>(dt).count() / 1000.0;
    }
    std::cout << out.dump(2) << "\n";
    return code;
}

int fail_usage(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return kUsage;
}

struct LoadedGraph {
    GraphInput in;
    PlaneDag plane;
    bool has_embedding = false;
};

// Reads a graph file; if rotation and outer are present the embedding is built and
// checked. Parse and structural errors surface as usage failures with detail.
std::variant<LoadedGraph, int> load_graph(Ctx& ctx, const std::string& path,
                                          bool need_embedding) {
    auto text = read_file(path);
    if (!text) return fail_usage("cannot read " + path);
    ctx.checksum_input += *text;
    auto parsed = parse_graph_json(*text);
    if (std::holds_alternative<ParseError>(parsed))
        return fail_usage(path + ": " + std::get<ParseError>(parsed).message);
    LoadedGraph lg;
    lg.in = std::get<GraphInput>(std::move(parsed));
    if (lg.in.rotation && lg.in.outer) {
        auto p = build_plane_dag(lg.in.dag, *lg.in.rotation, *lg.in.outer);
        if (!p.ok())
            return fail_usage(path + ": " + std::string(to_string(p.error().code)) + ": " +
                              p.error().detail);
        lg.plane = std::move(p.value());
        lg.has_embedding = true;
    } else if (need_embedding) {
        return fail_usage(path + ": this command needs \"rotation\" and \"outer\"");
    }
    return lg;
}

std::variant<LDrawing, int> load_drawing(Ctx& ctx, const std::string& path, const Dag& g) {
    auto text = read_file(path);
    if (!text) return fail_usage("cannot read " + path);
    ctx.checksum_input += *text;
    auto parsed = parse_drawing_json(*text, g);
    if (std::holds_alternative<ParseError>(parsed))
        return fail_usage(path + ": " + std::get<ParseError>(parsed).message);
    return std::get<LDrawing>(std::move(parsed));
}

int write_svg_if(const std::string& svg_path, const Dag& g, const LDrawing& d) {
    if (svg_path.empty()) return kOk;
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) return fail_usage("cannot write " + svg_path);
    out << render_svg(g, d);
    return kOk;
}

int cmd_validate(Ctx& ctx, const std::string& graph_path, const std::string& drawing_path,
                 const std::string& svg_path) {
    auto lg = load_graph(ctx, graph_path, true);
    if (lg.index() == 1) return std::get<1>(lg);
    LoadedGraph& g = std::get<0>(lg);
    auto ld = load_drawing(ctx, drawing_path, g.in.dag);
    if (ld.index() == 1) return std::get<1>(ld);
    const LDrawing& d = std::get<0>(ld);
    if (int rc = write_svg_if(svg_path, g.in.dag, d); rc != kOk) return rc;
    auto r = validate_ldrawing(g.plane, d);
    if (r.ok()) return emit(ctx, "validate", {{"result", "ok"}}, kOk);
    return emit(ctx, "validate", {{"result", "violation"}, {"detail", r.error().detail}}, kNo);
}

int cmd_render(Ctx& ctx, const std::string& graph_path, const std::string& drawing_path,
               const std::string& svg_path) {
    auto lg = load_graph(ctx, graph_path, false);
    if (lg.index() == 1) return std::get<1>(lg);
    LoadedGraph& g = std::get<0>(lg);
    auto ld = load_drawing(ctx, drawing_path, g.in.dag);
    if (ld.index() == 1) return std::get<1>(ld);
    const LDrawing& d = std::get<0>(ld);
    if (!svg_path.empty()) {
        if (int rc = write_svg_if(svg_path, g.in.dag, d); rc != kOk) return rc;
        return emit(ctx, "render", {{"result", "ok"}, {"svg", svg_path}}, kOk);
    }
    std::cout << render_svg(g.in.dag, d);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"upward planar L-drawing toolkit"};
    app.require_subcommand(1);
    Ctx ctx;

    std::string graph_path, drawing_path, svg_path;

    auto* validate = app.add_subcommand("validate", "check a drawing against its graph");
    validate->add_option("graph", graph_path, "graph json with rotation and outer")->required();
    validate->add_option("drawing", drawing_path, "drawing json")->required();
    validate->add_flag("--timing", ctx.timing, "add a timing field to the verdict");
    validate->add_option("--svg", svg_path, "also write an svg rendering");

    auto* render = app.add_subcommand("render", "render a drawing to svg");
    render->add_option("graph", graph_path, "graph json")->required();
    render->add_option("drawing", drawing_path, "drawing json")->required();
    render->add_option("--svg", svg_path, "output path (stdout if omitted)");
    render->add_flag("--timing", ctx.timing, "add a timing field to the verdict");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e);
            return kOk;
        }
        std::cerr << e.what() << "\n";
        return kUsage;
    }

    if (validate->parsed()) return cmd_validate(ctx, graph_path, drawing_path, svg_path);
    if (render->parsed()) return cmd_render(ctx, graph_path, drawing_path, svg_path);
    return fail_usage("no command");
}
