#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "surfmink/experiments.hpp"

using namespace surfmink;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Everything a subcommand needs beyond its own keys: the effective config
// (file first, explicit flags on top) and the output directory.
struct RunContext {
    Config cfg;
    std::string out_dir;
    int workers = 1;
    long seed = 0;
    bool verbose = false;
};

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void emit(const RunContext& ctx, const std::string& name, ResultTable table) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(config_hash(ctx.cfg)));
    table.metadata["experiment"] = name;
    table.metadata["config_hash"] = buf;
    table.metadata["seed"] = std::to_string(ctx.seed);

    std::string path = join_path(ctx.out_dir, name + ".csv");
    write_csv(table, path);
    std::cout << "wrote " << path << "\n";
    if (ctx.verbose) std::cout << csv_string(table);
}

std::vector<int> int_range(int lo, int hi) {
    std::vector<int> out;
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
}

FlowerParams flower_from_config(const Config& cfg, const FlowerParams& defaults) {
    FlowerParams p = defaults;
    p.r0 = cfg.get_double("r0", p.r0);
    p.a = cfg.get_double("a", p.a);
    p.omega = cfg.get_int("omega", p.omega);
    p.x0 = cfg.get_double("x0", p.x0);
    p.y0 = cfg.get_double("y0", p.y0);
    return p;
}

void run_regular_polygons(const RunContext& ctx) {
    std::string surface_name = ctx.cfg.get("surface", "sphere");
    std::shared_ptr<const Surface> surface;
    double size;
    if (surface_name == "sphere") {
        surface = make_sphere(ctx.cfg.get_double("radius", 1.0));
        size = ctx.cfg.get_double("size", kPi / 4.0); // circle colatitude
    } else if (surface_name == "plane") {
        surface = make_plane();
        size = ctx.cfg.get_double("size", 1.0); // circle radius
    } else {
        throw UsageError("regular-polygons: surface must be sphere or plane, got '" +
                         surface_name + "'");
    }
    std::vector<int> qs = ctx.cfg.get_int_list("q", int_range(3, 6));
    std::vector<int> ranks = ctx.cfg.get_int_list("p", int_range(1, 6));
    RegularPolygonStudy study = regular_polygon_study(*surface, qs, ranks, size);
    ResultTable table = study.table();
    table.metadata["surface"] = surface_name;
    emit(ctx, "regular_polygons", std::move(table));
}

void run_transport_demo(const RunContext& ctx) {
    auto sphere = make_sphere(ctx.cfg.get_double("radius", 1.0));
    emit(ctx, "transport_demo", transport_demo(*sphere).table());
}

void run_convergence(const RunContext& ctx) {
    std::string scheme_name = ctx.cfg.get("scheme", "geodesic");
    Scheme scheme;
    if (scheme_name == "geodesic") {
        scheme = Scheme::Geodesic;
    } else if (scheme_name == "line") {
        scheme = Scheme::Line;
    } else {
        throw UsageError("convergence: scheme must be geodesic or line, got '" + scheme_name +
                         "'");
    }
    FlowerParams params = flower_from_config(ctx.cfg, {0.7, 0.2, 3, kPi / 2.0, kPi / 4.0});
    std::vector<int> qs = ctx.cfg.get_int_list("q", {4, 16, 64, 256, 1024});
    int rank = ctx.cfg.get_int("p", 3);

    ParamCurve curve = flower_curve(make_ellipsoid(1.6, 1.3, 1.0), params);
    ConvergenceReport report = convergence_study(curve, scheme, qs, rank);
    emit(ctx, "convergence_" + scheme_name, convergence_table(report));
}

void run_torus_sweep(const RunContext& ctx) {
    std::vector<double> angles;
    if (ctx.cfg.has("theta2_over_pi")) {
        for (double v : ctx.cfg.get_double_list("theta2_over_pi", {})) {
            angles.push_back(v * kPi);
        }
    } else {
        angles = default_torus_angles();
    }
    emit(ctx, "torus_sweep", torus_sweep(angles, ctx.workers).table());
}

void run_levelset_study(const RunContext& ctx) {
    FlowerParams params = flower_from_config(ctx.cfg, {0.5, 0.1, 4, kPi / 2.0, kPi / 4.0});
    std::vector<int> levels = ctx.cfg.get_int_list("levels", int_range(1, 6));
    std::vector<int> ranks = ctx.cfg.get_int_list("p", {2, 4, 6});

    LevelsetStudy study = levelset_study(params, levels, ranks);
    emit(ctx, "levelset_study", study.table());

    std::string svg_path = join_path(ctx.out_dir, "levelset_study.svg");
    write_loglog_svg(study.plot_series(), study.plot_guides(), "mesh size h",
                     "anisotropy error", svg_path);
    std::cout << "wrote " << svg_path << "\n";
}

void run_flower_sweep(const RunContext& ctx) {
    std::vector<FlowerPanel> panels;
    std::string which = ctx.cfg.get("panel", "all");
    if (which == "all") {
        panels = {FlowerPanel::Amplitude, FlowerPanel::Radius, FlowerPanel::Frequency,
                  FlowerPanel::Position};
    } else {
        panels = {panel_from_name(which)};
    }
    std::vector<int> ranks = ctx.cfg.get_int_list("p", int_range(2, 10));
    for (FlowerPanel panel : panels) {
        std::vector<double> values =
            ctx.cfg.get_double_list("values", default_panel_values(panel));
        FlowerSweep sweep = flower_sweep(panel, values, ranks, ctx.workers);
        emit(ctx, "flower_sweep_" + panel_name(panel), sweep.table());
    }
}

void run_contour(const RunContext& ctx) {
    std::string input = ctx.cfg.get("input");
    Contour contour = load_contour(input);
    int passes = ctx.cfg.get_int("passes", 1);
    std::vector<int> ranks = ctx.cfg.get_int_list("p", int_range(2, 6));
    ContourReport report = contour_report(contour, passes, ranks);
    ResultTable table = report.table();
    table.metadata["input"] = input;
    emit(ctx, "contour_report", std::move(table));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Irreducible surface Minkowski tensors of closed curves on surfaces"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    RunContext ctx;

    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "output directory (overridden by SURFMINK_OUT)");
    app.add_option("--workers", ctx.workers, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", ctx.seed, "seed recorded in output metadata");
    app.add_flag("--verbose", ctx.verbose, "echo tables to stdout");

    // per-subcommand overrides handed through as config keys
    struct FlagSpec {
        std::string flag, key, help;
    };
    auto wire = [&](CLI::App* cmd, const std::vector<FlagSpec>& specs) {
        cmd->fallthrough(); // global flags may follow the subcommand name
        auto overrides = std::make_shared<std::map<std::string, std::string>>();
        for (const FlagSpec& s : specs) {
            cmd->add_option_function<std::string>(
                s.flag, [overrides, key = s.key](const std::string& v) { (*overrides)[key] = v; },
                s.help);
        }
        return overrides;
    };

    CLI::App* reg = app.add_subcommand("regular-polygons",
                                       "anisotropies of regular geodesic polygons");
    auto reg_over = wire(reg, {{"--surface", "surface", "sphere or plane"},
                               {"--q", "q", "vertex counts, comma separated"},
                               {"--p", "p", "tensor ranks, comma separated"},
                               {"--size", "size", "circle colatitude (sphere) or radius (plane)"}});

    CLI::App* demo = app.add_subcommand("transport-demo",
                                        "co-normal transport around the octant triangle");
    auto demo_over = wire(demo, {{"--radius", "radius", "sphere radius"}});

    CLI::App* conv = app.add_subcommand("convergence",
                                        "polygon approximation errors against the smooth curve");
    auto conv_over = wire(conv, {{"--scheme", "scheme", "geodesic or line"},
                                 {"--q", "q", "segment counts, comma separated"},
                                 {"--p", "p", "tensor rank"}});

    CLI::App* torus = app.add_subcommand("torus-sweep", "geodesic triangles on a torus");
    auto torus_over = wire(torus, {{"--theta2-over-pi", "theta2_over_pi",
                                    "sweep positions in units of pi, comma separated"}});

    CLI::App* level = app.add_subcommand("levelset-study",
                                         "anisotropy convergence on triangulated spheres");
    auto level_over = wire(level, {{"--levels", "levels", "refinement levels, comma separated"},
                                   {"--p", "p", "tensor ranks, comma separated"}});

    CLI::App* flower = app.add_subcommand("flower-sweep",
                                          "flower curve parameter sweeps on an ellipsoid");
    auto flower_over = wire(flower, {{"--panel", "panel",
                                      "amplitude, radius, frequency, position or all"},
                                     {"--values", "values", "swept values, comma separated"},
                                     {"--p", "p", "tensor ranks, comma separated"}});

    CLI::App* contour = app.add_subcommand("contour", "measured contour pipeline");
    auto contour_over = wire(contour, {{"--input", "input", "contour CSV path"},
                                       {"--passes", "passes", "smoothing passes"},
                                       {"--p", "p", "tensor ranks, comma separated"}});

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) ctx.cfg = Config::load(config_path);
        if (const char* env = std::getenv("SURFMINK_OUT"); env && *env) out_dir = env;
        ctx.out_dir = out_dir;
        std::filesystem::create_directories(ctx.out_dir);

        auto apply = [&](const std::map<std::string, std::string>& overrides) {
            for (const auto& [key, value] : overrides) ctx.cfg.set(key, value);
        };
        if (reg->parsed()) {
            apply(*reg_over);
            run_regular_polygons(ctx);
        } else if (demo->parsed()) {
            apply(*demo_over);
            run_transport_demo(ctx);
        } else if (conv->parsed()) {
            apply(*conv_over);
            run_convergence(ctx);
        } else if (torus->parsed()) {
            apply(*torus_over);
            run_torus_sweep(ctx);
        } else if (level->parsed()) {
            apply(*level_over);
            run_levelset_study(ctx);
        } else if (flower->parsed()) {
            apply(*flower_over);
            run_flower_sweep(ctx);
        } else if (contour->parsed()) {
            apply(*contour_over);
            run_contour(ctx);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
