#include "cricseg/app.hpp"

#include "cricseg/scenario.hpp"

#include <CLI11.hpp>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace cricseg {

namespace {

struct LoadedBackend {
    std::unique_ptr<IndexedBackend> backend;
    std::shared_ptr<const Scenario> scenario;
    int width = 0;
    int height = 0;
};

std::pair<int, int> probe_source_size(const PipelineConfig& cfg)
{
    if (cfg.raw)
        return {cfg.raw->width, cfg.raw->height};
    try {
        auto stream = open_source(cfg.source_uri, cfg.fps);
        auto f = stream->next();
        if (!f)
            throw StageError("source", "no frames in " + cfg.source_uri);
        return {f->width(), f->height()};
    } catch (const SourceError& e) {
        throw StageError("source", e.what());
    }
}

LoadedBackend load_backend(const PipelineConfig& cfg)
{
    LoadedBackend out;
    switch (cfg.backend) {
    case BackendKind::synthetic: {
        try {
            auto sc = std::make_shared<const Scenario>(load_scenario(resolve_scenario(cfg.scenario)));
            out.backend = std::make_unique<SyntheticBackend>(*sc);
            out.width = sc->width;
            out.height = sc->height;
            out.scenario = std::move(sc);
        } catch (const ScenarioError& e) {
            throw StageError("backend synthetic", e.what());
        }
        break;
    }
    case BackendKind::file: {
        const auto [w, h] = probe_source_size(cfg);
        LoadOptions opt;
        opt.ball_crop = cfg.ball_crop;
        opt.frame_width = w;
        opt.frame_height = h;
        try {
            out.backend = std::make_unique<FileBackend>(load_precomputed(cfg.annotations, opt));
        } catch (const std::exception& e) {
            throw StageError("backend file", cfg.annotations + ": " + e.what());
        }
        out.width = w;
        out.height = h;
        break;
    }
    case BackendKind::inference:
        throw ConfigError("backend: no inference adapter is built into this binary");
    }
    return out;
}

std::unique_ptr<FrameStream> open_frames(const PipelineConfig& cfg, const LoadedBackend& lb)
{
    if (cfg.source_uri.empty()) {
        if (!lb.scenario)
            throw ConfigError("source.uri is required for this backend");
        return std::make_unique<ScenarioStream>(lb.scenario);
    }
    try {
        return open_source(cfg.source_uri, cfg.fps, cfg.raw);
    } catch (const SourceError& e) {
        throw StageError("source", e.what());
    }
}

TrackerConfig tracker_for(const PipelineConfig& cfg, int width)
{
    TrackerConfig t = cfg.tracker;
    t.max_jump_px = cfg.max_jump_px ? *cfg.max_jump_px : TrackerConfig::for_frame_width(width).max_jump_px;
    return t;
}

template <class F>
auto stage(const char* name, F&& fn)
{
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

std::string read_first_line(const fs::path& path, const std::string& prefix)
{
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) == 0) {
            auto pos = line.find(':');
            if (pos != std::string::npos) {
                auto v = line.substr(pos + 1);
                v.erase(0, v.find_first_not_of(" \t"));
                return v;
            }
        }
    }
    return {};
}

}  // namespace

SegmentResult cmd_segment(const PipelineConfig& cfg, std::ostream& log)
{
    cfg.validate();
    auto lb = load_backend(cfg);
    auto frames = open_frames(cfg, lb);

    PipelineOptions opt;
    opt.threads = cfg.threads;
    auto result = stage("segment", [&] { return segment(*frames, *lb.backend, cfg.segmenter, opt); });
    stage("output", [&] {
        write_manifest(cfg.out_dir / "clips.jsonl", result.clips);
        return 0;
    });
    if (!cfg.export_frames.empty()) {
        auto again = open_frames(cfg, lb);
        stage("export", [&] {
            export_clip_frames(*again, result.clips, cfg.export_frames);
            return 0;
        });
    }

    int live = 0;
    int replay = 0;
    for (const auto& c : result.clips)
        (c.liveness == Liveness::replay ? replay : live) += 1;
    log << result.frames << " frames, " << result.boundaries.size() << " boundaries, " << result.clips.size()
        << " clips (" << live << " live, " << replay << " replay) -> " << (cfg.out_dir / "clips.jsonl").string()
        << '\n';
    for (const auto& e : result.errors)
        log << "backend error at frame " << e.frame_index << ": " << e.message << '\n';
    return result;
}

std::vector<ClipTrajectory> cmd_track(const PipelineConfig& cfg, const fs::path& manifest, std::ostream& log)
{
    cfg.validate();
    auto lb = load_backend(cfg);
    const auto clips = stage("manifest", [&] { return read_manifest(manifest); });
    const auto tcfg = tracker_for(cfg, lb.width);

    std::vector<ClipTrajectory> out;
    std::vector<nlohmann::json> records;
    int skipped = 0;
    for (const auto& c : clips) {
        if (c.liveness == Liveness::replay && !cfg.include_replays) {
            ++skipped;
            continue;
        }
        auto t = stage("track", [&] { return track_clip(c, *lb.backend, tcfg); });
        records.push_back(to_json(t));
        out.push_back(std::move(t));
    }
    stage("output", [&] {
        write_jsonl(cfg.out_dir / "trajectories.jsonl", records);
        return 0;
    });
    int empty = 0;
    for (const auto& t : out)
        empty += t.trajectory.empty() ? 1 : 0;
    log << out.size() << " trajectories (" << empty << " empty, " << skipped << " replay clips skipped) -> "
        << (cfg.out_dir / "trajectories.jsonl").string() << '\n';
    return out;
}

std::vector<DeliveryRecord> cmd_classify(const PipelineConfig& cfg, const fs::path& trajectories, std::ostream& log)
{
    cfg.validate();
    auto lb = load_backend(cfg);
    const auto tracks = stage("trajectories", [&] {
        std::vector<ClipTrajectory> v;
        for (const auto& j : read_jsonl(trajectories))
            v.push_back(clip_trajectory_from_json(j));
        return v;
    });

    std::vector<DeliveryRecord> out;
    std::vector<nlohmann::json> records;
    for (const auto& t : tracks) {
        auto r = classify_trajectory(t, *lb.backend, cfg.pitch);
        records.push_back(to_json(r));
        out.push_back(std::move(r));
    }
    stage("output", [&] {
        write_jsonl(cfg.out_dir / "deliveries.jsonl", records);
        return 0;
    });
    const auto n = count_deliveries(out);
    log << "full " << n.full << ", good " << n.good << ", short " << n.short_pitched << ", unclassified "
        << n.unclassified << " -> " << (cfg.out_dir / "deliveries.jsonl").string() << '\n';
    return out;
}

ConfusionMatrix load_counts(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw StageError("eval", "cannot open " + path.string());
    try {
        nlohmann::json j;
        in >> j;
        return confusion_from_json(j);
    } catch (const std::exception& e) {
        throw StageError("eval", path.string() + ": " + e.what());
    }
}

std::vector<bool> load_bool_stream(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw StageError("eval", "cannot open " + path.string());
    std::vector<bool> out;
    std::string tok;
    while (in >> tok) {
        if (tok == "1" || tok == "true" || tok == "T")
            out.push_back(true);
        else if (tok == "0" || tok == "false" || tok == "F")
            out.push_back(false);
        else
            throw StageError("eval", path.string() + ": expected 1/0 or true/false, got '" + tok + "'");
    }
    if (out.empty())
        throw StageError("eval", path.string() + " is empty");
    return out;
}

std::string cmd_eval(const ConfusionMatrix& cm, ReportFormat format)
{
    if (format == ReportFormat::csv)
        return metrics_csv(cm);
    return metrics_json(cm).dump(2) + "\n";
}

nlohmann::json machine_descriptor()
{
    char host[256] = {};
    if (gethostname(host, sizeof host - 1) != 0)
        host[0] = '\0';
    nlohmann::json j;
    j["hostname"] = host;
    j["cpu_model"] = read_first_line("/proc/cpuinfo", "model name");
    j["hardware_threads"] = std::thread::hardware_concurrency();
#if defined(__clang__)
    j["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    j["compiler"] = std::string("gcc ") + __VERSION__;
#else
    j["compiler"] = "unknown";
#endif
#ifdef NDEBUG
    j["build"] = "release";
#else
    j["build"] = "debug";
#endif
    return j;
}

nlohmann::json cmd_bench(const PipelineConfig& cfg, const BenchSpec& spec, std::ostream& log)
{
    MatchSpec m;
    m.frames = spec.frames;
    m.width = spec.width;
    m.height = spec.height;
    m.fps = cfg.fps;
    const auto scenario = stage("bench", [&] { return std::make_shared<const Scenario>(make_match_scenario(m)); });
    SyntheticBackend backend(*scenario);
    ScenarioRenderer renderer(scenario);

    // Frames are rendered up front so the timing covers only the pipeline.
    std::vector<Frame> frames;
    frames.reserve(static_cast<std::size_t>(scenario->frame_count()));
    for (std::int64_t i = 0; i < scenario->frame_count(); ++i)
        frames.push_back(renderer.render(i));
    VectorStream stream(std::move(frames), scenario->fps);

    PipelineOptions opt;
    opt.threads = cfg.threads;
    const auto t0 = std::chrono::steady_clock::now();
    auto result = stage("segment", [&] { return segment(stream, backend, cfg.segmenter, opt); });
    const auto t1 = std::chrono::steady_clock::now();
    const double wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    const auto perf = throughput(static_cast<std::uint64_t>(result.frames), wall_ms);

    nlohmann::json report = to_json(perf);
    report["width"] = spec.width;
    report["height"] = spec.height;
    report["threads"] = cfg.threads;
    report["clips"] = result.clips.size();
    report["machine"] = machine_descriptor();
    stage("output", [&] {
        fs::create_directories(cfg.out_dir);
        std::ofstream out(cfg.out_dir / "bench.json");
        out << report.dump(2) << '\n';
        if (!out)
            throw std::runtime_error("cannot write bench.json");
        return 0;
    });
    log << result.frames << " frames at " << spec.width << "x" << spec.height << ": " << perf.ms_per_frame
        << " ms/frame, " << perf.fps << " fps -> " << (cfg.out_dir / "bench.json").string() << '\n';
    return report;
}

std::vector<std::pair<std::string, std::string>> cmd_scenarios()
{
    std::vector<std::pair<std::string, std::string>> out;
    const auto dir = scenario_dir();
    if (!fs::is_directory(dir))
        throw StageError("scenarios", "scenario directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".json")
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        std::ifstream in(p);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw StageError("scenarios", p.string() + ": " + e.what());
        }
        out.emplace_back(p.stem().string(), j.value("description", std::string()));
    }
    return out;
}

int run_cli(int argc, char** argv)
{
    CLI::App app{"Segment front-pitch-view delivery clips from cricket broadcasts"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, source, backend, gate, out_dir, scenario, annotations;
    std::optional<double> fps;
    std::optional<int> threads;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--source", source, "image directory or raw:<path>");
    app.add_option("--backend", backend, "synthetic | file | inference");
    app.add_option("--gate", gate, "classifier | umpire | pitch | either | dual");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--fps", fps, "frame rate of the source");
    app.add_option("--threads", threads, "annotation worker threads");
    app.add_option("--scenario", scenario, "bundled scenario name or JSON path");
    app.add_option("--annotations", annotations, "precomputed annotations (JSON Lines)");
    app.add_option("--set", sets, "override a config key (key=value)");

    auto* seg = app.add_subcommand("segment", "write the clip manifest");
    auto* track = app.add_subcommand("track", "track the ball in each clip");
    std::string manifest;
    track->add_option("--manifest", manifest, "clip manifest (default <out>/clips.jsonl)");
    auto* classify = app.add_subcommand("classify", "bounce distance and length per delivery");
    std::string trajectories;
    classify->add_option("--trajectories", trajectories, "trajectory file (default <out>/trajectories.jsonl)");
    auto* eval = app.add_subcommand("eval", "recall and precision");
    std::string pred, labels, counts, format = "json";
    eval->add_option("--pred", pred, "predicted booleans");
    eval->add_option("--labels", labels, "ground-truth booleans");
    eval->add_option("--counts", counts, "JSON confusion counts");
    eval->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    auto* bench = app.add_subcommand("bench", "time the segment pipeline on a generated match");
    BenchSpec bs;
    bench->add_option("--frames", bs.frames, "frames to process");
    bench->add_option("--width", bs.width, "frame width");
    bench->add_option("--height", bs.height, "frame height");
    auto* scen = app.add_subcommand("scenarios", "list bundled scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    auto build_config = [&] {
        KeyValues kv;
        if (!config_path.empty())
            kv = KeyValues::load(config_path);
        for (const auto& s : sets)
            kv.set_assignment(s);
        if (!source.empty())
            kv.set("source.uri", source);
        if (!backend.empty())
            kv.set("backend.type", backend);
        if (!gate.empty())
            kv.set("gate.strategy", gate);
        if (!out_dir.empty())
            kv.set("output.dir", out_dir);
        if (fps)
            kv.set("source.fps", std::to_string(*fps));
        if (threads)
            kv.set("run.threads", std::to_string(*threads));
        if (!scenario.empty())
            kv.set("backend.scenario", scenario);
        if (!annotations.empty())
            kv.set("backend.annotations", annotations);
        return config_from(kv);
    };

    try {
        if (scen->parsed()) {
            for (const auto& [name, desc] : cmd_scenarios())
                std::cout << name << "\t" << desc << '\n';
            return 0;
        }
        if (eval->parsed()) {
            ConfusionMatrix cm;
            if (!counts.empty()) {
                cm = load_counts(counts);
            } else {
                if (pred.empty() || labels.empty())
                    throw ConfigError("eval needs --counts or both --pred and --labels");
                const auto p = load_bool_stream(pred);
                const auto l = load_bool_stream(labels);
                std::unique_ptr<bool[]> pb(new bool[p.size()]), lb(new bool[l.size()]);
                std::copy(p.begin(), p.end(), pb.get());
                std::copy(l.begin(), l.end(), lb.get());
                cm = stage("eval", [&] {
                    return confusion(std::span<const bool>(pb.get(), p.size()),
                                     std::span<const bool>(lb.get(), l.size()));
                });
            }
            const auto report = cmd_eval(cm, format == "csv" ? ReportFormat::csv : ReportFormat::json);
            std::cout << report;
            if (!out_dir.empty()) {
                fs::create_directories(out_dir);
                std::ofstream(fs::path(out_dir) / (format == "csv" ? "metrics.csv" : "metrics.json")) << report;
            }
            return 0;
        }

        auto cfg = build_config();
        if (bench->parsed()) {
            cmd_bench(cfg, bs, std::cout);
        } else if (seg->parsed()) {
            cmd_segment(cfg, std::cout);
        } else if (track->parsed()) {
            cmd_track(cfg, manifest.empty() ? cfg.out_dir / "clips.jsonl" : fs::path(manifest), std::cout);
        } else if (classify->parsed()) {
            cmd_classify(cfg, trajectories.empty() ? cfg.out_dir / "trajectories.jsonl" : fs::path(trajectories),
                         std::cout);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "cricseg: config: " << e.what() << '\n';
        return 1;
    } catch (const StageError& e) {
        std::cerr << "cricseg: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "cricseg: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace cricseg
