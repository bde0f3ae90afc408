#include "cricseg/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#ifndef CRICSEG_DEFAULT_SCENARIO_DIR
#define CRICSEG_DEFAULT_SCENARIO_DIR "data/scenarios"
#endif

namespace fs = std::filesystem;

namespace cricseg {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        int i = std::stoi(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

CropSpec to_crop(const std::string& key, const std::string& v)
{
    std::stringstream ss(v);
    std::string part;
    double f[4];
    int n = 0;
    while (std::getline(ss, part, ',')) {
        if (n == 4)
            throw ConfigError(key + ": expected top,bottom,left,right");
        f[n++] = to_double(key, trim(part));
    }
    if (n != 4)
        throw ConfigError(key + ": expected top,bottom,left,right");
    return {f[0], f[1], f[2], f[3]};
}

}  // namespace

KeyValues KeyValues::parse(std::istream& in, const std::string& origin)
{
    KeyValues kv;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(n) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(n) + ": empty key");
        kv.set(key, trim(line.substr(eq + 1)));
    }
    return kv;
}

KeyValues KeyValues::load(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    return parse(in, path.string());
}

void KeyValues::set_assignment(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || trim(assignment.substr(0, eq)).empty())
        throw ConfigError("expected key=value, got '" + assignment + "'");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

PipelineConfig config_from(const KeyValues& kv)
{
    PipelineConfig c;
    std::optional<int> raw_w, raw_h;
    auto& seg = c.segmenter;

    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"source.uri", [&](auto&, auto& v) { c.source_uri = v; }},
        {"source.fps", [&](auto& k, auto& v) { c.fps = to_double(k, v); }},
        {"source.width", [&](auto& k, auto& v) { raw_w = to_int(k, v); }},
        {"source.height", [&](auto& k, auto& v) { raw_h = to_int(k, v); }},
        {"backend.type",
         [&](auto& k, auto& v) {
             if (v == "synthetic")
                 c.backend = BackendKind::synthetic;
             else if (v == "file")
                 c.backend = BackendKind::file;
             else if (v == "inference")
                 c.backend = BackendKind::inference;
             else
                 throw ConfigError(k + ": expected synthetic, file or inference");
         }},
        {"backend.annotations", [&](auto&, auto& v) { c.annotations = v; }},
        {"backend.scenario", [&](auto&, auto& v) { c.scenario = v; }},
        {"backend.ball_crop", [&](auto& k, auto& v) { c.ball_crop = to_crop(k, v); }},
        {"gate.strategy",
         [&](auto& k, auto& v) {
             try {
                 seg.strategy = parse_strategy(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(k + ": " + e.what());
             }
         }},
        {"gate.dual_mode",
         [&](auto& k, auto& v) {
             try {
                 seg.gate.dual_mode = parse_dual_mode(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(k + ": " + e.what());
             }
         }},
        {"gate.thresholds.classifier", [&](auto& k, auto& v) { seg.gate.classifier_threshold = to_double(k, v); }},
        {"gate.thresholds.umpire", [&](auto& k, auto& v) { seg.gate.umpire_conf_min = to_double(k, v); }},
        {"gate.thresholds.pitch", [&](auto& k, auto& v) { seg.gate.pitch_conf_min = to_double(k, v); }},
        {"gate.debounce_k", [&](auto& k, auto& v) { seg.debounce_k = to_int(k, v); }},
        {"boundary.foreground_threshold",
         [&](auto& k, auto& v) { seg.boundary.foreground_threshold = to_double(k, v); }},
        {"boundary.init_frames", [&](auto& k, auto& v) { seg.boundary.init_frames = to_int(k, v); }},
        {"boundary.pixel_threshold", [&](auto& k, auto& v) { seg.boundary.pixel_threshold = to_double(k, v); }},
        {"boundary.learning_rate", [&](auto& k, auto& v) { seg.boundary.learning_rate = to_double(k, v); }},
        {"segment.min_clip_frames", [&](auto& k, auto& v) { seg.min_clip_frames = to_int(k, v); }},
        {"replay.band_fraction", [&](auto& k, auto& v) { seg.replay.band.band_fraction = to_double(k, v); }},
        {"replay.threshold", [&](auto& k, auto& v) { seg.replay.mean_abs_diff_threshold = to_double(k, v); }},
        {"replay.strict", [&](auto& k, auto& v) { seg.replay.strict = to_bool(k, v); }},
        {"tracker.max_jump_px", [&](auto& k, auto& v) { c.max_jump_px = to_double(k, v); }},
        {"tracker.max_gap_frames", [&](auto& k, auto& v) { c.tracker.max_gap_frames = to_int(k, v); }},
        {"tracker.min_track_points", [&](auto& k, auto& v) { c.tracker.min_track_points = to_int(k, v); }},
        {"pitch.tilt_deg", [&](auto& k, auto& v) { c.pitch.tilt_deg = to_double(k, v); }},
        {"pitch.full_max_m", [&](auto& k, auto& v) { c.pitch.full_max_m = to_double(k, v); }},
        {"pitch.good_max_m", [&](auto& k, auto& v) { c.pitch.good_max_m = to_double(k, v); }},
        {"output.dir", [&](auto&, auto& v) { c.out_dir = v; }},
        {"output.export_frames", [&](auto&, auto& v) { c.export_frames = v; }},
        {"output.include_replays", [&](auto& k, auto& v) { c.include_replays = to_bool(k, v); }},
        {"run.threads", [&](auto& k, auto& v) { c.threads = to_int(k, v); }},
    };

    for (const auto& [key, value] : kv.values()) {
        auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("unknown config key '" + key + "'");
        it->second(key, value);
    }
    if (raw_w || raw_h) {
        if (!raw_w || !raw_h)
            throw ConfigError("source.width and source.height must be given together");
        c.raw = RawFormat{*raw_w, *raw_h};
    }
    return c;
}

void PipelineConfig::validate() const
{
    auto wrap = [](const char* what, auto&& fn) {
        try {
            fn();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string(what) + ": " + e.what());
        }
    };
    if (!(fps > 0.0))
        throw ConfigError("source.fps must be positive");
    if (threads < 1)
        throw ConfigError("run.threads must be >= 1");
    wrap("gate/boundary/replay", [&] { segmenter.validate(); });
    wrap("tracker", [&] {
        TrackerConfig t = tracker;
        if (max_jump_px)
            t.max_jump_px = *max_jump_px;
        t.validate();
    });
    wrap("pitch", [&] { pitch.validate(); });
    wrap("backend.ball_crop", [&] { ball_crop.validate(); });

    switch (backend) {
    case BackendKind::inference:
        throw ConfigError("backend: no inference adapter is built into this binary; use 'file' or 'synthetic'");
    case BackendKind::file:
        if (annotations.empty())
            throw ConfigError("backend 'file' needs backend.annotations");
        if (!fs::exists(annotations))
            throw ConfigError("backend 'file': annotations file not found: " + annotations);
        if (source_uri.empty())
            throw ConfigError("backend 'file' needs source.uri (frames to segment)");
        break;
    case BackendKind::synthetic:
        if (scenario.empty())
            throw ConfigError("backend 'synthetic' needs backend.scenario");
        if (!fs::exists(resolve_scenario(scenario)))
            throw ConfigError("backend 'synthetic': scenario not found: " + scenario);
        break;
    }
    if (!source_uri.empty() && source_uri.rfind("raw:", 0) == 0) {
        if (!raw)
            throw ConfigError("raw source needs source.width and source.height");
        const auto path = source_uri.substr(4);
        if (path != "-" && !fs::exists(path))
            throw ConfigError("source not found: " + path);
    } else if (!source_uri.empty() && !fs::is_directory(source_uri)) {
        throw ConfigError("source directory not found: " + source_uri);
    }
}

fs::path scenario_dir()
{
    if (const char* env = std::getenv("CRICSEG_SCENARIO_DIR"); env && *env)
        return env;
    return CRICSEG_DEFAULT_SCENARIO_DIR;
}

fs::path resolve_scenario(const std::string& name_or_path)
{
    fs::path p(name_or_path);
    if (p.has_extension() || p.has_parent_path())
        return p;
    return scenario_dir() / (name_or_path + ".json");
}

}  // namespace cricseg
