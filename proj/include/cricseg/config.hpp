#pragma once

#include "cricseg/ball_tracker.hpp"
#include "cricseg/detection.hpp"
#include "cricseg/frame_source.hpp"
#include "cricseg/pitch_geometry.hpp"
#include "cricseg/shot_segmenter.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace cricseg {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// `key = value` lines; '#' starts a comment. Later assignments win.
class KeyValues {
public:
    static KeyValues parse(std::istream& in, const std::string& origin = "<config>");
    static KeyValues load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    // Parses "key=value" (as given to --set).
    void set_assignment(const std::string& assignment);
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

enum class BackendKind { synthetic, file, inference };

struct PipelineConfig {
    std::string source_uri;  // empty: render the synthetic scenario
    double fps = 50.0;
    std::optional<RawFormat> raw;

    BackendKind backend = BackendKind::synthetic;
    std::string annotations;
    std::string scenario;  // bundled name or path
    CropSpec ball_crop = CropSpec::ball_detection_default();

    SegmenterConfig segmenter;
    std::optional<double> max_jump_px;  // default scales with frame width
    TrackerConfig tracker;
    PitchSpec pitch;

    std::filesystem::path out_dir = "out";
    std::string export_frames;
    bool include_replays = false;
    int threads = 1;

    // Referenced files exist and every sub-config satisfies its invariants.
    void validate() const;
};

PipelineConfig config_from(const KeyValues& kv);

// Directory holding the bundled scenario scripts.
std::filesystem::path scenario_dir();
// A bundled scenario name or a path to a JSON script.
std::filesystem::path resolve_scenario(const std::string& name_or_path);

}  // namespace cricseg
