#pragma once

#include "cricseg/detection.hpp"
#include "cricseg/frame_source.hpp"
#include "cricseg/pitch_geometry.hpp"
#include "cricseg/replay_filter.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cricseg {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SegmentKind { front, other, replay };

std::string_view to_string(SegmentKind k);

// One bowled ball inside a front-view (or replay) segment. Pixel values are
// in full-frame coordinates of the release frame unless noted.
struct DeliveryScript {
    std::int64_t release_frame = 0;
    std::int64_t bounce_frame = 0;
    std::int64_t ball_until = 0;  // last frame with a ball detection
    double distance_m = 7.0;      // bounce distance from the batsman's stumps
    double zoom = 1.0;            // batsman height ratio bounce/release
    double batsman_height = 60.0;
    double batsman_bottom = 280.0;
    double bounce_batsman_bottom = 280.0;  // bounce frame
    double pitch_px = 160.0;
    double column = 320.0;
    bool decoys = false;
    double row_noise_px = 0.0;
};

struct ScenarioSegment {
    std::int64_t start = 0;
    std::int64_t end = 0;  // inclusive
    SegmentKind kind = SegmentKind::other;
    bool scorecard = true;
    int scene = 0;
    int pan_px = 0;  // horizontal scene scroll per frame
    double front_prob = 0.0;
    std::vector<ObjectLabel> objects;
    std::vector<std::int64_t> dropouts;  // frames where the detector sees nothing
    std::optional<DeliveryScript> delivery;

    std::int64_t length() const { return end - start + 1; }
};

// Scripted broadcast timeline. Segments tile [0, frame_count) in order; a
// hard cut separates consecutive segments.
struct Scenario {
    std::string name;
    std::string description;
    int width = 640;
    int height = 360;
    double fps = 50.0;
    std::uint64_t seed = 1;
    double tilt_deg = 20.0;
    double scorecard_fraction = 0.15;
    std::vector<ScenarioSegment> segments;

    std::int64_t frame_count() const { return segments.empty() ? 0 : segments.back().end + 1; }
    const ScenarioSegment& segment_at(std::int64_t frame) const;

    // Ground truth.
    bool is_front(std::int64_t frame) const;
    std::vector<std::int64_t> cuts() const;
    Liveness liveness_of(const ScenarioSegment& s) const;

    void validate() const;
};

// Fills defaults (front_prob, objects, scorecard, pan, scene) by kind for
// fields the JSON leaves out, then validates.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const Scenario& s);

// Long broadcast: front-view shots of shot_frames spread evenly through
// `frames`, covering about front_fraction of the total, with other-camera
// footage in between.
struct MatchSpec {
    std::int64_t frames = 15000;
    int width = 640;
    int height = 360;
    double fps = 50.0;
    double front_fraction = 0.05;
    std::int64_t shot_frames = 60;
    bool deliveries = true;
    std::uint64_t seed = 1;
};

Scenario make_match_scenario(const MatchSpec& spec);

// Geometry of a scripted delivery at one frame.
struct DeliveryPose {
    Box batsman;
    Box bowler;
    std::optional<Point> ball;
};

DeliveryPose delivery_pose(const Scenario& scenario, const DeliveryScript& d, std::int64_t frame);
// Bounce-frame crease rows for a scripted delivery.
RowCalibration delivery_calibration(const Scenario& scenario, const DeliveryScript& d);

// Annotations consistent with the script; a pure function of frame index.
class SyntheticBackend : public IndexedBackend {
public:
    explicit SyntheticBackend(Scenario scenario);

    FrameAnnotations at(std::int64_t frame_index) const override;
    const Scenario& scenario() const { return scenario_; }

private:
    Scenario scenario_;
};

// Renders luma frames for a scenario: a textured scene per segment (hard
// cuts between segments), an optional static scorecard band, and sprites
// for the players and ball.
class ScenarioRenderer {
public:
    explicit ScenarioRenderer(std::shared_ptr<const Scenario> scenario);
    explicit ScenarioRenderer(const Scenario& scenario);

    Frame render(std::int64_t index) const;

private:
    std::shared_ptr<const Scenario> scenario_;
    std::vector<int> texture_;
    std::vector<int> wave_y_;
    std::vector<std::uint8_t> scorecard_;
    int band_row_;
};

class ScenarioStream : public FrameStream {
public:
    explicit ScenarioStream(std::shared_ptr<const Scenario> scenario);
    explicit ScenarioStream(const Scenario& scenario);

    std::optional<Frame> next() override;
    double fps() const override { return scenario_->fps; }

private:
    std::shared_ptr<const Scenario> scenario_;
    ScenarioRenderer renderer_;
    std::int64_t cursor_ = 0;
};

}  // namespace cricseg
