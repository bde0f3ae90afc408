#pragma once

#include "cricseg/detection.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cricseg {

// Pixel position; row grows downward.
struct Point {
    double col = 0.0;
    double row = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

struct BallCandidate {
    std::int64_t frame_index = 0;
    Point center;
    double confidence = 0.0;
};

// All ball candidates reported for one frame.
struct CandidateFrame {
    std::int64_t frame_index = 0;
    std::vector<BallCandidate> candidates;
};

CandidateFrame ball_candidates(const FrameAnnotations& annotations);

struct TrackerConfig {
    double max_jump_px = 120.0;
    int max_gap_frames = 3;
    // Tracks shorter than this trigger a re-seed from a later frame.
    int min_track_points = 3;

    void validate() const;

    // Default jump radius is 120 px on a 1280-wide frame, scaled linearly.
    static TrackerConfig for_frame_width(int width);
};

struct TrackPoint {
    std::int64_t frame_index = 0;
    Point center;

    friend bool operator==(const TrackPoint&, const TrackPoint&) = default;
};

struct Trajectory {
    std::vector<TrackPoint> points;
    std::optional<std::size_t> bounce_index;

    bool empty() const { return points.empty(); }
    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Index of the candidate nearest to `prev`, if it lies within max_jump_px
// (inclusive). Ties go to the earlier candidate.
std::optional<std::size_t> associate(const Point& prev, std::span<const BallCandidate> candidates,
                                     const TrackerConfig& cfg);

// Greedy nearest-neighbour track. Seeds on the most confident candidate of
// the earliest frame that has any, then follows frame by frame; the track
// ends once more than max_gap_frames consecutive frames yield no match.
// Input must be ordered by frame index. The returned trajectory has its
// bounce already located.
Trajectory build_trajectory(std::span<const CandidateFrame> frames, const TrackerConfig& cfg);

// Position of the lowest on-screen point (largest row), earliest on ties.
// Absent for fewer than three points or when the rows never both fall and
// rise.
std::optional<std::size_t> find_bounce(const Trajectory& trajectory);

// Points up to and including the bounce, and the points after it. Without
// a bounce everything is descending.
std::pair<std::vector<TrackPoint>, std::vector<TrackPoint>> split_phases(const Trajectory& trajectory);

// {"points": [[frame, col, row], ...], "bounce": int|null}
nlohmann::json to_json(const Trajectory& t);
Trajectory trajectory_from_json(const nlohmann::json& j);

}  // namespace cricseg
