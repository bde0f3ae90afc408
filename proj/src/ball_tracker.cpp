#include "cricseg/ball_tracker.hpp"

#include <cmath>
#include <stdexcept>

namespace cricseg {

double distance(const Point& a, const Point& b) { return std::hypot(a.col - b.col, a.row - b.row); }

CandidateFrame ball_candidates(const FrameAnnotations& annotations)
{
    CandidateFrame out{annotations.frame_index, {}};
    for (const auto& d : annotations.detections) {
        if (d.label == ObjectLabel::ball)
            out.candidates.push_back({annotations.frame_index, {d.box.center_x(), d.box.center_y()}, d.confidence});
    }
    return out;
}

void TrackerConfig::validate() const
{
    if (!(max_jump_px > 0.0))
        throw std::invalid_argument("max_jump_px must be positive");
    if (max_gap_frames < 1)
        throw std::invalid_argument("max_gap_frames must be positive");
    if (min_track_points < 1)
        throw std::invalid_argument("min_track_points must be positive");
}

TrackerConfig TrackerConfig::for_frame_width(int width)
{
    TrackerConfig cfg;
    cfg.max_jump_px = 120.0 * width / 1280.0;
    return cfg;
}

std::optional<std::size_t> associate(const Point& prev, std::span<const BallCandidate> candidates,
                                     const TrackerConfig& cfg)
{
    std::optional<std::size_t> best;
    double best_d = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double d = distance(prev, candidates[i].center);
        if (d <= cfg.max_jump_px && (!best || d < best_d)) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

namespace {

std::size_t most_confident(std::span<const BallCandidate> candidates)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i].confidence > candidates[best].confidence)
            best = i;
    }
    return best;
}

// Greedy track from frames[seed_frame].candidates[seed].
Trajectory follow(std::span<const CandidateFrame> frames, std::size_t seed_frame, std::size_t seed,
                  const TrackerConfig& cfg)
{
    Trajectory t;
    const auto& first = frames[seed_frame];
    t.points.push_back({first.frame_index, first.candidates[seed].center});

    std::int64_t last_frame = first.frame_index;
    for (std::size_t i = seed_frame + 1; i < frames.size(); ++i) {
        const auto& f = frames[i];
        // Frames absent from the input count as misses too.
        if (f.frame_index - last_frame - 1 > cfg.max_gap_frames)
            break;
        auto pick = associate(t.points.back().center, f.candidates, cfg);
        if (pick) {
            t.points.push_back({f.frame_index, f.candidates[*pick].center});
            last_frame = f.frame_index;
        } else if (f.frame_index - last_frame > cfg.max_gap_frames) {
            break;
        }
    }
    return t;
}

}  // namespace

Trajectory build_trajectory(std::span<const CandidateFrame> frames, const TrackerConfig& cfg)
{
    cfg.validate();
    for (std::size_t i = 1; i < frames.size(); ++i) {
        if (frames[i].frame_index <= frames[i - 1].frame_index)
            throw std::invalid_argument("candidate frames must be strictly increasing");
    }

    Trajectory longest;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].candidates.empty())
            continue;
        Trajectory t = follow(frames, i, most_confident(frames[i].candidates), cfg);
        if (t.points.size() >= static_cast<std::size_t>(cfg.min_track_points)) {
            t.bounce_index = find_bounce(t);
            return t;
        }
        if (t.points.size() > longest.points.size())
            longest = std::move(t);
    }
    longest.bounce_index = find_bounce(longest);
    return longest;
}

std::optional<std::size_t> find_bounce(const Trajectory& trajectory)
{
    const auto& p = trajectory.points;
    if (p.size() < 3)
        return std::nullopt;
    bool descends = false;
    bool rises = false;
    std::size_t lowest = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        descends |= p[i].center.row > p[i - 1].center.row;
        rises |= p[i].center.row < p[i - 1].center.row;
        if (p[i].center.row > p[lowest].center.row)
            lowest = i;
    }
    if (!descends || !rises)
        return std::nullopt;
    return lowest;
}

std::pair<std::vector<TrackPoint>, std::vector<TrackPoint>> split_phases(const Trajectory& trajectory)
{
    const auto& p = trajectory.points;
    if (!trajectory.bounce_index)
        return {p, {}};
    const auto cut = static_cast<std::ptrdiff_t>(*trajectory.bounce_index) + 1;
    return {{p.begin(), p.begin() + cut}, {p.begin() + cut, p.end()}};
}

nlohmann::json to_json(const Trajectory& t)
{
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : t.points)
        pts.push_back({p.frame_index, p.center.col, p.center.row});
    nlohmann::json out{{"points", pts}};
    out["bounce"] = t.bounce_index ? nlohmann::json(*t.bounce_index) : nlohmann::json(nullptr);
    return out;
}

Trajectory trajectory_from_json(const nlohmann::json& j)
{
    Trajectory t;
    for (const auto& p : j.at("points")) {
        if (!p.is_array() || p.size() != 3)
            throw std::invalid_argument("trajectory point must be [frame, col, row]");
        t.points.push_back({p[0].get<std::int64_t>(), {p[1].get<double>(), p[2].get<double>()}});
    }
    const auto& b = j.at("bounce");
    if (!b.is_null()) {
        const auto idx = b.get<std::size_t>();
        if (idx >= t.points.size())
            throw std::invalid_argument("bounce index outside trajectory");
        t.bounce_index = idx;
    }
    return t;
}

}  // namespace cricseg
