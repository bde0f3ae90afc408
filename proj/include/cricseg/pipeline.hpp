#pragma once

#include "cricseg/ball_tracker.hpp"
#include "cricseg/detection.hpp"
#include "cricseg/frame_source.hpp"
#include "cricseg/pitch_geometry.hpp"
#include "cricseg/shot_segmenter.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cricseg {

struct PipelineOptions {
    // Annotation workers. With 1 everything runs on the calling thread.
    int threads = 1;
    // Frames allowed in flight ahead of the segmenter.
    std::size_t max_in_flight = 32;
};

struct SegmentResult {
    std::vector<Clip> clips;
    std::vector<std::int64_t> boundaries;
    std::vector<FrameError> errors;
    std::int64_t frames = 0;
    double fps = 0.0;
};

// frame source -> backend -> gate -> segmenter -> replay filter. With
// several threads, frames are annotated concurrently and re-ordered by
// index before the segmenter sees them.
SegmentResult segment(FrameStream& frames, const Backend& backend, const SegmenterConfig& cfg,
                      const PipelineOptions& options = {}, const std::function<void(const Clip&)>& on_clip = {});

struct ClipTrajectory {
    int clip_id = 0;
    Trajectory trajectory;
};

ClipTrajectory track_clip(const Clip& clip, const IndexedBackend& backend, const TrackerConfig& cfg);

enum class DeliveryStatus { ok, no_trajectory, no_bounce, error };
std::string_view to_string(DeliveryStatus s);

struct DeliveryRecord {
    int clip_id = 0;
    DeliveryStatus status = DeliveryStatus::ok;
    std::optional<DeliveryResult> result;
    std::string error;
};

DeliveryRecord classify_trajectory(const ClipTrajectory& t, const IndexedBackend& backend, const PitchSpec& pitch);

nlohmann::json to_json(const ClipTrajectory& t);
ClipTrajectory clip_trajectory_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DeliveryRecord& r);
DeliveryRecord delivery_record_from_json(const nlohmann::json& j);

struct DeliveryCounts {
    int full = 0;
    int good = 0;
    int short_pitched = 0;
    int unclassified = 0;
};
DeliveryCounts count_deliveries(const std::vector<DeliveryRecord>& records);

// JSON Lines helpers; each record is written with dump() on its own line.
void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& records);
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

std::vector<Clip> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<Clip>& clips);

// Copies each clip's frames into <dir>/clip_NNNN/frame_NNNNNN.pgm, pulling
// frames from a fresh stream.
void export_clip_frames(FrameStream& frames, const std::vector<Clip>& clips, const std::filesystem::path& dir);

}  // namespace cricseg
