#pragma once

#include "cricseg/frame.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cricseg {

enum class ObjectLabel { pitch, umpire, batsman, bowler, ball };

std::string_view to_string(ObjectLabel label);
// Throws std::invalid_argument for anything outside the closed label set.
ObjectLabel parse_label(std::string_view text);

// Axis-aligned box in pixels; y grows downward.
struct Box {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    double bottom() const { return y + h; }
    double center_x() const { return x + w / 2.0; }
    double center_y() const { return y + h / 2.0; }

    friend bool operator==(const Box&, const Box&) = default;
};

struct Detection {
    ObjectLabel label = ObjectLabel::pitch;
    Box box;
    double confidence = 0.0;

    friend bool operator==(const Detection&, const Detection&) = default;
};

struct ClassScore {
    double front_prob = 0.0;

    friend bool operator==(const ClassScore&, const ClassScore&) = default;
};

struct FrameAnnotations {
    std::int64_t frame_index = 0;
    ClassScore score;
    std::vector<Detection> detections;

    // Highest-confidence detection with this label (earliest on ties).
    const Detection* best(ObjectLabel label) const;

    friend bool operator==(const FrameAnnotations&, const FrameAnnotations&) = default;
};

// Backend failure for a specific frame.
class AnnotationError : public std::runtime_error {
public:
    AnnotationError(std::int64_t frame_index, const std::string& what)
        : std::runtime_error("frame " + std::to_string(frame_index) + ": " + what), frame_index_(frame_index)
    {
    }
    std::int64_t frame_index() const { return frame_index_; }

private:
    std::int64_t frame_index_;
};

// Malformed annotation file; line is 1-based.
class AnnotationLoadError : public std::runtime_error {
public:
    AnnotationLoadError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Frame classifier + object detector behind one call. Implementations must
// tolerate concurrent calls for distinct frames.
class Backend {
public:
    virtual ~Backend() = default;
    virtual FrameAnnotations annotate(const Frame& frame) const = 0;
};

// Backend whose output depends only on the frame index, so it can also be
// queried without pixels (ball tracking and delivery classification reuse it).
class IndexedBackend : public Backend {
public:
    FrameAnnotations annotate(const Frame& frame) const override { return at(frame.index()); }
    virtual FrameAnnotations at(std::int64_t frame_index) const = 0;
};

void validate(const Detection& d, std::optional<std::pair<int, int>> frame_size = std::nullopt);

struct LoadOptions {
    // Used for records marked "coords": "cropped"; their ball boxes are
    // shifted back to full-frame space.
    CropSpec ball_crop = CropSpec::ball_detection_default();
    std::optional<int> frame_width;
    std::optional<int> frame_height;
};

// Serves stored per-frame annotations keyed by frame index.
class FileBackend : public IndexedBackend {
public:
    explicit FileBackend(std::map<std::int64_t, FrameAnnotations> records);

    FrameAnnotations at(std::int64_t frame_index) const override;
    std::size_t size() const { return records_.size(); }

private:
    std::map<std::int64_t, FrameAnnotations> records_;
};

FileBackend load_precomputed(const std::filesystem::path& path, const LoadOptions& options = {});
FileBackend parse_precomputed(std::istream& in, const LoadOptions& options = {});

nlohmann::json to_json(const FrameAnnotations& a);
// One JSON Lines record.
std::string to_jsonl(const FrameAnnotations& a);

}  // namespace cricseg
