#pragma once

#include "cricseg/detection.hpp"
#include "cricseg/fpv_gate.hpp"
#include "cricseg/frame.hpp"
#include "cricseg/replay_filter.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cricseg {

struct BoundaryConfig {
    // A frame is a shot boundary when strictly more than this fraction of
    // its pixels is foreground.
    double foreground_threshold = 0.6;
    int init_frames = 30;
    // Absolute luma deviation from the background that marks a pixel as
    // foreground (strictly greater).
    double pixel_threshold = 25.0;
    double learning_rate = 0.05;

    void validate() const;
};

class ForegroundMask {
public:
    ForegroundMask() = default;
    ForegroundMask(int width, int height) : width_(width), height_(height), bits_(std::size_t(width) * height, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return bits_.size(); }
    bool at(int x, int y) const { return bits_[std::size_t(y) * width_ + x] != 0; }
    std::vector<std::uint8_t>& bits() { return bits_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

// Per-pixel running average of the luma plane. The first init_frames
// observations build a plain mean; afterwards the model is warm and follows
// an exponential running average.
class BackgroundModel {
public:
    BackgroundModel(int width, int height, BoundaryConfig cfg);

    // Compares the frame against the model, then folds it in. The mask is
    // all-false while the model is cold. Throws std::invalid_argument on a
    // dimension mismatch.
    const ForegroundMask& update(const Frame& frame);

    bool warm() const { return observations_ >= cfg_.init_frames; }
    // Whether the mask returned by the last update was computed warm.
    bool last_update_warm() const { return last_warm_; }
    int observations() const { return observations_; }
    void reset();

private:
    int width_;
    int height_;
    BoundaryConfig cfg_;
    std::vector<float> mean_;
    ForegroundMask mask_;
    int observations_ = 0;
    bool last_warm_ = false;
};

double foreground_fraction(const ForegroundMask& mask);
bool detect_boundary(double fraction, bool model_warm, const BoundaryConfig& cfg);

struct SegmenterConfig {
    GateStrategy strategy = GateStrategy::dual;
    GateConfig gate;
    int debounce_k = 3;
    BoundaryConfig boundary;
    ReplayConfig replay;
    int min_clip_frames = 25;

    void validate() const;
};

// Frame counts over a clip for each gate signal.
struct EvidenceSummary {
    std::int64_t frames = 0;
    std::int64_t classifier = 0;
    std::int64_t umpire = 0;
    std::int64_t pitch = 0;

    friend bool operator==(const EvidenceSummary&, const EvidenceSummary&) = default;
};

enum class CloseReason { boundary, gate_close, end_of_stream };
std::string_view to_string(CloseReason r);
CloseReason parse_close_reason(std::string_view text);

struct Clip {
    int id = 0;
    std::int64_t start_frame = 0;
    std::int64_t end_frame = 0;  // inclusive
    double duration_ms = 0.0;
    Liveness liveness = Liveness::undetermined;
    EvidenceSummary evidence;
    CloseReason closed_by = CloseReason::boundary;

    std::int64_t length() const { return end_frame - start_frame + 1; }
    friend bool operator==(const Clip&, const Clip&) = default;
};

double clip_duration_ms(std::int64_t start, std::int64_t end, double fps);

nlohmann::json to_json(const Clip& clip);
Clip clip_from_json(const nlohmann::json& j);

struct FrameError {
    std::int64_t frame_index = 0;
    std::string message;
};

// Strictly sequential state machine: gate verdicts (debounced) open clips,
// background-subtraction boundaries and gate-close events end them, and
// every finished clip gets a liveness verdict from the scorecard band.
class ShotSegmenter {
public:
    ShotSegmenter(SegmenterConfig cfg, double fps);

    // Frames must arrive in index order. Returns clips finished by this frame.
    std::vector<Clip> push(std::shared_ptr<const Frame> frame, const FrameAnnotations& annotations);
    // The backend failed on this frame: the open clip, if any, is abandoned.
    std::vector<Clip> push_failed(std::shared_ptr<const Frame> frame, const AnnotationError& error);
    // Closes a clip still open at end of stream.
    std::vector<Clip> finish();

    void reset();

    const std::vector<std::int64_t>& boundaries() const { return boundaries_; }
    const std::vector<FrameError>& errors() const { return errors_; }
    std::int64_t frames_seen() const { return frames_seen_; }
    const SegmenterConfig& config() const { return cfg_; }

private:
    struct History {
        std::shared_ptr<const Frame> frame;
        GateEvidence evidence;
        bool is_front = false;
    };
    struct OpenClip {
        std::int64_t start = 0;
        std::shared_ptr<const Frame> first;
        std::vector<GateEvidence> evidence;
        std::vector<std::shared_ptr<const Frame>> bands;  // strict mode only
    };

    std::vector<Clip> step(std::shared_ptr<const Frame> frame, const GateVerdict& verdict, bool failed);
    void open_clip(std::int64_t start, std::int64_t now);
    void append(const History& h);
    std::optional<Clip> close_clip(std::int64_t end, CloseReason reason);
    const History* history_at(std::int64_t index) const;

    SegmenterConfig cfg_;
    double fps_;
    std::optional<BackgroundModel> model_;
    Debouncer debouncer_;
    std::deque<History> history_;
    std::optional<OpenClip> open_;
    std::optional<std::int64_t> last_boundary_;
    std::optional<std::int64_t> last_index_;
    std::vector<std::int64_t> boundaries_;
    std::vector<FrameError> errors_;
    std::int64_t frames_seen_ = 0;
    int next_id_ = 1;
};

}  // namespace cricseg
