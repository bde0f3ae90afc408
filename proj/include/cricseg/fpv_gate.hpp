#pragma once

#include "cricseg/detection.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace cricseg {

// Front-pitch-view decision strategies. Each one is independent; `dual`
// combines the classifier with the umpire-or-pitch detector.
enum class GateStrategy { classifier, umpire, pitch, either, dual };
enum class DualMode { union_mode, intersection_mode };

std::string_view to_string(GateStrategy s);
std::string_view to_string(DualMode m);
GateStrategy parse_strategy(std::string_view text);
DualMode parse_dual_mode(std::string_view text);

struct GateConfig {
    double classifier_threshold = 0.5;
    double umpire_conf_min = 0.25;
    double pitch_conf_min = 0.25;
    DualMode dual_mode = DualMode::union_mode;

    void validate() const;
};

// Which signals fired on a frame, independent of the strategy in use.
struct GateEvidence {
    bool classifier = false;
    bool umpire = false;
    bool pitch = false;
};

struct GateVerdict {
    GateStrategy strategy = GateStrategy::classifier;
    bool is_front = false;
    GateEvidence evidence;
};

// All comparisons are inclusive (>=).
GateVerdict gate_classifier(const ClassScore& score, const GateConfig& cfg);
GateVerdict gate_umpire(const FrameAnnotations& annotations, const GateConfig& cfg);
GateVerdict gate_pitch(const FrameAnnotations& annotations, const GateConfig& cfg);
GateVerdict gate_either(const FrameAnnotations& annotations, const GateConfig& cfg);
GateVerdict gate_dual(const ClassScore& score, const FrameAnnotations& annotations, const GateConfig& cfg);

GateVerdict evaluate_gate(GateStrategy strategy, const FrameAnnotations& annotations, const GateConfig& cfg);

enum class GateEventKind { open, close };

struct GateEvent {
    GateEventKind kind = GateEventKind::open;
    // First frame of the sustained run that triggered the event.
    std::int64_t run_start = 0;
    // Frame on which the event became known (run_start + k - 1).
    std::int64_t emitted_at = 0;
};

// Turns per-frame verdicts into open/close events once a state has held for
// k consecutive frames. Starts closed. Feed frames strictly in order.
class Debouncer {
public:
    explicit Debouncer(int k);

    std::optional<GateEvent> push(std::int64_t frame_index, bool is_front);
    bool is_open() const { return open_; }
    int k() const { return k_; }
    void reset();

private:
    int k_;
    bool open_ = false;
    int run_length_ = 0;
    std::int64_t run_start_ = 0;
};

}  // namespace cricseg
