#include "cricseg/fpv_gate.hpp"

#include <stdexcept>
#include <string>

namespace cricseg {

namespace {

bool any_label_at_least(const FrameAnnotations& a, ObjectLabel label, double min_conf)
{
    for (const auto& d : a.detections) {
        if (d.label == label && d.confidence >= min_conf)
            return true;
    }
    return false;
}

GateEvidence collect(const ClassScore& score, const FrameAnnotations& a, const GateConfig& cfg)
{
    return {score.front_prob >= cfg.classifier_threshold, any_label_at_least(a, ObjectLabel::umpire, cfg.umpire_conf_min),
            any_label_at_least(a, ObjectLabel::pitch, cfg.pitch_conf_min)};
}

}  // namespace

std::string_view to_string(GateStrategy s)
{
    switch (s) {
    case GateStrategy::classifier: return "classifier";
    case GateStrategy::umpire: return "umpire";
    case GateStrategy::pitch: return "pitch";
    case GateStrategy::either: return "either";
    case GateStrategy::dual: return "dual";
    }
    return "?";
}

std::string_view to_string(DualMode m) { return m == DualMode::union_mode ? "union" : "intersection"; }

GateStrategy parse_strategy(std::string_view text)
{
    for (auto s : {GateStrategy::classifier, GateStrategy::umpire, GateStrategy::pitch, GateStrategy::either,
                   GateStrategy::dual}) {
        if (to_string(s) == text)
            return s;
    }
    throw std::invalid_argument("unknown gate strategy '" + std::string(text) + "'");
}

DualMode parse_dual_mode(std::string_view text)
{
    if (text == "union")
        return DualMode::union_mode;
    if (text == "intersection")
        return DualMode::intersection_mode;
    throw std::invalid_argument("unknown dual mode '" + std::string(text) + "'");
}

void GateConfig::validate() const
{
    for (double t : {classifier_threshold, umpire_conf_min, pitch_conf_min}) {
        if (!(t >= 0.0 && t <= 1.0))
            throw std::invalid_argument("gate thresholds must lie in [0,1]");
    }
}

GateVerdict gate_classifier(const ClassScore& score, const GateConfig& cfg)
{
    GateVerdict v{GateStrategy::classifier, false, {}};
    v.evidence.classifier = score.front_prob >= cfg.classifier_threshold;
    v.is_front = v.evidence.classifier;
    return v;
}

GateVerdict gate_umpire(const FrameAnnotations& a, const GateConfig& cfg)
{
    GateVerdict v{GateStrategy::umpire, false, {}};
    v.evidence.umpire = any_label_at_least(a, ObjectLabel::umpire, cfg.umpire_conf_min);
    v.is_front = v.evidence.umpire;
    return v;
}

GateVerdict gate_pitch(const FrameAnnotations& a, const GateConfig& cfg)
{
    GateVerdict v{GateStrategy::pitch, false, {}};
    v.evidence.pitch = any_label_at_least(a, ObjectLabel::pitch, cfg.pitch_conf_min);
    v.is_front = v.evidence.pitch;
    return v;
}

GateVerdict gate_either(const FrameAnnotations& a, const GateConfig& cfg)
{
    GateVerdict v{GateStrategy::either, false, {}};
    v.evidence.umpire = any_label_at_least(a, ObjectLabel::umpire, cfg.umpire_conf_min);
    v.evidence.pitch = any_label_at_least(a, ObjectLabel::pitch, cfg.pitch_conf_min);
    v.is_front = v.evidence.umpire || v.evidence.pitch;
    return v;
}

GateVerdict gate_dual(const ClassScore& score, const FrameAnnotations& a, const GateConfig& cfg)
{
    GateVerdict v{GateStrategy::dual, false, collect(score, a, cfg)};
    const bool detector = v.evidence.umpire || v.evidence.pitch;
    v.is_front = cfg.dual_mode == DualMode::union_mode ? (v.evidence.classifier || detector)
                                                       : (v.evidence.classifier && detector);
    return v;
}

GateVerdict evaluate_gate(GateStrategy strategy, const FrameAnnotations& a, const GateConfig& cfg)
{
    switch (strategy) {
    case GateStrategy::classifier: return gate_classifier(a.score, cfg);
    case GateStrategy::umpire: return gate_umpire(a, cfg);
    case GateStrategy::pitch: return gate_pitch(a, cfg);
    case GateStrategy::either: return gate_either(a, cfg);
    case GateStrategy::dual: return gate_dual(a.score, a, cfg);
    }
    throw std::logic_error("unhandled gate strategy");
}

Debouncer::Debouncer(int k) : k_(k)
{
    if (k < 1)
        throw std::invalid_argument("debounce k must be >= 1");
}

void Debouncer::reset()
{
    open_ = false;
    run_length_ = 0;
    run_start_ = 0;
}

std::optional<GateEvent> Debouncer::push(std::int64_t frame_index, bool is_front)
{
    // A run counts verdicts that disagree with the current debounced state.
    if (is_front == open_) {
        run_length_ = 0;
        return std::nullopt;
    }
    if (run_length_ == 0)
        run_start_ = frame_index;
    ++run_length_;
    if (run_length_ < k_)
        return std::nullopt;
    open_ = is_front;
    run_length_ = 0;
    return GateEvent{open_ ? GateEventKind::open : GateEventKind::close, run_start_, frame_index};
}

}  // namespace cricseg
