#include "cricseg/shot_segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cricseg {

void BoundaryConfig::validate() const
{
    if (!(foreground_threshold > 0.0 && foreground_threshold <= 1.0))
        throw std::invalid_argument("foreground threshold must lie in (0,1]");
    if (init_frames < 1)
        throw std::invalid_argument("init_frames must be >= 1");
    if (!(pixel_threshold >= 0.0))
        throw std::invalid_argument("pixel threshold must be >= 0");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0))
        throw std::invalid_argument("learning rate must lie in (0,1]");
}

BackgroundModel::BackgroundModel(int width, int height, BoundaryConfig cfg)
    : width_(width), height_(height), cfg_(cfg), mean_(std::size_t(width) * height, 0.0f), mask_(width, height)
{
    cfg_.validate();
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("background model needs positive dimensions");
}

void BackgroundModel::reset()
{
    observations_ = 0;
    last_warm_ = false;
    std::fill(mean_.begin(), mean_.end(), 0.0f);
    std::fill(mask_.bits().begin(), mask_.bits().end(), 0);
}

const ForegroundMask& BackgroundModel::update(const Frame& frame)
{
    if (frame.width() != width_ || frame.height() != height_)
        throw std::invalid_argument("frame is " + std::to_string(frame.width()) + "x" +
                                    std::to_string(frame.height()) + ", background model is " +
                                    std::to_string(width_) + "x" + std::to_string(height_));
    const auto px = frame.luma();
    const std::size_t n = mean_.size();
    float* mean = mean_.data();
    std::uint8_t* bits = mask_.bits().data();

    last_warm_ = warm();
    if (!last_warm_) {
        const float w = 1.0f / static_cast<float>(observations_ + 1);
        for (std::size_t i = 0; i < n; ++i)
            mean[i] += (static_cast<float>(px[i]) - mean[i]) * w;
        std::fill(mask_.bits().begin(), mask_.bits().end(), 0);
    } else {
        const float thr = static_cast<float>(cfg_.pixel_threshold);
        const float rate = static_cast<float>(cfg_.learning_rate);
        for (std::size_t i = 0; i < n; ++i) {
            const float d = static_cast<float>(px[i]) - mean[i];
            bits[i] = std::fabs(d) > thr ? 1 : 0;
            mean[i] += rate * d;
        }
    }
    if (observations_ < cfg_.init_frames)
        ++observations_;
    return mask_;
}

double foreground_fraction(const ForegroundMask& mask)
{
    if (mask.size() == 0)
        return 0.0;
    std::size_t on = 0;
    for (auto b : mask.bits())
        on += b != 0;
    return static_cast<double>(on) / static_cast<double>(mask.size());
}

bool detect_boundary(double fraction, bool model_warm, const BoundaryConfig& cfg)
{
    return model_warm && fraction > cfg.foreground_threshold;
}

void SegmenterConfig::validate() const
{
    gate.validate();
    boundary.validate();
    replay.validate();
    if (debounce_k < 1)
        throw std::invalid_argument("debounce_k must be >= 1");
    if (min_clip_frames < 1)
        throw std::invalid_argument("min_clip_frames must be >= 1");
}

std::string_view to_string(CloseReason r)
{
    switch (r) {
    case CloseReason::boundary: return "boundary";
    case CloseReason::gate_close: return "gate_close";
    case CloseReason::end_of_stream: return "end_of_stream";
    }
    return "?";
}

CloseReason parse_close_reason(std::string_view text)
{
    for (auto r : {CloseReason::boundary, CloseReason::gate_close, CloseReason::end_of_stream}) {
        if (to_string(r) == text)
            return r;
    }
    throw std::invalid_argument("unknown close reason '" + std::string(text) + "'");
}

double clip_duration_ms(std::int64_t start, std::int64_t end, double fps)
{
    return static_cast<double>(end - start + 1) * 1000.0 / fps;
}

nlohmann::json to_json(const Clip& c)
{
    return {{"id", c.id},
            {"start", c.start_frame},
            {"end", c.end_frame},
            {"duration_ms", c.duration_ms},
            {"liveness", std::string(to_string(c.liveness))},
            {"closed_by", std::string(to_string(c.closed_by))},
            {"evidence",
             {{"frames", c.evidence.frames},
              {"classifier", c.evidence.classifier},
              {"umpire", c.evidence.umpire},
              {"pitch", c.evidence.pitch}}}};
}

Clip clip_from_json(const nlohmann::json& j)
{
    Clip c;
    c.id = j.at("id").get<int>();
    c.start_frame = j.at("start").get<std::int64_t>();
    c.end_frame = j.at("end").get<std::int64_t>();
    if (c.start_frame < 0 || c.end_frame < c.start_frame)
        throw std::invalid_argument("clip " + std::to_string(c.id) + " has an invalid frame range");
    c.duration_ms = j.at("duration_ms").get<double>();
    c.liveness = parse_liveness(j.at("liveness").get<std::string>());
    c.closed_by = parse_close_reason(j.value("closed_by", std::string("boundary")));
    const auto& e = j.at("evidence");
    c.evidence = {e.at("frames").get<std::int64_t>(), e.at("classifier").get<std::int64_t>(),
                  e.at("umpire").get<std::int64_t>(), e.at("pitch").get<std::int64_t>()};
    return c;
}

ShotSegmenter::ShotSegmenter(SegmenterConfig cfg, double fps) : cfg_(cfg), fps_(fps), debouncer_(cfg.debounce_k)
{
    cfg_.validate();
    if (!(fps > 0.0))
        throw std::invalid_argument("segmenter fps must be positive");
}

void ShotSegmenter::reset()
{
    model_.reset();
    debouncer_.reset();
    history_.clear();
    open_.reset();
    last_boundary_.reset();
    last_index_.reset();
    boundaries_.clear();
    errors_.clear();
    frames_seen_ = 0;
    next_id_ = 1;
}

const ShotSegmenter::History* ShotSegmenter::history_at(std::int64_t index) const
{
    for (const auto& h : history_) {
        if (h.frame->index() == index)
            return &h;
    }
    return nullptr;
}

void ShotSegmenter::append(const History& h)
{
    open_->evidence.push_back(h.evidence);
    if (cfg_.replay.strict)
        open_->bands.push_back(std::make_shared<const Frame>(bottom_band(*h.frame, cfg_.replay.band)));
}

void ShotSegmenter::open_clip(std::int64_t start, std::int64_t now)
{
    open_.emplace();
    open_->start = start;
    for (std::int64_t i = start; i <= now; ++i) {
        const History* h = history_at(i);
        if (!h)
            throw std::logic_error("segmenter history does not reach frame " + std::to_string(i));
        if (i == start)
            open_->first = h->frame;
        append(*h);
    }
}

std::optional<Clip> ShotSegmenter::close_clip(std::int64_t end, CloseReason reason)
{
    OpenClip oc = std::move(*open_);
    open_.reset();
    if (end < oc.start)
        return std::nullopt;
    const auto length = end - oc.start + 1;
    if (length < cfg_.min_clip_frames)
        return std::nullopt;

    const History* last = history_at(end);
    if (!last)
        throw std::logic_error("segmenter history does not reach frame " + std::to_string(end));

    Clip clip;
    clip.start_frame = oc.start;
    clip.end_frame = end;
    clip.duration_ms = clip_duration_ms(oc.start, end, fps_);
    clip.closed_by = reason;
    clip.evidence.frames = length;
    for (std::int64_t i = 0; i < length; ++i) {
        const auto& e = oc.evidence[static_cast<std::size_t>(i)];
        clip.evidence.classifier += e.classifier;
        clip.evidence.umpire += e.umpire;
        clip.evidence.pitch += e.pitch;
    }

    ClipFrames frames{oc.first.get(), nullptr, last->frame.get(), length};
    if (cfg_.replay.strict) {
        // Band copies already hold only the scorecard rows, so compare them
        // with a full-height band.
        ReplayConfig band_cfg = cfg_.replay;
        band_cfg.band.band_fraction = 1.0;
        const auto& bands = oc.bands;
        ClipFrames bf{bands.front().get(), bands[static_cast<std::size_t>((length - 1) / 2)].get(),
                      bands[static_cast<std::size_t>(length - 1)].get(), length};
        clip.liveness = classify_liveness(bf, band_cfg);
    } else {
        clip.liveness = classify_liveness(frames, cfg_.replay);
    }
    clip.id = next_id_++;
    return clip;
}

std::vector<Clip> ShotSegmenter::push(std::shared_ptr<const Frame> frame, const FrameAnnotations& annotations)
{
    return step(std::move(frame), evaluate_gate(cfg_.strategy, annotations, cfg_.gate), false);
}

std::vector<Clip> ShotSegmenter::push_failed(std::shared_ptr<const Frame> frame, const AnnotationError& error)
{
    errors_.push_back({frame->index(), error.what()});
    return step(std::move(frame), GateVerdict{cfg_.strategy, false, {}}, true);
}

std::vector<Clip> ShotSegmenter::step(std::shared_ptr<const Frame> frame, const GateVerdict& verdict, bool failed)
{
    const auto n = frame->index();
    if (last_index_ && n != *last_index_ + 1)
        throw std::invalid_argument("segmenter expected frame " + std::to_string(*last_index_ + 1) + ", got " +
                                    std::to_string(n));
    last_index_ = n;
    ++frames_seen_;

    if (!model_)
        model_.emplace(frame->width(), frame->height(), cfg_.boundary);
    const auto& mask = model_->update(*frame);
    const bool boundary =
        detect_boundary(model_->last_update_warm() ? foreground_fraction(mask) : 0.0, model_->last_update_warm(),
                        cfg_.boundary);

    history_.push_back({frame, verdict.evidence, verdict.is_front});
    while (history_.size() > static_cast<std::size_t>(cfg_.debounce_k) + 1)
        history_.pop_front();

    std::vector<Clip> out;
    if (boundary) {
        boundaries_.push_back(n);
        last_boundary_ = n;
        if (open_) {
            if (auto c = close_clip(n - 1, CloseReason::boundary))
                out.push_back(*c);
        }
        model_->reset();
        model_->update(*frame);
        if (debouncer_.is_open() && !failed)
            open_clip(n, n);
    } else if (open_) {
        append(history_.back());
    }

    if (failed) {
        open_.reset();
        debouncer_.reset();
        return out;
    }

    if (auto ev = debouncer_.push(n, verdict.is_front)) {
        if (ev->kind == GateEventKind::open) {
            if (!open_) {
                auto start = ev->run_start;
                if (last_boundary_)
                    start = std::max(start, *last_boundary_);
                open_clip(start, n);
            }
        } else if (open_) {
            if (auto c = close_clip(ev->run_start - 1, CloseReason::gate_close))
                out.push_back(*c);
        }
    }
    return out;
}

std::vector<Clip> ShotSegmenter::finish()
{
    std::vector<Clip> out;
    if (open_ && last_index_) {
        if (auto c = close_clip(*last_index_, CloseReason::end_of_stream))
            out.push_back(*c);
    }
    return out;
}

}  // namespace cricseg
