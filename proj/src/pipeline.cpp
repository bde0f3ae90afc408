#include "cricseg/pipeline.hpp"

#include <condition_variable>
#include <cstdio>
#include <deque>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;

namespace cricseg {

namespace {

struct Annotated {
    std::shared_ptr<const Frame> frame;
    std::optional<FrameAnnotations> annotations;
    std::optional<AnnotationError> error;
};

Annotated annotate_one(const Backend& backend, std::shared_ptr<const Frame> frame)
{
    Annotated out{std::move(frame), std::nullopt, std::nullopt};
    try {
        out.annotations = backend.annotate(*out.frame);
    } catch (const AnnotationError& e) {
        out.error = e;
    } catch (const std::exception& e) {
        out.error = AnnotationError(out.frame->index(), e.what());
    }
    return out;
}

void feed(ShotSegmenter& seg, Annotated&& a, SegmentResult& result, const std::function<void(const Clip&)>& on_clip)
{
    auto clips = a.error ? seg.push_failed(a.frame, *a.error) : seg.push(a.frame, *a.annotations);
    for (auto& c : clips) {
        if (on_clip)
            on_clip(c);
        result.clips.push_back(std::move(c));
    }
}

// Reader thread -> worker pool -> in-order hand-off to the caller. At most
// max_in_flight frames exist between reading and consumption.
class ParallelAnnotator {
public:
    ParallelAnnotator(FrameStream& frames, const Backend& backend, const PipelineOptions& opt)
        : frames_(frames), backend_(backend), max_in_flight_(std::max<std::size_t>(opt.max_in_flight, 1))
    {
        reader_ = std::thread([this] { read_loop(); });
        for (int i = 0; i < opt.threads; ++i)
            workers_.emplace_back([this] { work_loop(); });
    }

    ~ParallelAnnotator()
    {
        {
            std::lock_guard lock(mutex_);
            stop_ = true;
        }
        cv_.notify_all();
        reader_.join();
        for (auto& w : workers_)
            w.join();
    }

    // Next annotated frame in read order, or nullopt at end of stream.
    std::optional<Annotated> next()
    {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return done_.count(next_seq_) || (reader_finished_ && next_seq_ == read_count_); });
        auto it = done_.find(next_seq_);
        if (it == done_.end()) {
            if (source_error_)
                std::rethrow_exception(source_error_);
            return std::nullopt;
        }
        Annotated out = std::move(it->second);
        done_.erase(it);
        ++next_seq_;
        --in_flight_;
        lock.unlock();
        cv_.notify_all();
        return out;
    }

private:
    void read_loop()
    {
        while (true) {
            {
                std::unique_lock lock(mutex_);
                cv_.wait(lock, [&] { return stop_ || in_flight_ < max_in_flight_; });
                if (stop_)
                    break;
            }
            std::optional<Frame> f;
            try {
                f = frames_.next();
            } catch (...) {
                std::lock_guard lock(mutex_);
                source_error_ = std::current_exception();
                break;
            }
            if (!f)
                break;
            {
                std::lock_guard lock(mutex_);
                work_.push_back({read_count_++, std::make_shared<const Frame>(std::move(*f))});
                ++in_flight_;
            }
            cv_.notify_all();
        }
        {
            std::lock_guard lock(mutex_);
            reader_finished_ = true;
        }
        cv_.notify_all();
    }

    void work_loop()
    {
        while (true) {
            std::pair<std::uint64_t, std::shared_ptr<const Frame>> item;
            {
                std::unique_lock lock(mutex_);
                cv_.wait(lock, [&] { return stop_ || !work_.empty() || reader_finished_; });
                if (stop_ || (work_.empty() && reader_finished_))
                    return;
                item = std::move(work_.front());
                work_.pop_front();
            }
            Annotated a = annotate_one(backend_, std::move(item.second));
            {
                std::lock_guard lock(mutex_);
                done_.emplace(item.first, std::move(a));
            }
            cv_.notify_all();
        }
    }

    FrameStream& frames_;
    const Backend& backend_;
    std::size_t max_in_flight_;

    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<std::pair<std::uint64_t, std::shared_ptr<const Frame>>> work_;
    std::map<std::uint64_t, Annotated> done_;
    std::uint64_t read_count_ = 0;
    std::uint64_t next_seq_ = 0;
    std::size_t in_flight_ = 0;
    bool reader_finished_ = false;
    bool stop_ = false;
    std::exception_ptr source_error_;

    std::thread reader_;
    std::vector<std::thread> workers_;
};

std::string clip_dir_name(int id)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "clip_%04d", id);
    return buf;
}

std::string frame_file_name(std::int64_t index)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "frame_%06lld.pgm", static_cast<long long>(index));
    return buf;
}

}  // namespace

SegmentResult segment(FrameStream& frames, const Backend& backend, const SegmenterConfig& cfg,
                      const PipelineOptions& options, const std::function<void(const Clip&)>& on_clip)
{
    if (options.threads < 1)
        throw std::invalid_argument("threads must be >= 1");
    SegmentResult result;
    result.fps = frames.fps();
    ShotSegmenter seg(cfg, frames.fps());

    if (options.threads == 1) {
        while (auto f = frames.next()) {
            auto frame = std::make_shared<const Frame>(std::move(*f));
            feed(seg, annotate_one(backend, std::move(frame)), result, on_clip);
        }
    } else {
        ParallelAnnotator annotator(frames, backend, options);
        while (auto a = annotator.next())
            feed(seg, std::move(*a), result, on_clip);
    }

    for (auto& c : seg.finish()) {
        if (on_clip)
            on_clip(c);
        result.clips.push_back(std::move(c));
    }
    result.boundaries = seg.boundaries();
    result.errors = seg.errors();
    result.frames = seg.frames_seen();
    return result;
}

ClipTrajectory track_clip(const Clip& clip, const IndexedBackend& backend, const TrackerConfig& cfg)
{
    std::vector<CandidateFrame> frames;
    frames.reserve(static_cast<std::size_t>(clip.length()));
    for (auto f = clip.start_frame; f <= clip.end_frame; ++f)
        frames.push_back(ball_candidates(backend.at(f)));
    return {clip.id, build_trajectory(frames, cfg)};
}

std::string_view to_string(DeliveryStatus s)
{
    switch (s) {
    case DeliveryStatus::ok: return "ok";
    case DeliveryStatus::no_trajectory: return "no trajectory";
    case DeliveryStatus::no_bounce: return "no bounce";
    case DeliveryStatus::error: return "error";
    }
    return "?";
}

DeliveryRecord classify_trajectory(const ClipTrajectory& t, const IndexedBackend& backend, const PitchSpec& pitch)
{
    DeliveryRecord r;
    r.clip_id = t.clip_id;
    if (t.trajectory.empty()) {
        r.status = DeliveryStatus::no_trajectory;
        return r;
    }
    if (!t.trajectory.bounce_index) {
        r.status = DeliveryStatus::no_bounce;
        return r;
    }
    const auto release = t.trajectory.points.front().frame_index;
    const auto bounce = t.trajectory.points[*t.trajectory.bounce_index].frame_index;
    try {
        r.result = classify_clip_delivery(t.trajectory, backend.at(release), backend.at(bounce), pitch);
    } catch (const std::exception& e) {
        r.status = DeliveryStatus::error;
        r.error = e.what();
    }
    return r;
}

nlohmann::json to_json(const ClipTrajectory& t)
{
    auto j = to_json(t.trajectory);
    j["clip"] = t.clip_id;
    return j;
}

ClipTrajectory clip_trajectory_from_json(const nlohmann::json& j)
{
    return {j.at("clip").get<int>(), trajectory_from_json(j)};
}

nlohmann::json to_json(const DeliveryRecord& r)
{
    nlohmann::json j{{"clip", r.clip_id}, {"status", std::string(to_string(r.status))}};
    if (r.result) {
        j["bounce_frame"] = r.result->bounce_frame;
        j["release_frame"] = r.result->release_frame;
        j["distance_m"] = r.result->distance_m;
        j["type"] = std::string(to_string(r.result->type));
        j["zoom"] = r.result->zoom;
    } else {
        for (const char* k : {"bounce_frame", "release_frame", "distance_m", "type", "zoom"})
            j[k] = nullptr;
    }
    if (!r.error.empty())
        j["error"] = r.error;
    return j;
}

DeliveryRecord delivery_record_from_json(const nlohmann::json& j)
{
    DeliveryRecord r;
    r.clip_id = j.at("clip").get<int>();
    const auto status = j.at("status").get<std::string>();
    bool known = false;
    for (auto s : {DeliveryStatus::ok, DeliveryStatus::no_trajectory, DeliveryStatus::no_bounce, DeliveryStatus::error}) {
        if (status == to_string(s)) {
            r.status = s;
            known = true;
        }
    }
    if (!known)
        throw std::invalid_argument("unknown delivery status '" + status + "'");
    if (!j.at("type").is_null()) {
        DeliveryResult res;
        res.type = parse_delivery_type(j.at("type").get<std::string>());
        res.distance_m = j.at("distance_m").get<double>();
        res.zoom = j.at("zoom").get<double>();
        res.release_frame = j.at("release_frame").get<std::int64_t>();
        res.bounce_frame = j.at("bounce_frame").get<std::int64_t>();
        r.result = res;
    }
    r.error = j.value("error", std::string());
    return r;
}

DeliveryCounts count_deliveries(const std::vector<DeliveryRecord>& records)
{
    DeliveryCounts c;
    for (const auto& r : records) {
        if (!r.result) {
            ++c.unclassified;
            continue;
        }
        switch (r.result->type) {
        case DeliveryType::full_pitched: ++c.full; break;
        case DeliveryType::good_length: ++c.good; break;
        case DeliveryType::short_pitched: ++c.short_pitched; break;
        }
    }
    return c;
}

void write_jsonl(const fs::path& path, const std::vector<nlohmann::json>& records)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    for (const auto& r : records)
        out << r.dump() << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

std::vector<nlohmann::json> read_jsonl(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::vector<nlohmann::json> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            out.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

std::vector<Clip> read_manifest(const fs::path& path)
{
    std::vector<Clip> clips;
    for (const auto& j : read_jsonl(path))
        clips.push_back(clip_from_json(j));
    return clips;
}

void write_manifest(const fs::path& path, const std::vector<Clip>& clips)
{
    std::vector<nlohmann::json> records;
    for (const auto& c : clips)
        records.push_back(to_json(c));
    write_jsonl(path, records);
}

void export_clip_frames(FrameStream& frames, const std::vector<Clip>& clips, const fs::path& dir)
{
    std::size_t next = 0;
    while (next < clips.size()) {
        auto f = frames.next();
        if (!f)
            break;
        while (next < clips.size() && f->index() > clips[next].end_frame)
            ++next;
        if (next < clips.size() && f->index() >= clips[next].start_frame) {
            const auto clip_dir = dir / clip_dir_name(clips[next].id);
            fs::create_directories(clip_dir);
            write_pgm(clip_dir / frame_file_name(f->index()), *f);
        }
    }
}

}  // namespace cricseg
