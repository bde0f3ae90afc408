#include "cricseg/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace cricseg {

namespace {

constexpr int kSceneBase[] = {40, 130, 220};
// Scene texture: smoothed value noise with a knot every kTextureLattice
// columns; each row reads the strip at its own offset.
constexpr int kTextureLattice = 16;
constexpr int kTextureLength = kTextureLattice * 512;
constexpr double kTextureAmplitude = 30.0;
constexpr int kRowStride = 389;
constexpr int kRunupFrames = 25;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Deterministic uniform in [0,1) from (seed, frame, salt).
double hash01(std::uint64_t seed, std::int64_t frame, std::uint64_t salt)
{
    const auto h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(frame) * 0x100000001B3ull + salt));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

SegmentKind parse_kind(const std::string& s)
{
    if (s == "front")
        return SegmentKind::front;
    if (s == "other")
        return SegmentKind::other;
    if (s == "replay")
        return SegmentKind::replay;
    throw ScenarioError("unknown segment kind '" + s + "'");
}

bool in_frame(const Box& b, int w, int h)
{
    return b.x >= 0.0 && b.y >= 0.0 && b.w > 0.0 && b.h > 0.0 && b.x + b.w <= w && b.y + b.h <= h;
}

double ball_size(const Scenario& s) { return std::max(3.0, s.width / 128.0); }

Box ball_box(const Scenario& s, const Point& c)
{
    const double size = ball_size(s);
    return {c.col - size / 2.0, c.row - size / 2.0, size, size};
}

// Decoy ball candidates sit in the outer side strips, alternating sides
// every frame, so they are never near the real ball or each other.
Point decoy_position(const Scenario& s, std::int64_t frame)
{
    const double strip = 0.12 * s.width;
    const double u = hash01(s.seed, frame, 7);
    const double v = hash01(s.seed, frame, 11);
    const double col = (frame % 2 == 0) ? 4.0 + u * (strip - 8.0) : s.width - strip + 4.0 + u * (strip - 8.0);
    return {col, s.height * (0.1 + 0.5 * v)};
}

}  // namespace

std::string_view to_string(SegmentKind k)
{
    switch (k) {
    case SegmentKind::front: return "front";
    case SegmentKind::other: return "other";
    case SegmentKind::replay: return "replay";
    }
    return "?";
}

const ScenarioSegment& Scenario::segment_at(std::int64_t frame) const
{
    auto it = std::upper_bound(segments.begin(), segments.end(), frame,
                               [](std::int64_t f, const ScenarioSegment& s) { return f < s.start; });
    if (it == segments.begin() || frame > std::prev(it)->end)
        throw ScenarioError("frame " + std::to_string(frame) + " is outside scenario '" + name + "'");
    return *std::prev(it);
}

bool Scenario::is_front(std::int64_t frame) const { return segment_at(frame).kind != SegmentKind::other; }

std::vector<std::int64_t> Scenario::cuts() const
{
    std::vector<std::int64_t> out;
    for (std::size_t i = 1; i < segments.size(); ++i)
        out.push_back(segments[i].start);
    return out;
}

Liveness Scenario::liveness_of(const ScenarioSegment& s) const
{
    switch (s.kind) {
    case SegmentKind::front: return Liveness::live;
    case SegmentKind::replay: return Liveness::replay;
    case SegmentKind::other: break;
    }
    return Liveness::undetermined;
}

RowCalibration delivery_calibration(const Scenario& s, const DeliveryScript& d)
{
    return {d.bounce_batsman_bottom, d.bounce_batsman_bottom - d.zoom * d.pitch_px, s.tilt_deg};
}

DeliveryPose delivery_pose(const Scenario& s, const DeliveryScript& d, std::int64_t frame)
{
    const double span = static_cast<double>(d.bounce_frame - d.release_frame);
    const double tau = std::clamp((frame - d.release_frame) / span, 0.0, 1.0);
    const double zoom = 1.0 + (d.zoom - 1.0) * tau;
    const double h = d.batsman_height * zoom;
    const double bottom = d.batsman_bottom + (d.bounce_batsman_bottom - d.batsman_bottom) * tau;

    DeliveryPose pose;
    pose.batsman = {d.column - 0.225 * h, bottom - h, 0.45 * h, h};

    const double runup = 0.5 * d.batsman_height *
                         std::clamp(static_cast<double>(d.release_frame - frame) / kRunupFrames, 0.0, 1.0);
    const double bowler_bottom = bottom - zoom * d.pitch_px - runup;
    const double bowler_col = d.column - 0.35 * h;
    pose.bowler = {bowler_col - 0.225 * h, bowler_bottom - h, 0.45 * h, h};

    if (frame >= d.release_frame && frame <= d.ball_until) {
        // Projectile in image rows: starts at the bowler's hand, lands on the
        // scripted row at the bounce frame, then rises with lower speed.
        const double r0 = d.batsman_bottom - d.pitch_px - 0.85 * d.batsman_height;
        const double rb = distance_to_row(d.distance_m, delivery_calibration(s, d), PitchSpec{.tilt_deg = s.tilt_deg});
        const double g = 0.5 * (rb - r0) / (span * span);
        const double v0 = (rb - r0) / span - 0.5 * g * span;
        const double vb = v0 + g * span;
        const double c0 = d.column - 0.35 * d.batsman_height;
        const double dt = static_cast<double>(frame - d.release_frame);
        double row;
        if (frame <= d.bounce_frame) {
            row = r0 + v0 * dt + 0.5 * g * dt * dt;
        } else {
            const double ds = static_cast<double>(frame - d.bounce_frame);
            row = rb - 0.5 * vb * ds + 0.5 * g * ds * ds;
        }
        if (frame == d.bounce_frame)
            row = rb;
        if (d.row_noise_px > 0.0)
            row += (2.0 * hash01(s.seed, frame, 3) - 1.0) * d.row_noise_px;
        const double col = c0 + (d.column - c0) * dt / span;
        pose.ball = Point{col, row};
    }
    return pose;
}

void Scenario::validate() const
{
    if (width < 16 || height < 16)
        throw ScenarioError("scenario frames must be at least 16x16");
    if (!(fps > 0.0))
        throw ScenarioError("scenario fps must be positive");
    if (!(tilt_deg >= 0.0 && tilt_deg < 90.0))
        throw ScenarioError("tilt must lie in [0, 90)");
    if (!(scorecard_fraction > 0.0 && scorecard_fraction <= 1.0))
        throw ScenarioError("scorecard fraction must lie in (0,1]");
    if (segments.empty())
        throw ScenarioError("scenario has no segments");

    auto sorted = segments;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto& s = sorted[i];
        if (s.start < 0 || s.end < s.start)
            throw ScenarioError("segment [" + std::to_string(s.start) + ", " + std::to_string(s.end) +
                                "] is empty or negative");
        if (i > 0 && s.start <= sorted[i - 1].end)
            throw ScenarioError("overlapping segments: [" + std::to_string(sorted[i - 1].start) + ", " +
                                std::to_string(sorted[i - 1].end) + "] and [" + std::to_string(s.start) + ", " +
                                std::to_string(s.end) + "]");
        if (i > 0 && s.start != sorted[i - 1].end + 1)
            throw ScenarioError("gap before segment starting at frame " + std::to_string(s.start));
    }
    if (sorted.front().start != 0)
        throw ScenarioError("first segment must start at frame 0");
    if (!std::equal(sorted.begin(), sorted.end(), segments.begin(),
                    [](const auto& a, const auto& b) { return a.start == b.start; }))
        throw ScenarioError("segments must be listed in frame order");

    for (const auto& s : segments) {
        if (!(s.front_prob >= 0.0 && s.front_prob <= 1.0))
            throw ScenarioError("segment front_prob outside [0,1]");
        for (auto f : s.dropouts) {
            if (f < s.start || f > s.end)
                throw ScenarioError("dropout frame " + std::to_string(f) + " outside its segment");
        }
        if (!s.delivery)
            continue;
        const auto& d = *s.delivery;
        const std::string where = "delivery in segment starting at " + std::to_string(s.start) + ": ";
        if (s.kind == SegmentKind::other)
            throw ScenarioError(where + "deliveries need a front or replay segment");
        if (!(s.start <= d.release_frame && d.release_frame < d.bounce_frame && d.bounce_frame <= d.ball_until &&
              d.ball_until <= s.end))
            throw ScenarioError(where + "need start <= release < bounce <= ball_until <= end");
        if (d.ball_until - d.bounce_frame > d.bounce_frame - d.release_frame)
            throw ScenarioError(where + "ball must not stay visible longer after the bounce than before it");
        if (!(d.zoom > 0.0 && d.batsman_height > 0.0 && d.pitch_px > 0.0))
            throw ScenarioError(where + "zoom, batsman height and pitch span must be positive");
        const PitchSpec pitch;
        if (!(d.distance_m > pitch.crease_offset_m && d.distance_m < pitch.stumps_to_stumps_m - pitch.crease_offset_m))
            throw ScenarioError(where + "bounce distance must lie strictly between the creases");
        const double r0 = d.batsman_bottom - d.pitch_px - 0.85 * d.batsman_height;
        const double rb = distance_to_row(d.distance_m, delivery_calibration(*this, d), PitchSpec{.tilt_deg = tilt_deg});
        if (!(rb > r0 + 1.0))
            throw ScenarioError(where + "bounce row must lie below the release point");
        for (auto f = s.start; f <= s.end; ++f) {
            const auto pose = delivery_pose(*this, d, f);
            if (!in_frame(pose.batsman, width, height) || !in_frame(pose.bowler, width, height) ||
                (pose.ball && !in_frame(ball_box(*this, *pose.ball), width, height)))
                throw ScenarioError(where + "player or ball box leaves the frame at frame " + std::to_string(f));
        }
    }
}

Scenario parse_scenario(const nlohmann::json& j)
{
    try {
        Scenario sc;
        sc.name = j.value("name", std::string("unnamed"));
        sc.description = j.value("description", std::string());
        sc.width = j.value("width", 640);
        sc.height = j.value("height", 360);
        sc.fps = j.value("fps", 50.0);
        sc.seed = j.value("seed", std::uint64_t{1});
        sc.tilt_deg = j.value("tilt_deg", 20.0);
        sc.scorecard_fraction = j.value("scorecard_fraction", 0.15);

        int index = 0;
        for (const auto& sj : j.at("segments")) {
            ScenarioSegment s;
            s.start = sj.at("start").get<std::int64_t>();
            s.end = sj.at("end").get<std::int64_t>();
            s.kind = parse_kind(sj.at("kind").get<std::string>());
            const bool front_view = s.kind != SegmentKind::other;
            s.scorecard = sj.value("scorecard", s.kind != SegmentKind::replay);
            s.scene = sj.value("scene", index);
            s.pan_px = sj.value("pan", s.kind == SegmentKind::replay ? 2 : 0);
            s.front_prob = sj.value("front_prob", front_view ? 1.0 : 0.0);
            if (auto it = sj.find("objects"); it != sj.end()) {
                for (const auto& o : *it)
                    s.objects.push_back(parse_label(o.get<std::string>()));
            } else if (front_view) {
                s.objects = {ObjectLabel::pitch, ObjectLabel::umpire};
            }
            s.dropouts = sj.value("dropouts", std::vector<std::int64_t>{});
            if (auto it = sj.find("delivery"); it != sj.end()) {
                const auto& dj = *it;
                DeliveryScript d;
                d.release_frame = dj.at("release").get<std::int64_t>();
                d.bounce_frame = dj.at("bounce").get<std::int64_t>();
                d.ball_until = dj.value("ball_until", d.bounce_frame + (d.bounce_frame - d.release_frame) / 2);
                d.distance_m = dj.at("distance_m").get<double>();
                d.zoom = dj.value("zoom", 1.0);
                d.batsman_height = dj.value("batsman_height", 0.17 * sc.height);
                d.batsman_bottom = dj.value("batsman_bottom", 0.78 * sc.height);
                d.bounce_batsman_bottom = dj.value("bounce_batsman_bottom", d.batsman_bottom);
                d.pitch_px = dj.value("pitch_px", 0.45 * sc.height);
                d.column = dj.value("column", 0.5 * sc.width);
                d.decoys = dj.value("decoys", false);
                d.row_noise_px = dj.value("row_noise_px", 0.0);
                s.delivery = d;
            }
            sc.segments.push_back(std::move(s));
            ++index;
        }
        sc.validate();
        return sc;
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(std::string("malformed scenario: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("malformed scenario: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioError("cannot open scenario " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(path.string() + ": " + e.what());
    }
    return parse_scenario(j);
}

nlohmann::json to_json(const Scenario& sc)
{
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : sc.segments) {
        nlohmann::json sj{{"start", s.start},         {"end", s.end},     {"kind", std::string(to_string(s.kind))},
                          {"scorecard", s.scorecard}, {"scene", s.scene}, {"pan", s.pan_px},
                          {"front_prob", s.front_prob}};
        nlohmann::json objs = nlohmann::json::array();
        for (auto o : s.objects)
            objs.push_back(std::string(to_string(o)));
        sj["objects"] = objs;
        if (!s.dropouts.empty())
            sj["dropouts"] = s.dropouts;
        if (s.delivery) {
            const auto& d = *s.delivery;
            sj["delivery"] = {{"release", d.release_frame},
                              {"bounce", d.bounce_frame},
                              {"ball_until", d.ball_until},
                              {"distance_m", d.distance_m},
                              {"zoom", d.zoom},
                              {"batsman_height", d.batsman_height},
                              {"batsman_bottom", d.batsman_bottom},
                              {"bounce_batsman_bottom", d.bounce_batsman_bottom},
                              {"pitch_px", d.pitch_px},
                              {"column", d.column},
                              {"decoys", d.decoys},
                              {"row_noise_px", d.row_noise_px}};
        }
        segs.push_back(std::move(sj));
    }
    return {{"name", sc.name},   {"description", sc.description}, {"width", sc.width},
            {"height", sc.height}, {"fps", sc.fps},               {"seed", sc.seed},
            {"tilt_deg", sc.tilt_deg}, {"scorecard_fraction", sc.scorecard_fraction}, {"segments", segs}};
}

Scenario make_match_scenario(const MatchSpec& m)
{
    if (!(m.front_fraction > 0.0 && m.front_fraction < 1.0))
        throw ScenarioError("front fraction must lie in (0,1)");
    if (m.shot_frames < 45)
        throw ScenarioError("shots need at least 45 frames");
    const auto shots = std::max<std::int64_t>(
        1, std::llround(static_cast<double>(m.frames) * m.front_fraction / static_cast<double>(m.shot_frames)));
    const auto other = m.frames - shots * m.shot_frames;
    const auto slots = shots + 1;
    if (other < slots * 40)
        throw ScenarioError("not enough frames between shots");

    Scenario sc;
    sc.name = "match";
    sc.description = "generated broadcast";
    sc.width = m.width;
    sc.height = m.height;
    sc.fps = m.fps;
    sc.seed = m.seed;

    const double H = m.height;
    std::int64_t cursor = 0;
    int scene = 0;
    auto add = [&](SegmentKind kind, std::int64_t len) {
        ScenarioSegment s;
        s.start = cursor;
        s.end = cursor + len - 1;
        s.kind = kind;
        s.scene = scene++;
        s.scorecard = true;
        if (kind == SegmentKind::front) {
            s.front_prob = 1.0;
            s.objects = {ObjectLabel::pitch, ObjectLabel::umpire};
            if (m.deliveries) {
                DeliveryScript d;
                d.release_frame = s.start + 15;
                d.bounce_frame = d.release_frame + 18;
                d.ball_until = d.bounce_frame + 8;
                d.distance_m = 3.0 + 14.0 * hash01(m.seed, s.start, 5);
                d.zoom = 1.2;
                d.batsman_height = 0.12 * H;
                d.batsman_bottom = 0.72 * H;
                d.bounce_batsman_bottom = 0.75 * H;
                d.pitch_px = 0.38 * H;
                d.column = 0.5 * m.width;
                s.delivery = d;
            }
        }
        sc.segments.push_back(std::move(s));
        cursor += len;
    };
    for (std::int64_t i = 0; i < slots; ++i) {
        const auto len = other / slots + (i < other % slots ? 1 : 0);
        add(SegmentKind::other, len);
        if (i < shots)
            add(SegmentKind::front, m.shot_frames);
    }
    sc.validate();
    return sc;
}

SyntheticBackend::SyntheticBackend(Scenario scenario) : scenario_(std::move(scenario)) { scenario_.validate(); }

FrameAnnotations SyntheticBackend::at(std::int64_t frame) const
{
    if (frame < 0 || frame >= scenario_.frame_count())
        throw AnnotationError(frame, "outside scenario '" + scenario_.name + "'");
    const auto& s = scenario_.segment_at(frame);
    FrameAnnotations a;
    a.frame_index = frame;
    if (std::find(s.dropouts.begin(), s.dropouts.end(), frame) != s.dropouts.end())
        return a;

    const double w = scenario_.width;
    const double h = scenario_.height;
    a.score.front_prob = s.front_prob;
    for (auto label : s.objects) {
        if (label == ObjectLabel::pitch)
            a.detections.push_back({label, {0.42 * w, 0.2 * h, 0.16 * w, 0.6 * h}, 0.9});
        else if (label == ObjectLabel::umpire)
            a.detections.push_back({label, {0.56 * w, 0.3 * h, 0.05 * w, 0.15 * h}, 0.8});
    }
    if (s.delivery) {
        const auto pose = delivery_pose(scenario_, *s.delivery, frame);
        a.detections.push_back({ObjectLabel::batsman, pose.batsman, 0.92});
        a.detections.push_back({ObjectLabel::bowler, pose.bowler, 0.9});
        if (pose.ball) {
            a.detections.push_back({ObjectLabel::ball, ball_box(scenario_, *pose.ball), 0.9});
            if (s.delivery->decoys)
                a.detections.push_back({ObjectLabel::ball, ball_box(scenario_, decoy_position(scenario_, frame)), 0.35});
        }
    }
    return a;
}

ScenarioRenderer::ScenarioRenderer(const Scenario& scenario)
    : ScenarioRenderer(std::make_shared<const Scenario>(scenario))
{
}

ScenarioRenderer::ScenarioRenderer(std::shared_ptr<const Scenario> scenario) : scenario_(std::move(scenario))
{
    scenario_->validate();
    const int W = scenario_->width;
    const int H = scenario_->height;
    texture_.resize(kTextureLength);
    constexpr int knots = kTextureLength / kTextureLattice;
    auto knot = [](int k) { return (2.0 * hash01(0x7E57, k % knots, 11) - 1.0) * kTextureAmplitude; };
    for (int i = 0; i < kTextureLength; ++i) {
        const int k = i / kTextureLattice;
        double f = static_cast<double>(i % kTextureLattice) / kTextureLattice;
        f = f * f * (3.0 - 2.0 * f);
        texture_[i] = static_cast<int>(std::lround(knot(k) + (knot(k + 1) - knot(k)) * f));
    }
    wave_y_.resize(H);
    for (int y = 0; y < H; ++y)
        wave_y_[y] = static_cast<int>(std::lround(5.0 * std::sin(2.0 * std::numbers::pi * y / 90.0)));

    band_row_ = band_first_row(H, BandSpec{scenario_->scorecard_fraction});
    scorecard_.resize(static_cast<std::size_t>(H - band_row_) * W);
    for (int y = band_row_; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const bool glyph = ((x / 6) + (y / 4)) % 5 == 0 && (y - band_row_) > 1;
            scorecard_[static_cast<std::size_t>(y - band_row_) * W + x] = glyph ? 230 : 25;
        }
    }
}

Frame ScenarioRenderer::render(std::int64_t index) const
{
    const Scenario& sc = *scenario_;
    const auto& seg = sc.segment_at(index);
    const int W = sc.width;
    const int H = sc.height;

    const int base = kSceneBase[((seg.scene % 3) + 3) % 3];
    const auto shift = static_cast<std::int64_t>(seg.scene) * 37 + seg.pan_px * (index - seg.start);
    std::vector<std::uint8_t> pix(static_cast<std::size_t>(W) * H);
    for (int y = 0; y < H; ++y) {
        std::uint8_t* out = pix.data() + static_cast<std::size_t>(y) * W;
        const int level = base + wave_y_[y];
        const std::int64_t start = shift + static_cast<std::int64_t>(y) * kRowStride;
        std::int64_t pos = (start % kTextureLength + kTextureLength) % kTextureLength;
        for (int x = 0; x < W; ++x) {
            out[x] = static_cast<std::uint8_t>(std::clamp(level + texture_[static_cast<std::size_t>(pos)], 0, 255));
            if (++pos == kTextureLength)
                pos = 0;
        }
    }

    const std::uint8_t ink = base < 128 ? 235 : 15;
    const int limit = seg.scorecard ? band_row_ : H;
    auto fill = [&](const Box& b, std::uint8_t v) {
        const int x0 = std::max(0, static_cast<int>(std::floor(b.x)));
        const int x1 = std::min(W, static_cast<int>(std::ceil(b.x + b.w)));
        const int y0 = std::max(0, static_cast<int>(std::floor(b.y)));
        const int y1 = std::min(limit, static_cast<int>(std::ceil(b.y + b.h)));
        for (int y = y0; y < y1; ++y)
            std::fill(pix.begin() + static_cast<std::ptrdiff_t>(y) * W + x0,
                      pix.begin() + static_cast<std::ptrdiff_t>(y) * W + x1, v);
    };

    if (seg.delivery) {
        const auto pose = delivery_pose(sc, *seg.delivery, index);
        fill(pose.batsman, ink);
        fill(pose.bowler, ink);
        if (pose.ball)
            fill(ball_box(sc, *pose.ball), 255);
    } else if (seg.kind != SegmentKind::other) {
        // Bowler run-up: a small block walking down the pitch.
        const double travel = static_cast<double>((index - seg.start) % (H / 3));
        fill({0.48 * W, 0.15 * H + travel, 0.04 * W, 0.12 * H}, ink);
    }

    if (seg.scorecard)
        std::copy(scorecard_.begin(), scorecard_.end(), pix.begin() + static_cast<std::ptrdiff_t>(band_row_) * W);

    return Frame(index, timestamp_for(index, sc.fps), W, H, std::move(pix));
}

ScenarioStream::ScenarioStream(const Scenario& scenario) : ScenarioStream(std::make_shared<const Scenario>(scenario)) {}

ScenarioStream::ScenarioStream(std::shared_ptr<const Scenario> scenario)
    : scenario_(scenario), renderer_(std::move(scenario))
{
}

std::optional<Frame> ScenarioStream::next()
{
    if (cursor_ >= scenario_->frame_count())
        return std::nullopt;
    return renderer_.render(cursor_++);
}

}  // namespace cricseg
