// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is non-zero when any criterion fails.

#include "cricseg/app.hpp"
#include "cricseg/ball_tracker.hpp"
#include "cricseg/config.hpp"
#include "cricseg/eval_metrics.hpp"
#include "cricseg/fpv_gate.hpp"
#include "cricseg/pipeline.hpp"
#include "cricseg/pitch_geometry.hpp"
#include "cricseg/scenario.hpp"

#include "rendered_pitch.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace cricseg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (pass)
            detail = why;
        pass = false;
    }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

SegmentResult run_segment(const Scenario& sc, int threads = 1)
{
    ScenarioStream frames(sc);
    SyntheticBackend backend(sc);
    PipelineOptions opt;
    opt.threads = threads;
    return segment(frames, backend, SegmenterConfig{}, opt);
}

// 1 ----------------------------------------------------------------------

Outcome metric_regression()
{
    struct Row {
        const char* name;
        ConfusionMatrix cm;
        double recall;
        double precision;
    };
    const Row rows[] = {
        {"classifier", {233358, 4845, 15162, 243675}, 93.89, 97.96},
        {"umpire", {209532, 14022, 38988, 234498}, 84.31, 93.72},
        {"pitch", {240084, 12255, 8436, 236265}, 96.60, 95.14},
        {"either", {241452, 17841, 7068, 230679}, 97.15, 93.11},
        {"dual", {248349, 45942, 171, 202578}, 99.93, 84.38},
    };
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& r : rows) {
        const double rc = *recall(r.cm).reported();
        const double pr = *precision(r.cm).reported();
        if (std::abs(rc - r.recall) > 0.01 + 1e-9 || std::abs(pr - r.precision) > 0.01 + 1e-9)
            o.fail(std::string(r.name) + fmt(": got %.2f/%.2f", rc, pr));
    }
    // The bundled count files must carry the same numbers.
    for (const auto& r : rows) {
        try {
            if (load_counts(fs::path(CRICSEG_DATA_DIR) / "confusion" / (std::string(r.name) + ".json")) != r.cm)
                o.fail(std::string("data/confusion/") + r.name + ".json differs");
        } catch (const std::exception& e) {
            o.fail(e.what());
        }
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (ms >= 1000.0)
        o.fail(fmt("took %.0f ms", ms));
    if (o.pass)
        o.detail = "5 confusion matrices reproduced, " + fmt("%.2f ms", ms);
    return o;
}

// 2 ----------------------------------------------------------------------

Outcome dual_gate_algebra()
{
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> count(0, 3);
    std::bernoulli_distribution label(0.5);
    Outcome o;
    GateConfig cfg;
    for (int stream = 0; stream < 1000; ++stream) {
        // Vary the thresholds per stream as well.
        cfg.classifier_threshold = u(rng);
        cfg.umpire_conf_min = u(rng);
        cfg.pitch_conf_min = u(rng);
        ConfusionMatrix c, e, d;
        for (int f = 0; f < 200; ++f) {
            FrameAnnotations a;
            a.score.front_prob = u(rng);
            for (auto l : {ObjectLabel::umpire, ObjectLabel::pitch, ObjectLabel::ball}) {
                const int n = count(rng);
                for (int i = 0; i < n; ++i)
                    a.detections.push_back({l, {0, 0, 2, 2}, u(rng)});
            }
            const bool truth = label(rng);
            auto add = [&](ConfusionMatrix& cm, bool pred) {
                const bool b[2] = {pred, truth};
                cm += confusion(std::span<const bool>(b, 1), std::span<const bool>(b + 1, 1));
            };
            add(c, evaluate_gate(GateStrategy::classifier, a, cfg).is_front);
            add(e, evaluate_gate(GateStrategy::either, a, cfg).is_front);
            add(d, evaluate_gate(GateStrategy::dual, a, cfg).is_front);
        }
        if (d.fn > std::min(c.fn, e.fn))
            o.fail("stream " + std::to_string(stream) + ": FN(union) above a component");
        if (d.fp < std::max(c.fp, e.fp))
            o.fail("stream " + std::to_string(stream) + ": FP(union) below a component");
    }
    if (o.pass)
        o.detail = "1000 streams";
    return o;
}

// 3 ----------------------------------------------------------------------

Scenario random_cut_script(std::mt19937& rng, int id)
{
    std::uniform_int_distribution<int> len(40, 140);
    std::uniform_int_distribution<int> nseg(3, 8);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<int> pan(0, 2);
    nlohmann::json segs = nlohmann::json::array();
    std::int64_t start = 0;
    const int n = nseg(rng);
    for (int i = 0; i < n; ++i) {
        const int l = len(rng);
        const char* k = kind(rng) == 0 ? "front" : (kind(rng) == 0 ? "replay" : "other");
        segs.push_back({{"start", start}, {"end", start + l - 1}, {"kind", k}, {"scene", i}, {"pan", pan(rng)}});
        start += l;
    }
    return parse_scenario(nlohmann::json{{"name", "cuts" + std::to_string(id)},
                                         {"width", 160},
                                         {"height", 90},
                                         {"seed", id + 1},
                                         {"segments", segs}});
}

Outcome boundary_detection()
{
    std::mt19937 rng(73);
    Outcome o;
    int cuts = 0, detected = 0;
    for (int s = 0; s < 50; ++s) {
        const auto sc = random_cut_script(rng, s);
        const auto r = run_segment(sc);
        const auto truth = sc.cuts();
        cuts += static_cast<int>(truth.size());
        for (auto b : r.boundaries) {
            const bool near = std::any_of(truth.begin(), truth.end(), [&](auto c) { return std::abs(b - c) <= 1; });
            if (!near)
                o.fail("script " + std::to_string(s) + ": false boundary at frame " + std::to_string(b));
        }
        for (auto c : truth) {
            const bool hit =
                std::any_of(r.boundaries.begin(), r.boundaries.end(), [&](auto b) { return std::abs(b - c) <= 1; });
            detected += hit;
            if (!hit)
                o.fail("script " + std::to_string(s) + ": missed cut at frame " + std::to_string(c));
        }
    }
    if (o.pass)
        o.detail = std::to_string(detected) + "/" + std::to_string(cuts) + " cuts, no false boundaries";
    return o;
}

// 4 ----------------------------------------------------------------------

Outcome replay_filtering()
{
    std::mt19937 rng(404);
    std::uniform_int_distribution<int> gap(40, 70);
    std::uniform_int_distribution<int> shot(45, 90);
    std::uniform_int_distribution<int> pan(0, 2);
    std::uniform_int_distribution<int> rpan(1, 4);
    Outcome o;
    int clips = 0, correct = 0;
    for (int s = 0; s < 20; ++s) {
        nlohmann::json segs = nlohmann::json::array();
        std::int64_t start = 0;
        for (int i = 0; i < 10; ++i) {
            const int g = gap(rng);
            segs.push_back({{"start", start}, {"end", start + g - 1}, {"kind", "other"}, {"scene", 3 * i}});
            start += g;
            const bool replay = (i + s) % 2 == 1;
            const int l = shot(rng);
            nlohmann::json seg{{"start", start}, {"end", start + l - 1}, {"scene", 3 * i + 1}};
            seg["kind"] = replay ? "replay" : "front";
            seg["pan"] = replay ? rpan(rng) : pan(rng);
            segs.push_back(seg);
            start += l;
        }
        segs.push_back({{"start", start}, {"end", start + 49}, {"kind", "other"}, {"scene", 99}});
        const auto sc = parse_scenario(nlohmann::json{
            {"name", "replays"}, {"width", 192}, {"height", 108}, {"seed", s + 7}, {"segments", segs}});
        const auto r = run_segment(sc);
        for (const auto& c : r.clips) {
            ++clips;
            const auto want = sc.liveness_of(sc.segment_at(c.start_frame));
            if (c.liveness == want)
                ++correct;
            else
                o.fail("clip at frame " + std::to_string(c.start_frame) + " labelled " +
                       std::string(to_string(c.liveness)));
        }
    }
    if (clips != 200)
        o.fail("corpus yielded " + std::to_string(clips) + " clips, expected 200");
    if (o.pass || clips > 0)
        o.detail = (o.pass ? "" : o.detail + "; ") + std::to_string(correct) + "/" + std::to_string(clips) + " correct";
    return o;
}

// 5 ----------------------------------------------------------------------

std::vector<Point> min_total_path(const std::vector<CandidateFrame>& frames, double radius)
{
    double best = std::numeric_limits<double>::infinity();
    std::vector<Point> best_path, path;
    std::function<void(std::size_t, double)> go = [&](std::size_t i, double cost) {
        if (cost >= best)
            return;
        if (i == frames.size()) {
            best = cost;
            best_path = path;
            return;
        }
        for (const auto& c : frames[i].candidates) {
            double step = 0.0;
            if (!path.empty()) {
                step = distance(path.back(), c.center);
                if (step > radius)
                    continue;
            }
            path.push_back(c.center);
            go(i + 1, cost + step);
            path.pop_back();
        }
    };
    go(0, 0.0);
    return best_path;
}

Scenario delivery_scenario(std::mt19937& rng, double noise)
{
    std::uniform_int_distribution<int> release(5, 15);
    std::uniform_int_distribution<int> flight(10, 25);
    std::uniform_real_distribution<double> dist(2.0, 16.0);
    std::uniform_real_distribution<double> zoom(1.0, 1.15);
    const int rel = 40 + release(rng);
    const int bounce = rel + flight(rng);
    nlohmann::json d{{"release", rel},        {"bounce", bounce},          {"distance_m", dist(rng)},
                     {"zoom", zoom(rng)},     {"row_noise_px", noise},     {"decoys", noise > 0.0},
                     {"ball_until", bounce + 8}};
    return parse_scenario(nlohmann::json{
        {"name", "arc"},
        {"seed", rng()},
        {"segments",
         {{{"start", 0}, {"end", 39}, {"kind", "other"}},
          {{"start", 40}, {"end", 119}, {"kind", "front"}, {"delivery", d}}}}});
}

Outcome ball_tracking()
{
    Outcome o;
    std::mt19937 rng(55);
    int exact = 0, within = 0;
    for (int i = 0; i < 100; ++i) {
        for (double noise : {0.0, 2.0}) {
            const auto sc = delivery_scenario(rng, noise);
            SyntheticBackend backend(sc);
            Clip clip{1, 40, 119};
            const auto t = track_clip(clip, backend, TrackerConfig::for_frame_width(sc.width));
            const auto want = sc.segments[1].delivery->bounce_frame;
            if (!t.trajectory.bounce_index) {
                o.fail(fmt("no bounce found (noise %.0f px)", noise));
                continue;
            }
            const auto got = t.trajectory.points[*t.trajectory.bounce_index].frame_index;
            if (noise == 0.0) {
                exact += got == want;
                if (got != want)
                    o.fail(fmt("noiseless bounce off by %.0f frames", double(got - want)));
            } else {
                within += std::abs(got - want) <= 1;
                if (std::abs(got - want) > 1)
                    o.fail(fmt("noisy bounce off by %.0f frames", double(got - want)));
            }
        }
    }

    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    std::uniform_real_distribution<double> radius(40.0, 60.0);
    std::uniform_int_distribution<int> ndecoys(0, 2);
    std::uniform_real_distribution<double> step(3.0, 9.0);
    TrackerConfig cfg;
    int agree = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<CandidateFrame> frames;
        Point p{300, 100};
        const double dc = step(rng) / 3.0;
        for (int f = 0; f < 8; ++f) {
            CandidateFrame cf{f, {{f, p, 0.95}}};
            const int n = ndecoys(rng);
            for (int k = 0; k < n; ++k) {
                const double a = angle(rng), r = radius(rng);
                cf.candidates.push_back({f, {p.col + r * std::cos(a), p.row + r * std::sin(a)}, 0.5});
            }
            std::shuffle(cf.candidates.begin(), cf.candidates.end(), rng);
            frames.push_back(cf);
            p = {p.col + dc, p.row + (f < 4 ? step(rng) : -step(rng))};
        }
        const auto t = build_trajectory(frames, cfg);
        const auto oracle = min_total_path(frames, cfg.max_jump_px);
        bool same = t.points.size() == oracle.size();
        for (std::size_t i = 0; same && i < oracle.size(); ++i)
            same = t.points[i].center == oracle[i];
        agree += same;
        if (!same)
            o.fail("greedy differs from brute force on case " + std::to_string(trial));
    }
    if (o.pass)
        o.detail = std::to_string(exact) + "/100 exact, " + std::to_string(within) + "/100 within 1 frame, " +
                   std::to_string(agree) + "/100 match brute force";
    return o;
}

// 6 ----------------------------------------------------------------------

Outcome geometry()
{
    Outcome o;
    const PitchSpec p;
    const RowCalibration c{700, 300, 20};
    if (std::abs(row_to_distance(700, c, p) - 1.22) > 1e-12 || std::abs(row_to_distance(300, c, p) - 18.90) > 1e-12)
        o.fail("crease endpoints not exact");

    std::mt19937 rng(6);
    std::uniform_real_distribution<double> dist(1.22, 18.90);
    double worst = 0.0;
    for (double tilt : {0.0, 10.0, 20.0, 30.0}) {
        const RowCalibration cal{650, 250, tilt};
        const testutil::RenderedPitch rendered(tilt, 650, 250);
        for (int i = 0; i < 500; ++i) {
            const double d = dist(rng);
            // Row from the rendered picture, distance back through the library.
            const double t = pitch_to_screen_fraction((d - 1.22) / p.crease_span_m(), tilt);
            const double row = 650 - t * 400;
            worst = std::max(worst, std::abs(rendered.distance_at(row) - d));
            worst = std::max(worst, std::abs(row_to_distance(distance_to_row(d, cal, p), cal, p) - d));
        }
    }
    if (worst > 0.02)
        o.fail(fmt("round trip error %.4f m", worst));

    // The zoom composition is unchanged when every pixel measurement scales.
    auto person = [](std::int64_t f, double bottom, double h, double bowl_bottom, double s) {
        FrameAnnotations a;
        a.frame_index = f;
        a.detections = {{ObjectLabel::batsman, {300 * s, (bottom - h) * s, 30 * s, h * s}, 0.9},
                        {ObjectLabel::bowler, {280 * s, (bowl_bottom - 50) * s, 25 * s, 50 * s}, 0.9}};
        return a;
    };
    std::uniform_real_distribution<double> z(1.0, 1.3);
    for (int i = 0; i < 100; ++i) {
        const double zoom = z(rng);
        const double d = dist(rng);
        const double row = distance_to_row(d, RowCalibration{320, 320 - zoom * 160, 20}, p);
        double base = 0.0;
        for (double s : {1.0, 0.5, 2.0, 3.0}) {
            Trajectory t;
            t.points = {{10, {300 * s, 150 * s}}, {15, {300 * s, row * s}}, {18, {300 * s, (row - 20) * s}}};
            t.bounce_index = 1;
            const auto r = classify_clip_delivery(t, person(10, 300, 100, 140, s), person(15, 320, 100 * zoom, 0, s), p);
            if (s == 1.0)
                base = r.distance_m;
            else if (std::abs(r.distance_m - base) > 1e-9)
                o.fail(fmt("scale %.1f changes distance by %.2e m", s, r.distance_m - base));
        }
    }

    // Delivery corpus, end to end through the command layer.
    auto out = fs::temp_directory_path() / "cricseg_acceptance_214";
    fs::remove_all(out);
    KeyValues kv;
    kv.set("backend.scenario", "deliveries_214");
    kv.set("output.dir", out.string());
    const auto cfg = config_from(kv);
    std::ostringstream log;
    cmd_segment(cfg, log);
    cmd_track(cfg, out / "clips.jsonl", log);
    const auto n = count_deliveries(cmd_classify(cfg, out / "trajectories.jsonl", log));
    const std::string counts = std::to_string(n.full) + "/" + std::to_string(n.good) + "/" +
                               std::to_string(n.short_pitched);
    if (n.full != 80 || n.good != 85 || n.short_pitched != 49 || n.unclassified != 0)
        o.fail("corpus counts " + counts + " (" + std::to_string(n.unclassified) + " unclassified)");
    if (o.pass)
        o.detail = "endpoints exact, " + fmt("worst round trip %.4f m", worst) + ", corpus " + counts;
    return o;
}

// 7 ----------------------------------------------------------------------

Outcome throughput_budget()
{
    Outcome o;
    PipelineConfig cfg;
    cfg.out_dir = fs::temp_directory_path() / "cricseg_acceptance_bench";
    std::ostringstream log;
    const auto report = cmd_bench(cfg, BenchSpec{4000, 640, 360}, log);
    const double fps = report.at("fps").get<double>();
    const double ms = report.at("ms_per_frame").get<double>();
    if (fps < 300.0)
        o.fail(fmt("%.0f fps", fps));
    if (ms > 3.2)
        o.fail(fmt("%.3f ms/frame", ms));
    o.detail = (o.pass ? "" : o.detail + "; ") + fmt("%.0f fps, %.3f ms/frame at 640x360", fps, ms);
    return o;
}

// 8 ----------------------------------------------------------------------

Outcome compression()
{
    Outcome o;
    const auto sc = load_scenario(resolve_scenario("match_5pct"));
    std::int64_t scripted = 0;
    for (const auto& s : sc.segments)
        scripted += s.kind == SegmentKind::front ? s.length() : 0;
    const auto r = run_segment(sc);
    std::int64_t emitted = 0;
    for (const auto& c : r.clips)
        emitted += c.length();
    const double target = 0.05 * static_cast<double>(sc.frame_count());
    const double ratio = static_cast<double>(emitted) / static_cast<double>(sc.frame_count());
    if (std::abs(emitted - target) > 0.1 * target)
        o.fail(fmt("clips cover %.2f%% of the match", 100.0 * ratio));
    if (std::abs(static_cast<double>(scripted) - target) > 0.1 * target)
        o.fail(fmt("script covers %.2f%%", 100.0 * scripted / static_cast<double>(sc.frame_count())));
    if (o.pass)
        o.detail = fmt("%.2f%% of %.0f frames in clips", 100.0 * ratio, static_cast<double>(sc.frame_count())) +
                   ", " + std::to_string(r.clips.size()) + " clips";
    return o;
}

}  // namespace

int main()
{
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"1 metric regression", metric_regression},   {"2 dual-gate set algebra", dual_gate_algebra},
        {"3 boundary detection", boundary_detection}, {"4 replay filtering", replay_filtering},
        {"5 ball tracking", ball_tracking},           {"6 geometry", geometry},
        {"7 throughput", throughput_budget},          {"8 compression", compression},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
