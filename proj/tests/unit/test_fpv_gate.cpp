#include "cricseg/fpv_gate.hpp"

#include <doctest.h>

#include <random>

using namespace cricseg;

namespace {

FrameAnnotations with(std::initializer_list<std::pair<ObjectLabel, double>> dets, double front_prob = 0.0)
{
    FrameAnnotations a;
    a.score.front_prob = front_prob;
    for (auto [label, conf] : dets)
        a.detections.push_back({label, {1, 1, 5, 5}, conf});
    return a;
}

FrameAnnotations random_annotations(std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> count(0, 3);
    FrameAnnotations a;
    a.score.front_prob = u(rng);
    for (auto label : {ObjectLabel::umpire, ObjectLabel::pitch, ObjectLabel::ball}) {
        const int n = count(rng);
        for (int i = 0; i < n; ++i)
            a.detections.push_back({label, {0, 0, 2, 2}, u(rng)});
    }
    return a;
}

std::vector<std::pair<std::int64_t, GateEventKind>> run(int k, const std::vector<bool>& verdicts)
{
    Debouncer d(k);
    std::vector<std::pair<std::int64_t, GateEventKind>> out;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (auto e = d.push(static_cast<std::int64_t>(i), verdicts[i])) {
            CHECK(e->emitted_at == static_cast<std::int64_t>(i));
            CHECK(e->emitted_at - e->run_start + 1 == k);
            out.emplace_back(e->emitted_at, e->kind);
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("fpv_gate")
{
    TEST_CASE("classifier threshold is inclusive")
    {
        GateConfig cfg;
        CHECK(gate_classifier({0.9}, cfg).is_front);
        CHECK(gate_classifier({0.5}, cfg).is_front);
        CHECK_FALSE(gate_classifier({0.2}, cfg).is_front);
        CHECK(gate_classifier({0.5}, cfg).evidence.classifier);
    }

    TEST_CASE("umpire gate")
    {
        GateConfig cfg;
        CHECK(gate_umpire(with({{ObjectLabel::umpire, 0.8}}), cfg).is_front);
        CHECK_FALSE(gate_umpire(with({{ObjectLabel::pitch, 0.9}}), cfg).is_front);
        CHECK_FALSE(gate_umpire(with({{ObjectLabel::umpire, 0.1}}), cfg).is_front);
        CHECK(gate_umpire(with({{ObjectLabel::umpire, 0.25}}), cfg).is_front);
    }

    TEST_CASE("pitch gate")
    {
        GateConfig cfg;
        CHECK(gate_pitch(with({{ObjectLabel::pitch, 0.9}}), cfg).is_front);
        CHECK_FALSE(gate_pitch(with({}), cfg).is_front);
        CHECK(gate_pitch(with({{ObjectLabel::pitch, 0.1}, {ObjectLabel::pitch, 0.3}}), cfg).is_front);
    }

    TEST_CASE("either gate")
    {
        GateConfig cfg;
        CHECK(gate_either(with({{ObjectLabel::umpire, 0.8}}), cfg).is_front);
        CHECK(gate_either(with({{ObjectLabel::pitch, 0.8}}), cfg).is_front);
        CHECK_FALSE(gate_either(with({{ObjectLabel::ball, 0.8}}), cfg).is_front);
    }

    TEST_CASE("dual gate")
    {
        GateConfig cfg;
        auto pitch_only = with({{ObjectLabel::pitch, 0.9}}, 0.1);
        CHECK(gate_dual(pitch_only.score, pitch_only, cfg).is_front);

        GateConfig inter = cfg;
        inter.dual_mode = DualMode::intersection_mode;
        auto classifier_only = with({}, 0.9);
        CHECK_FALSE(gate_dual(classifier_only.score, classifier_only, inter).is_front);

        auto both = with({{ObjectLabel::umpire, 0.9}}, 0.9);
        CHECK(gate_dual(both.score, both, cfg).is_front);
        CHECK(gate_dual(both.score, both, inter).is_front);
        CHECK(evaluate_gate(GateStrategy::dual, both, cfg).strategy == GateStrategy::dual);
    }

    TEST_CASE("strategy names round trip")
    {
        for (auto s : {GateStrategy::classifier, GateStrategy::umpire, GateStrategy::pitch, GateStrategy::either,
                       GateStrategy::dual})
            CHECK(parse_strategy(to_string(s)) == s);
        CHECK(parse_dual_mode("union") == DualMode::union_mode);
        CHECK(parse_dual_mode("intersection") == DualMode::intersection_mode);
        CHECK_THROWS_AS(parse_strategy("both"), std::invalid_argument);
    }

    TEST_CASE("thresholds outside [0,1] are rejected")
    {
        GateConfig cfg;
        cfg.pitch_conf_min = 1.2;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }

    TEST_CASE("either equals umpire or pitch pointwise")
    {
        std::mt19937 rng(1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 5000; ++i) {
            auto a = random_annotations(rng);
            GateConfig cfg;
            cfg.umpire_conf_min = u(rng);
            cfg.pitch_conf_min = u(rng);
            CHECK(gate_either(a, cfg).is_front == (gate_umpire(a, cfg).is_front || gate_pitch(a, cfg).is_front));
        }
    }

    TEST_CASE("lowering a threshold never turns FRONT into NOT FRONT")
    {
        std::mt19937 rng(2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 5000; ++i) {
            auto a = random_annotations(rng);
            GateConfig hi{u(rng), u(rng), u(rng), i % 2 ? DualMode::union_mode : DualMode::intersection_mode};
            GateConfig lo = hi;
            lo.classifier_threshold *= u(rng);
            lo.umpire_conf_min *= u(rng);
            lo.pitch_conf_min *= u(rng);
            for (auto s : {GateStrategy::classifier, GateStrategy::umpire, GateStrategy::pitch, GateStrategy::either,
                           GateStrategy::dual}) {
                if (evaluate_gate(s, a, hi).is_front)
                    CHECK(evaluate_gate(s, a, lo).is_front);
            }
        }
    }

    TEST_CASE("union and intersection dominance on labelled streams")
    {
        std::mt19937 rng(3);
        GateConfig uni;
        GateConfig inter;
        inter.dual_mode = DualMode::intersection_mode;
        for (int stream = 0; stream < 200; ++stream) {
            std::bernoulli_distribution label(0.5);
            long fn_c = 0, fn_e = 0, fn_u = 0, fn_i = 0, fp_c = 0, fp_e = 0, fp_u = 0, fp_i = 0;
            for (int f = 0; f < 100; ++f) {
                const bool truth = label(rng);
                auto a = random_annotations(rng);
                const bool c = gate_classifier(a.score, uni).is_front;
                const bool e = gate_either(a, uni).is_front;
                const bool du = gate_dual(a.score, a, uni).is_front;
                const bool di = gate_dual(a.score, a, inter).is_front;
                fn_c += truth && !c;
                fn_e += truth && !e;
                fn_u += truth && !du;
                fn_i += truth && !di;
                fp_c += !truth && c;
                fp_e += !truth && e;
                fp_u += !truth && du;
                fp_i += !truth && di;
            }
            CHECK(fn_u <= std::min(fn_c, fn_e));
            CHECK(fp_u >= std::max(fp_c, fp_e));
            CHECK(fn_i >= std::max(fn_c, fn_e));
            CHECK(fp_i <= std::min(fp_c, fp_e));
        }
    }

    TEST_CASE("debounce with k=1 mirrors state changes")
    {
        auto ev = run(1, {true, true, false, true, false, false});
        REQUIRE(ev.size() == 4);
        CHECK(ev[0] == std::pair<std::int64_t, GateEventKind>{0, GateEventKind::open});
        CHECK(ev[1] == std::pair<std::int64_t, GateEventKind>{2, GateEventKind::close});
        CHECK(ev[2] == std::pair<std::int64_t, GateEventKind>{3, GateEventKind::open});
        CHECK(ev[3] == std::pair<std::int64_t, GateEventKind>{4, GateEventKind::close});
    }

    TEST_CASE("debounce with k=3 opens on the third consecutive FRONT")
    {
        auto ev = run(3, {true, true, false, true, true, true});
        REQUIRE(ev.size() == 1);
        CHECK(ev[0].first == 5);
        CHECK(ev[0].second == GateEventKind::open);

        Debouncer d(3);
        d.push(0, true);
        d.push(1, true);
        d.push(2, false);
        d.push(3, true);
        d.push(4, true);
        auto e = d.push(5, true);
        REQUIRE(e);
        CHECK(e->run_start == 3);
        CHECK(d.is_open());
    }

    TEST_CASE("debounce: all NOT FRONT gives no events; close needs k misses")
    {
        CHECK(run(3, std::vector<bool>(20, false)).empty());
        auto ev = run(2, {true, true, false, true, false, false, false});
        REQUIRE(ev.size() == 2);
        CHECK(ev[1] == std::pair<std::int64_t, GateEventKind>{5, GateEventKind::close});
        CHECK_THROWS_AS(Debouncer(0), std::invalid_argument);
    }
}
