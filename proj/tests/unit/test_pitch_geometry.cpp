#include "cricseg/pitch_geometry.hpp"

#include "rendered_pitch.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace cricseg;

namespace {

FrameAnnotations people(std::int64_t f, double bat_bottom, double bat_h, double bowl_bottom)
{
    FrameAnnotations a;
    a.frame_index = f;
    a.detections = {{ObjectLabel::batsman, {300, bat_bottom - bat_h, 30, bat_h}, 0.9},
                    {ObjectLabel::bowler, {280, bowl_bottom - 50, 25, 50}, 0.9}};
    return a;
}

}  // namespace

TEST_SUITE("pitch_geometry")
{
    TEST_CASE("release-frame measurements")
    {
        auto a = people(10, 300, 180, 120);
        CHECK(batsman_height(a) == 180.0);
        CHECK(pitch_pixel_height(a) == 180.0);

        FrameAnnotations none;
        none.frame_index = 4;
        try {
            batsman_height(none);
            FAIL("expected an error");
        } catch (const GeometryError& e) {
            CHECK(e.stage() == GeometryStage::batsman_height);
        }
        a.detections.pop_back();
        try {
            pitch_pixel_height(a);
            FAIL("expected an error");
        } catch (const GeometryError& e) {
            CHECK(e.stage() == GeometryStage::pitch_height);
            CHECK(std::string(e.what()).find("bowler") != std::string::npos);
        }
        CHECK_THROWS_AS(pitch_pixel_height(people(0, 100, 50, 200)), GeometryError);
    }

    TEST_CASE("zoom and scaled pitch")
    {
        CHECK(zoom_factor(180, 216) == doctest::Approx(1.2));
        CHECK(zoom_factor(100, 100) == 1.0);
        CHECK(scaled_pitch_height(1.2, 250) == doctest::Approx(300.0));
        CHECK_THROWS_AS(zoom_factor(0, 100), GeometryError);
        CHECK_THROWS_AS(scaled_pitch_height(1.0, -3), GeometryError);
    }

    TEST_CASE("crease rows map to the crease distances")
    {
        RowCalibration c{700, 300, 20};
        PitchSpec p;
        CHECK(row_to_distance(700, c, p) == doctest::Approx(1.22));
        CHECK(row_to_distance(300, c, p) == doctest::Approx(18.90));
        c.tilt_deg = 0;
        CHECK(row_to_distance(500, c, p) == doctest::Approx(10.06));
        CHECK_THROWS_AS(row_to_distance(701, c, p), GeometryError);
        CHECK_THROWS_AS(row_to_distance(500, RowCalibration{300, 700, 20}, p), GeometryError);
    }

    TEST_CASE("mid-screen row at 20 degrees matches the rendered pitch")
    {
        RowCalibration c{700, 300, 20};
        testutil::RenderedPitch oracle(20, 700, 300);
        const double d = row_to_distance(500, c, PitchSpec{});
        CHECK(d == doctest::Approx(oracle.distance_at(500)).epsilon(0.0005));
        CHECK(d == doctest::Approx(10.335).epsilon(0.0005));
        CHECK(d > 10.06);
    }

    TEST_CASE("row/distance mapping agrees with the rendered pitch at every tilt")
    {
        std::mt19937 rng(8);
        std::uniform_real_distribution<double> dist(1.22, 18.90);
        PitchSpec p;
        for (double tilt : {0.0, 10.0, 20.0, 30.0}) {
            RowCalibration c{650, 250, tilt};
            testutil::RenderedPitch oracle(tilt, 650, 250);
            for (int i = 0; i < 200; ++i) {
                const double d = dist(rng);
                const double row = distance_to_row(d, c, p);
                CHECK(std::abs(row_to_distance(row, c, p) - d) <= 1e-9);
                CHECK(std::abs(oracle.distance_at(row) - d) <= 0.02);
            }
        }
    }

    TEST_CASE("distance falls as the row moves down the screen")
    {
        RowCalibration c{600, 200, 25};
        double prev = 1e9;
        for (int row = 200; row <= 600; row += 5) {
            const double d = row_to_distance(row, c, PitchSpec{});
            CHECK(d < prev);
            prev = d;
        }
    }

    TEST_CASE("fraction transforms are mutual inverses")
    {
        for (double tilt : {0.0, 15.0, 45.0}) {
            for (double t = 0.0; t <= 1.0; t += 0.05)
                CHECK(pitch_to_screen_fraction(screen_to_pitch_fraction(t, tilt), tilt) == doctest::Approx(t));
        }
    }

    TEST_CASE("length classes partition the pitch")
    {
        PitchSpec p;
        CHECK(classify_delivery(5.99, p) == DeliveryType::full_pitched);
        CHECK(classify_delivery(6.0, p) == DeliveryType::good_length);
        CHECK(classify_delivery(8.0, p) == DeliveryType::good_length);
        CHECK(classify_delivery(8.01, p) == DeliveryType::short_pitched);
        CHECK(classify_delivery(1.22, p) == DeliveryType::full_pitched);
        CHECK(classify_delivery(18.9, p) == DeliveryType::short_pitched);
        CHECK_THROWS_AS(classify_delivery(-1.0, p), GeometryError);
        for (auto t : {DeliveryType::full_pitched, DeliveryType::good_length, DeliveryType::short_pitched})
            CHECK(parse_delivery_type(to_string(t)) == t);
    }

    TEST_CASE("distance is unchanged by a uniform image scale")
    {
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> frac(0.0, 1.0);
        for (double s : {0.5, 2.0, 3.0}) {
            for (int i = 0; i < 50; ++i) {
                RowCalibration a{600, 250, 20};
                RowCalibration b{600 * s, 250 * s, 20};
                const double row = 250 + frac(rng) * 350;
                CHECK(row_to_distance(row * s, b, PitchSpec{}) == doctest::Approx(row_to_distance(row, a, PitchSpec{})));
            }
        }
    }

    TEST_CASE("whole delivery: release and bounce frames to a length")
    {
        // Release: batsman 100 px tall, bottom at 300, bowler bottom at 140
        // (pitch span 160 px). Bounce frame zoomed by 1.2: batsman 120 px,
        // bottom at 320, so the creases sit at rows 320 and 128.
        RowCalibration expect{320, 320 - 1.2 * 160, 20};
        const double row = distance_to_row(7.0, expect, PitchSpec{});
        Trajectory t;
        t.points = {{10, {300, 150}}, {15, {300, row}}, {18, {300, row - 20}}};
        t.bounce_index = 1;
        auto release = people(10, 300, 100, 140);
        auto bounce = people(15, 320, 120, 100);
        auto r = classify_clip_delivery(t, release, bounce, PitchSpec{});
        CHECK(r.zoom == doctest::Approx(1.2));
        CHECK(r.distance_m == doctest::Approx(7.0));
        CHECK(r.type == DeliveryType::good_length);
        CHECK(r.release_frame == 10);
        CHECK(r.bounce_frame == 15);
        CHECK(r.calibration.bowler_crease_row == doctest::Approx(128.0));

        FrameAnnotations empty_bounce;
        empty_bounce.frame_index = 15;
        try {
            classify_clip_delivery(t, release, empty_bounce, PitchSpec{});
            FAIL("expected an error");
        } catch (const GeometryError& e) {
            CHECK(e.stage() == GeometryStage::bounce_batsman);
        }
        t.bounce_index.reset();
        CHECK_THROWS_AS(classify_clip_delivery(t, release, bounce, PitchSpec{}), GeometryError);
    }
}
