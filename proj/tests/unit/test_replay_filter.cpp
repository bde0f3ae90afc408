#include "cricseg/replay_filter.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace cricseg;

TEST_SUITE("replay_filter")
{
    TEST_CASE("band difference examples")
    {
        auto a = testutil::flat(10, 20, 100);
        CHECK(band_difference(a, a, BandSpec{}) == 0.0);
        auto b = testutil::from_fn(10, 20, 1, [](int, int y) { return y >= 17 ? 140 : 0; });
        CHECK(band_difference(a, b, BandSpec{0.15}) == doctest::Approx(40.0));
        auto black = testutil::flat(10, 20, 0);
        auto white = testutil::flat(10, 20, 255);
        CHECK(band_difference(black, white, BandSpec{}) == 255.0);
        CHECK_THROWS_AS(band_difference(black, testutil::flat(10, 21, 0), BandSpec{}), std::invalid_argument);
    }

    TEST_CASE("band difference is symmetric")
    {
        std::mt19937 rng(5);
        std::uniform_int_distribution<int> px(0, 255);
        for (int i = 0; i < 50; ++i) {
            auto a = testutil::from_fn(16, 12, 0, [&](int, int) { return px(rng); });
            auto b = testutil::from_fn(16, 12, 1, [&](int, int) { return px(rng); });
            CHECK(band_difference(a, b, BandSpec{0.3}) == band_difference(b, a, BandSpec{0.3}));
        }
    }

    TEST_CASE("static band is live, moving band is replay")
    {
        ReplayConfig cfg;
        auto first = testutil::from_fn(40, 40, 0, [](int x, int y) { return y >= 34 ? 30 : x; });
        auto last = testutil::from_fn(40, 40, 60, [](int x, int y) { return y >= 34 ? 30 : 255 - x; });
        CHECK(classify_liveness({&first, nullptr, &last, 61}, cfg) == Liveness::live);

        auto moved = testutil::from_fn(40, 40, 60, [](int x, int) { return (x * 7) % 256; });
        CHECK(classify_liveness({&first, nullptr, &moved, 61}, cfg) == Liveness::replay);
    }

    TEST_CASE("threshold is inclusive")
    {
        ReplayConfig cfg;
        auto a = testutil::flat(10, 10, 100);
        auto b = testutil::flat(10, 10, 108);
        CHECK(classify_liveness({&a, nullptr, &b, 2}, cfg) == Liveness::live);
        auto c = testutil::flat(10, 10, 109);
        CHECK(classify_liveness({&a, nullptr, &c, 2}, cfg) == Liveness::replay);
    }

    TEST_CASE("one-frame clip is undetermined")
    {
        auto a = testutil::flat(10, 10, 100);
        CHECK(classify_liveness({&a, nullptr, &a, 1}, ReplayConfig{}) == Liveness::undetermined);
    }

    TEST_CASE("strict mode also checks the middle frame")
    {
        auto a = testutil::flat(10, 10, 100);
        auto m = testutil::flat(10, 10, 200);
        ReplayConfig loose;
        ReplayConfig strict;
        strict.strict = true;
        CHECK(classify_liveness({&a, &m, &a, 3}, loose) == Liveness::live);
        CHECK(classify_liveness({&a, &m, &a, 3}, strict) == Liveness::replay);
    }

    TEST_CASE("liveness names")
    {
        for (auto l : {Liveness::live, Liveness::replay, Liveness::undetermined})
            CHECK(parse_liveness(to_string(l)) == l);
        CHECK_THROWS(parse_liveness("maybe"));
    }
}
