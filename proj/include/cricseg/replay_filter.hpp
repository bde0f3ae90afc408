#pragma once

#include "cricseg/frame.hpp"

#include <cstdint>
#include <string_view>

namespace cricseg {

enum class Liveness { live, replay, undetermined };

std::string_view to_string(Liveness l);
Liveness parse_liveness(std::string_view text);

struct ReplayConfig {
    BandSpec band;
    // Mean absolute luma difference at or below which the band counts as a
    // static scorecard.
    double mean_abs_diff_threshold = 8.0;
    // Also require first/middle and middle/last to be static.
    bool strict = false;

    void validate() const;
};

// Mean over the bottom band of |first - last|, in luma levels [0, 255].
double band_difference(const Frame& first, const Frame& last, const BandSpec& band);

// Frames the liveness test looks at. `middle` is only consulted in strict
// mode and may be null otherwise.
struct ClipFrames {
    const Frame* first = nullptr;
    const Frame* middle = nullptr;
    const Frame* last = nullptr;
    std::int64_t length = 0;
};

// Live when the scorecard band is static across the clip, replay otherwise.
// Clips shorter than two frames are undetermined.
Liveness classify_liveness(const ClipFrames& clip, const ReplayConfig& cfg);

}  // namespace cricseg
