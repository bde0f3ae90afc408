#include "cricseg/replay_filter.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cricseg {

std::string_view to_string(Liveness l)
{
    switch (l) {
    case Liveness::live: return "live";
    case Liveness::replay: return "replay";
    case Liveness::undetermined: return "undetermined";
    }
    return "?";
}

Liveness parse_liveness(std::string_view text)
{
    for (auto l : {Liveness::live, Liveness::replay, Liveness::undetermined}) {
        if (to_string(l) == text)
            return l;
    }
    throw std::invalid_argument("unknown liveness '" + std::string(text) + "'");
}

void ReplayConfig::validate() const
{
    band.validate();
    if (!(mean_abs_diff_threshold >= 0.0))
        throw std::invalid_argument("replay threshold must be >= 0");
}

double band_difference(const Frame& first, const Frame& last, const BandSpec& band)
{
    if (first.width() != last.width() || first.height() != last.height())
        throw std::invalid_argument("band_difference: frame dimensions differ");
    const int y0 = band_first_row(first.height(), band);
    std::uint64_t sum = 0;
    for (int y = y0; y < first.height(); ++y) {
        auto a = first.row(y);
        auto b = last.row(y);
        for (int x = 0; x < first.width(); ++x)
            sum += static_cast<std::uint64_t>(std::abs(int(a[x]) - int(b[x])));
    }
    const auto n = static_cast<double>(first.height() - y0) * first.width();
    return static_cast<double>(sum) / n;
}

Liveness classify_liveness(const ClipFrames& clip, const ReplayConfig& cfg)
{
    if (clip.length < 2 || !clip.first || !clip.last)
        return Liveness::undetermined;
    auto static_pair = [&](const Frame& a, const Frame& b) {
        return band_difference(a, b, cfg.band) <= cfg.mean_abs_diff_threshold;
    };
    bool live = static_pair(*clip.first, *clip.last);
    if (live && cfg.strict && clip.middle)
        live = static_pair(*clip.first, *clip.middle) && static_pair(*clip.middle, *clip.last);
    return live ? Liveness::live : Liveness::replay;
}

}  // namespace cricseg
