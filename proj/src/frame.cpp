#include "cricseg/frame.hpp"

#include <cmath>

namespace cricseg {

namespace {

// floor(fraction * extent), tolerant of the representation error in
// products such as 0.29 * 100.
int scaled_floor(double fraction, int extent)
{
    return static_cast<int>(std::floor(fraction * extent + 1e-9));
}

std::vector<std::uint8_t> copy_region(std::span<const std::uint8_t> plane, int width,
                                      const PixelRegion& r)
{
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(r.width()) * r.height());
    for (int y = r.y0; y < r.y1; ++y) {
        auto row = plane.subspan(static_cast<std::size_t>(y) * width + r.x0, r.width());
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

}  // namespace

Frame::Frame(std::int64_t index, double timestamp_ms, int width, int height,
             std::vector<std::uint8_t> luma)
    : Frame(index, timestamp_ms, width, height, std::move(luma), {}, {})
{
}

Frame::Frame(std::int64_t index, double timestamp_ms, int width, int height,
             std::vector<std::uint8_t> luma, std::vector<std::uint8_t> cb,
             std::vector<std::uint8_t> cr)
    : index_(index), timestamp_ms_(timestamp_ms), width_(width), height_(height),
      luma_(std::move(luma)), cb_(std::move(cb)), cr_(std::move(cr))
{
    if (index < 0)
        throw SourceError("frame index must be non-negative");
    if (width <= 0 || height <= 0)
        throw SourceError("frame dimensions must be positive");
    const auto expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (luma_.size() != expected)
        throw SourceError("luma buffer length " + std::to_string(luma_.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height));
    if (cb_.size() != cr_.size() || (!cb_.empty() && cb_.size() != expected))
        throw SourceError("chroma planes must both be absent or match the luma size");
}

void CropSpec::validate() const
{
    for (double f : {top, bottom, left, right}) {
        if (!(f >= 0.0 && f < 1.0))
            throw std::invalid_argument("crop fractions must lie in [0,1)");
    }
    if (top + bottom >= 1.0 || left + right >= 1.0)
        throw std::invalid_argument("crop removes the whole frame");
}

PixelRegion crop_region(int width, int height, const CropSpec& spec)
{
    spec.validate();
    PixelRegion r;
    r.x0 = scaled_floor(spec.left, width);
    r.x1 = width - scaled_floor(spec.right, width);
    r.y0 = scaled_floor(spec.top, height);
    r.y1 = height - scaled_floor(spec.bottom, height);
    if (r.width() <= 0 || r.height() <= 0)
        throw std::invalid_argument("crop region is empty");
    return r;
}

void BandSpec::validate() const
{
    if (!(band_fraction > 0.0 && band_fraction <= 1.0))
        throw std::invalid_argument("band fraction must lie in (0,1]");
}

int band_first_row(int height, const BandSpec& band)
{
    band.validate();
    int rows = scaled_floor(band.band_fraction, height);
    if (rows < 1)
        rows = 1;
    return height - rows;
}

Frame crop(const Frame& frame, const PixelRegion& r)
{
    if (r.x0 < 0 || r.y0 < 0 || r.x1 > frame.width() || r.y1 > frame.height() ||
        r.width() <= 0 || r.height() <= 0)
        throw std::invalid_argument("crop region outside frame or empty");
    auto luma = copy_region(frame.luma(), frame.width(), r);
    if (!frame.has_chroma())
        return Frame(frame.index(), frame.timestamp_ms(), r.width(), r.height(), std::move(luma));
    return Frame(frame.index(), frame.timestamp_ms(), r.width(), r.height(), std::move(luma),
                 copy_region(frame.cb(), frame.width(), r),
                 copy_region(frame.cr(), frame.width(), r));
}

Frame crop(const Frame& frame, const CropSpec& spec)
{
    return crop(frame, crop_region(frame.width(), frame.height(), spec));
}

Frame bottom_band(const Frame& frame, const BandSpec& band)
{
    PixelRegion r{0, frame.width(), band_first_row(frame.height(), band), frame.height()};
    return crop(frame, r);
}

}  // namespace cricseg
