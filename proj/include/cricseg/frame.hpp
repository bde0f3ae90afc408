#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cricseg {

class SourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A decoded video frame. Row 0 is the top of the image; the luma plane is
// row-major, one byte per pixel. Chroma planes are optional and, when
// present, have the same dimensions as luma.
class Frame {
public:
    Frame() = default;
    Frame(std::int64_t index, double timestamp_ms, int width, int height,
          std::vector<std::uint8_t> luma);
    Frame(std::int64_t index, double timestamp_ms, int width, int height,
          std::vector<std::uint8_t> luma, std::vector<std::uint8_t> cb,
          std::vector<std::uint8_t> cr);

    std::int64_t index() const { return index_; }
    double timestamp_ms() const { return timestamp_ms_; }
    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return luma_.size(); }

    std::span<const std::uint8_t> luma() const { return luma_; }
    std::span<const std::uint8_t> row(int y) const
    {
        return std::span<const std::uint8_t>(luma_).subspan(
            static_cast<std::size_t>(y) * width_, width_);
    }
    std::uint8_t at(int x, int y) const { return luma_[static_cast<std::size_t>(y) * width_ + x]; }

    bool has_chroma() const { return !cb_.empty(); }
    std::span<const std::uint8_t> cb() const { return cb_; }
    std::span<const std::uint8_t> cr() const { return cr_; }

private:
    std::int64_t index_ = 0;
    double timestamp_ms_ = 0.0;
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> luma_;
    std::vector<std::uint8_t> cb_;
    std::vector<std::uint8_t> cr_;
};

// Fractions of the frame removed from each edge.
struct CropSpec {
    double top = 0.0;
    double bottom = 0.0;
    double left = 0.0;
    double right = 0.0;

    void validate() const;

    // Fractions used when the ball detector was run on cropped frames.
    static CropSpec ball_detection_default() { return {0.20, 0.25, 0.30, 0.30}; }
};

// Pixel rectangle [x0, x1) x [y0, y1).
struct PixelRegion {
    int x0 = 0;
    int x1 = 0;
    int y0 = 0;
    int y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
};

PixelRegion crop_region(int width, int height, const CropSpec& spec);

// Bottom band of the frame where the broadcast scorecard sits.
struct BandSpec {
    double band_fraction = 0.15;

    void validate() const;
};

// First row of the bottom band for a frame of the given height.
int band_first_row(int height, const BandSpec& band);

Frame crop(const Frame& frame, const CropSpec& spec);
Frame crop(const Frame& frame, const PixelRegion& region);
Frame bottom_band(const Frame& frame, const BandSpec& band);

}  // namespace cricseg
