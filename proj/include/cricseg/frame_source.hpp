#pragma once

#include "cricseg/frame.hpp"

#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cricseg {

// Pull-based, single-consumer source of frames in index order.
class FrameStream {
public:
    virtual ~FrameStream() = default;

    // Next frame, or nullopt at end of stream. Throws SourceError on I/O
    // failure or when the frame size changes mid-stream.
    virtual std::optional<Frame> next() = 0;
    virtual double fps() const = 0;
};

inline double timestamp_for(std::int64_t index, double fps) { return index * 1000.0 / fps; }

// Zero-padded numbered PGM or PNG files in one directory, read in
// lexicographic (numeric, given the padding) order.
class ImageSequenceStream : public FrameStream {
public:
    ImageSequenceStream(const std::filesystem::path& dir, double fps);

    std::optional<Frame> next() override;
    double fps() const override { return fps_; }
    std::size_t size() const { return files_.size(); }

private:
    std::vector<std::filesystem::path> files_;
    double fps_;
    std::size_t cursor_ = 0;
    int width_ = 0;
    int height_ = 0;
};

struct RawFormat {
    int width = 0;
    int height = 0;
};

// Headerless 8-bit luma frames, back to back.
class RawPipeStream : public FrameStream {
public:
    // Reads from a file; "-" means standard input.
    RawPipeStream(const std::string& path, RawFormat format, double fps);
    RawPipeStream(std::istream& in, RawFormat format, double fps);

    std::optional<Frame> next() override;
    double fps() const override { return fps_; }

private:
    std::unique_ptr<std::istream> owned_;
    std::istream* in_ = nullptr;
    RawFormat format_;
    double fps_;
    std::int64_t index_ = 0;
};

// In-memory frames; indices and timestamps are reassigned from 0.
class VectorStream : public FrameStream {
public:
    VectorStream(std::vector<Frame> frames, double fps);

    std::optional<Frame> next() override;
    double fps() const override { return fps_; }

private:
    std::vector<Frame> frames_;
    double fps_;
    std::size_t cursor_ = 0;
};

// `uri` is either an image-sequence directory or "raw:<path>" ("raw:-" for
// stdin), in which case `raw` must carry the frame dimensions.
std::unique_ptr<FrameStream> open_source(const std::string& uri, double fps,
                                         std::optional<RawFormat> raw = std::nullopt);

// Image file helpers. PGM (P2/P5) is handled natively, PNG through libpng.
Frame read_image(const std::filesystem::path& path, std::int64_t index, double timestamp_ms);
void write_pgm(const std::filesystem::path& path, const Frame& frame);

}  // namespace cricseg
