#include "cricseg/frame_source.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace cricseg {

namespace {

void require_fps(double fps)
{
    if (!(fps > 0.0) || !std::isfinite(fps))
        throw SourceError("fps must be positive");
}

bool is_image_file(const fs::path& p)
{
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".pgm" || ext == ".png";
}

// Skips whitespace and '#' comments in a PNM header.
void skip_pnm_space(std::istream& in)
{
    while (in) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
}

int read_pnm_int(std::istream& in, const fs::path& path)
{
    skip_pnm_space(in);
    int v = -1;
    in >> v;
    if (!in || v < 0)
        throw SourceError("malformed PGM header: " + path.string());
    return v;
}

Frame read_pgm(const fs::path& path, std::int64_t index, double ts)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SourceError("cannot open " + path.string());
    char magic[2] = {};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '2'))
        throw SourceError("not a PGM file: " + path.string());
    const int w = read_pnm_int(in, path);
    const int h = read_pnm_int(in, path);
    const int maxval = read_pnm_int(in, path);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
        throw SourceError("unsupported PGM geometry or depth: " + path.string());
    std::vector<std::uint8_t> pix(static_cast<std::size_t>(w) * h);
    if (magic[1] == '5') {
        in.get();  // single whitespace byte after maxval
        in.read(reinterpret_cast<char*>(pix.data()), static_cast<std::streamsize>(pix.size()));
        if (in.gcount() != static_cast<std::streamsize>(pix.size()))
            throw SourceError("truncated PGM data: " + path.string());
    } else {
        for (auto& p : pix)
            p = static_cast<std::uint8_t>(read_pnm_int(in, path));
    }
    if (maxval != 255) {
        for (auto& p : pix)
            p = static_cast<std::uint8_t>((p * 255 + maxval / 2) / maxval);
    }
    return Frame(index, ts, w, h, std::move(pix));
}

Frame read_png(const fs::path& path, std::int64_t index, double ts)
{
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str()))
        throw SourceError("cannot read PNG " + path.string() + ": " + image.message);

    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
        png_image_free(&image);
        throw SourceError("cannot decode PNG " + path.string() + ": " + image.message);
    }
    const int w = static_cast<int>(image.width);
    const int h = static_cast<int>(image.height);
    if (!color)
        return Frame(index, ts, w, h, std::move(buf));

    // Full-range BT.601 in fixed point.
    const std::size_t n = static_cast<std::size_t>(w) * h;
    std::vector<std::uint8_t> y(n), cb(n), cr(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int r = buf[3 * i], g = buf[3 * i + 1], b = buf[3 * i + 2];
        y[i] = static_cast<std::uint8_t>((77 * r + 150 * g + 29 * b + 128) >> 8);
        cb[i] = static_cast<std::uint8_t>(std::clamp((-43 * r - 85 * g + 128 * b + 128) / 256 + 128, 0, 255));
        cr[i] = static_cast<std::uint8_t>(std::clamp((128 * r - 107 * g - 21 * b + 128) / 256 + 128, 0, 255));
    }
    return Frame(index, ts, w, h, std::move(y), std::move(cb), std::move(cr));
}

}  // namespace

Frame read_image(const fs::path& path, std::int64_t index, double timestamp_ms)
{
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png")
        return read_png(path, index, timestamp_ms);
    return read_pgm(path, index, timestamp_ms);
}

void write_pgm(const fs::path& path, const Frame& frame)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw SourceError("cannot write " + path.string());
    out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
    auto luma = frame.luma();
    out.write(reinterpret_cast<const char*>(luma.data()), static_cast<std::streamsize>(luma.size()));
    if (!out)
        throw SourceError("write failed: " + path.string());
}

ImageSequenceStream::ImageSequenceStream(const fs::path& dir, double fps) : fps_(fps)
{
    require_fps(fps);
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        throw SourceError("not a readable directory: " + dir.string());
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && is_image_file(entry.path()))
            files_.push_back(entry.path());
    }
    if (ec)
        throw SourceError("cannot list " + dir.string() + ": " + ec.message());
    std::sort(files_.begin(), files_.end());
}

std::optional<Frame> ImageSequenceStream::next()
{
    if (cursor_ >= files_.size())
        return std::nullopt;
    const auto index = static_cast<std::int64_t>(cursor_);
    Frame f = read_image(files_[cursor_], index, timestamp_for(index, fps_));
    if (cursor_ == 0) {
        width_ = f.width();
        height_ = f.height();
    } else if (f.width() != width_ || f.height() != height_) {
        throw SourceError("frame " + std::to_string(index) + " (" + files_[cursor_].filename().string() +
                          ") is " + std::to_string(f.width()) + "x" + std::to_string(f.height()) +
                          ", stream is " + std::to_string(width_) + "x" + std::to_string(height_));
    }
    ++cursor_;
    return f;
}

RawPipeStream::RawPipeStream(const std::string& path, RawFormat format, double fps)
    : format_(format), fps_(fps)
{
    require_fps(fps);
    if (format.width <= 0 || format.height <= 0)
        throw SourceError("raw input needs positive --width and --height");
    if (path == "-") {
        in_ = &std::cin;
    } else {
        owned_ = std::make_unique<std::ifstream>(path, std::ios::binary);
        if (!*owned_)
            throw SourceError("cannot open raw input " + path);
        in_ = owned_.get();
    }
}

RawPipeStream::RawPipeStream(std::istream& in, RawFormat format, double fps)
    : in_(&in), format_(format), fps_(fps)
{
    require_fps(fps);
    if (format.width <= 0 || format.height <= 0)
        throw SourceError("raw input needs positive width and height");
}

std::optional<Frame> RawPipeStream::next()
{
    const auto n = static_cast<std::size_t>(format_.width) * format_.height;
    std::vector<std::uint8_t> pix(n);
    in_->read(reinterpret_cast<char*>(pix.data()), static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(in_->gcount());
    if (got == 0)
        return std::nullopt;
    if (got != n)
        throw SourceError("truncated raw frame " + std::to_string(index_) + ": got " +
                          std::to_string(got) + " of " + std::to_string(n) + " bytes");
    Frame f(index_, timestamp_for(index_, fps_), format_.width, format_.height, std::move(pix));
    ++index_;
    return f;
}

VectorStream::VectorStream(std::vector<Frame> frames, double fps) : frames_(std::move(frames)), fps_(fps)
{
    require_fps(fps);
}

std::optional<Frame> VectorStream::next()
{
    if (cursor_ >= frames_.size())
        return std::nullopt;
    const Frame& src = frames_[cursor_];
    const auto index = static_cast<std::int64_t>(cursor_);
    ++cursor_;
    std::vector<std::uint8_t> luma(src.luma().begin(), src.luma().end());
    return Frame(index, timestamp_for(index, fps_), src.width(), src.height(), std::move(luma));
}

std::unique_ptr<FrameStream> open_source(const std::string& uri, double fps, std::optional<RawFormat> raw)
{
    require_fps(fps);
    if (uri.rfind("raw:", 0) == 0) {
        if (!raw)
            throw SourceError("raw input requires frame dimensions");
        return std::make_unique<RawPipeStream>(uri.substr(4), *raw, fps);
    }
    return std::make_unique<ImageSequenceStream>(uri, fps);
}

}  // namespace cricseg
