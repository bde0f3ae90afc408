#include "cricseg/detection.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cricseg {

namespace {

constexpr std::pair<ObjectLabel, std::string_view> kLabels[] = {
    {ObjectLabel::pitch, "pitch"},     {ObjectLabel::umpire, "umpire"}, {ObjectLabel::batsman, "batsman"},
    {ObjectLabel::bowler, "bowler"},   {ObjectLabel::ball, "ball"},
};

bool unit_interval(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

Detection parse_detection(const nlohmann::json& j, std::size_t line)
{
    if (!j.is_object())
        throw AnnotationLoadError(line, "detection must be an object");
    Detection d;
    try {
        d.label = parse_label(j.at("label").get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw AnnotationLoadError(line, e.what());
    }
    const auto& box = j.at("box");
    if (!box.is_array() || box.size() != 4)
        throw AnnotationLoadError(line, "box must be [x, y, w, h]");
    d.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(), box[3].get<double>()};
    d.confidence = j.at("conf").get<double>();
    return d;
}

}  // namespace

std::string_view to_string(ObjectLabel label)
{
    for (const auto& [l, name] : kLabels) {
        if (l == label)
            return name;
    }
    return "?";
}

ObjectLabel parse_label(std::string_view text)
{
    for (const auto& [l, name] : kLabels) {
        if (name == text)
            return l;
    }
    throw std::invalid_argument("unknown label '" + std::string(text) + "'");
}

const Detection* FrameAnnotations::best(ObjectLabel label) const
{
    const Detection* out = nullptr;
    for (const auto& d : detections) {
        if (d.label == label && (!out || d.confidence > out->confidence))
            out = &d;
    }
    return out;
}

void validate(const Detection& d, std::optional<std::pair<int, int>> frame_size)
{
    const Box& b = d.box;
    if (!std::isfinite(b.x) || !std::isfinite(b.y) || !(b.w > 0.0) || !(b.h > 0.0) || !std::isfinite(b.w) ||
        !std::isfinite(b.h))
        throw std::invalid_argument("box must have finite origin and positive size");
    if (b.x < 0.0 || b.y < 0.0)
        throw std::invalid_argument("box starts outside the frame");
    if (frame_size && (b.x + b.w > frame_size->first || b.y + b.h > frame_size->second))
        throw std::invalid_argument("box extends past the frame");
    if (!unit_interval(d.confidence))
        throw std::invalid_argument("confidence " + std::to_string(d.confidence) + " outside [0,1]");
}

FileBackend::FileBackend(std::map<std::int64_t, FrameAnnotations> records) : records_(std::move(records)) {}

FrameAnnotations FileBackend::at(std::int64_t frame_index) const
{
    auto it = records_.find(frame_index);
    if (it == records_.end())
        throw AnnotationError(frame_index, "no annotation record");
    return it->second;
}

FileBackend parse_precomputed(std::istream& in, const LoadOptions& options)
{
    std::optional<std::pair<int, int>> frame_size;
    if (options.frame_width && options.frame_height)
        frame_size = std::pair{*options.frame_width, *options.frame_height};

    std::map<std::int64_t, FrameAnnotations> records;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw AnnotationLoadError(line, std::string("invalid JSON: ") + e.what());
        }
        FrameAnnotations a;
        try {
            if (!j.is_object())
                throw AnnotationLoadError(line, "record must be an object");
            a.frame_index = j.at("frame").get<std::int64_t>();
            if (a.frame_index < 0)
                throw AnnotationLoadError(line, "negative frame index");
            a.score.front_prob = j.at("front_prob").get<double>();
            if (!unit_interval(a.score.front_prob))
                throw AnnotationLoadError(line, "front_prob outside [0,1]");

            bool cropped = false;
            if (auto it = j.find("coords"); it != j.end()) {
                const auto coords = it->get<std::string>();
                if (coords == "cropped")
                    cropped = true;
                else if (coords != "full")
                    throw AnnotationLoadError(line, "coords must be \"full\" or \"cropped\"");
            }
            PixelRegion offset;
            if (cropped) {
                if (!frame_size)
                    throw AnnotationLoadError(line, "cropped coordinates need the full frame size");
                offset = crop_region(frame_size->first, frame_size->second, options.ball_crop);
            }

            for (const auto& dj : j.value("detections", nlohmann::json::array())) {
                Detection d = parse_detection(dj, line);
                if (cropped && d.label == ObjectLabel::ball) {
                    d.box.x += offset.x0;
                    d.box.y += offset.y0;
                }
                try {
                    validate(d, frame_size);
                } catch (const std::invalid_argument& e) {
                    throw AnnotationLoadError(line, e.what());
                }
                a.detections.push_back(d);
            }
        } catch (const nlohmann::json::exception& e) {
            throw AnnotationLoadError(line, std::string("bad record: ") + e.what());
        }
        const auto frame = a.frame_index;
        if (!records.emplace(frame, std::move(a)).second)
            throw AnnotationLoadError(line, "duplicate record for frame " + std::to_string(frame));
    }
    return FileBackend(std::move(records));
}

FileBackend load_precomputed(const std::filesystem::path& path, const LoadOptions& options)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open annotation file " + path.string());
    return parse_precomputed(in, options);
}

nlohmann::json to_json(const FrameAnnotations& a)
{
    nlohmann::json dets = nlohmann::json::array();
    for (const auto& d : a.detections) {
        dets.push_back({{"label", std::string(to_string(d.label))},
                        {"box", {d.box.x, d.box.y, d.box.w, d.box.h}},
                        {"conf", d.confidence}});
    }
    return {{"frame", a.frame_index}, {"front_prob", a.score.front_prob}, {"detections", dets}};
}

std::string to_jsonl(const FrameAnnotations& a) { return to_json(a).dump(); }

}  // namespace cricseg
