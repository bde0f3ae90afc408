#include "cricseg/eval_metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cricseg {

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o)
{
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
}

ConfusionMatrix confusion(std::span<const bool> predictions, std::span<const bool> labels)
{
    if (predictions.size() != labels.size())
        throw std::invalid_argument("predictions (" + std::to_string(predictions.size()) + ") and labels (" +
                                    std::to_string(labels.size()) + ") differ in length");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i])
            ++(labels[i] ? cm.tp : cm.fp);
        else
            ++(labels[i] ? cm.fn : cm.tn);
    }
    return cm;
}

double truncate_2dp(double v)
{
    // The nudge keeps exact two-decimal values (e.g. 99.93 stored as
    // 99.92999...) from dropping a hundredth.
    return std::trunc(v * 100.0 + (v >= 0 ? 1e-9 : -1e-9)) / 100.0;
}

std::optional<double> Percentage::reported() const
{
    if (!value)
        return std::nullopt;
    return truncate_2dp(*value);
}

std::string Percentage::str() const
{
    if (!value)
        return "undefined";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *reported());
    return buf;
}

namespace {

Percentage ratio(std::uint64_t num, std::uint64_t den)
{
    if (den == 0)
        return {};
    return {100.0 * static_cast<double>(num) / static_cast<double>(den)};
}

nlohmann::json pct_json(const Percentage& p)
{
    return p.defined() ? nlohmann::json(*p.reported()) : nlohmann::json("undefined");
}

}  // namespace

Percentage recall(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fn); }
Percentage precision(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fp); }

PerfStats throughput(std::uint64_t frames_processed, double wall_ms)
{
    if (frames_processed == 0)
        throw std::invalid_argument("throughput needs at least one frame");
    if (!(wall_ms > 0.0))
        throw std::invalid_argument("wall time must be positive");
    PerfStats p;
    p.frames_processed = frames_processed;
    p.wall_ms = wall_ms;
    p.ms_per_frame = wall_ms / static_cast<double>(frames_processed);
    p.fps = 1000.0 / p.ms_per_frame;
    return p;
}

nlohmann::json to_json(const ConfusionMatrix& cm)
{
    return {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

ConfusionMatrix confusion_from_json(const nlohmann::json& j)
{
    auto count = [&](const char* key) {
        const auto& v = j.at(key);
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
            throw std::invalid_argument(std::string("count '") + key + "' must be a non-negative integer");
        return v.get<std::uint64_t>();
    };
    return {count("tp"), count("fp"), count("fn"), count("tn")};
}

nlohmann::json metrics_json(const ConfusionMatrix& cm)
{
    auto j = to_json(cm);
    j["n"] = cm.total();
    j["recall"] = pct_json(recall(cm));
    j["precision"] = pct_json(precision(cm));
    return j;
}

std::string metrics_csv(const ConfusionMatrix& cm)
{
    std::ostringstream out;
    out << "tp,fp,fn,tn,n,recall,precision\n"
        << cm.tp << ',' << cm.fp << ',' << cm.fn << ',' << cm.tn << ',' << cm.total() << ','
        << recall(cm).str() << ',' << precision(cm).str() << '\n';
    return out.str();
}

nlohmann::json to_json(const PerfStats& p)
{
    return {{"frames_processed", p.frames_processed},
            {"wall_ms", p.wall_ms},
            {"ms_per_frame", p.ms_per_frame},
            {"fps", p.fps}};
}

}  // namespace cricseg
