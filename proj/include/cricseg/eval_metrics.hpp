#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace cricseg {

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
    ConfusionMatrix& operator+=(const ConfusionMatrix& o);
    friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) { return a += b; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Throws std::invalid_argument when the streams differ in length.
ConfusionMatrix confusion(std::span<const bool> predictions, std::span<const bool> labels);

// A percentage that may be undefined (zero denominator).
struct Percentage {
    std::optional<double> value;  // unrounded, 0..100

    bool defined() const { return value.has_value(); }
    // Truncated toward zero at two decimals.
    std::optional<double> reported() const;
    // "93.89" or "undefined".
    std::string str() const;
};

Percentage recall(const ConfusionMatrix& cm);
Percentage precision(const ConfusionMatrix& cm);

double truncate_2dp(double v);

struct PerfStats {
    std::uint64_t frames_processed = 0;
    double wall_ms = 0.0;
    double ms_per_frame = 0.0;
    double fps = 0.0;
};

PerfStats throughput(std::uint64_t frames_processed, double wall_ms);

nlohmann::json to_json(const ConfusionMatrix& cm);
ConfusionMatrix confusion_from_json(const nlohmann::json& j);
// Matrix plus recall and precision.
nlohmann::json metrics_json(const ConfusionMatrix& cm);
std::string metrics_csv(const ConfusionMatrix& cm);
nlohmann::json to_json(const PerfStats& p);

}  // namespace cricseg
