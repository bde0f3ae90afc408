#pragma once

#include "cricseg/ball_tracker.hpp"
#include "cricseg/detection.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cricseg {

// Where in the bounce-position computation a failure happened.
enum class GeometryStage {
    batsman_height,      // height of the batsman in the release frame
    pitch_height,        // batsman-to-bowler pixel span in the release frame
    bounce_batsman,      // batsman height in the bounce frame
    zoom,                // zoom factor between the two frames
    scaled_pitch,        // pitch span rescaled into the bounce frame
    distance,            // row-to-distance mapping and length classification
};

std::string_view to_string(GeometryStage stage);

class GeometryError : public std::runtime_error {
public:
    GeometryError(GeometryStage stage, const std::string& what);
    GeometryStage stage() const { return stage_; }

private:
    GeometryStage stage_;
};

struct PitchSpec {
    double stumps_to_stumps_m = 20.12;
    double crease_offset_m = 1.22;
    double full_max_m = 6.0;
    double good_max_m = 8.0;
    double tilt_deg = 20.0;

    // Crease-to-crease span, 17.68 m on a standard pitch.
    double crease_span_m() const { return stumps_to_stumps_m - 2.0 * crease_offset_m; }
    void validate() const;
};

// Crease rows in the bounce frame. The batsman is lower on screen.
struct RowCalibration {
    double batsman_crease_row = 0.0;
    double bowler_crease_row = 0.0;
    double tilt_deg = 20.0;

    void validate() const;
};

enum class DeliveryType { full_pitched, good_length, short_pitched };

std::string_view to_string(DeliveryType t);  // "full" | "good" | "short"
DeliveryType parse_delivery_type(std::string_view text);

double batsman_height(const FrameAnnotations& annotations);
double pitch_pixel_height(const FrameAnnotations& annotations);
double zoom_factor(double release_height, double bounce_height);
double scaled_pitch_height(double zoom, double release_pitch_px);

// Normalised screen position t in [0,1] (0 at the batsman crease) to the
// along-pitch fraction u for a strip tilted by tilt_deg.
double screen_to_pitch_fraction(double t, double tilt_deg);
double pitch_to_screen_fraction(double u, double tilt_deg);

// Distance in metres from the batsman's stumps for a pixel row between the
// two creases.
double row_to_distance(double row, const RowCalibration& calib, const PitchSpec& pitch);
// Inverse of row_to_distance for d in [crease_offset, stumps - crease_offset].
double distance_to_row(double distance_m, const RowCalibration& calib, const PitchSpec& pitch);

DeliveryType classify_delivery(double distance_m, const PitchSpec& pitch);

struct DeliveryResult {
    DeliveryType type = DeliveryType::good_length;
    double distance_m = 0.0;
    double zoom = 1.0;
    std::int64_t release_frame = 0;
    std::int64_t bounce_frame = 0;
    RowCalibration calibration;
};

// Release frame is the trajectory's first point; the bounce frame is the
// point at bounce_index. The batsman crease in the bounce frame is anchored
// at the batsman box bottom.
DeliveryResult classify_clip_delivery(const Trajectory& trajectory, const FrameAnnotations& release,
                                      const FrameAnnotations& bounce, const PitchSpec& pitch);

}  // namespace cricseg
