#include "cricseg/pitch_geometry.hpp"

#include <cmath>
#include <numbers>

namespace cricseg {

namespace {

double cos_deg(double deg) { return std::cos(deg * std::numbers::pi / 180.0); }

std::string fmt(double v) { return std::to_string(v); }

}  // namespace

std::string_view to_string(GeometryStage stage)
{
    switch (stage) {
    case GeometryStage::batsman_height: return "batsman height (release frame)";
    case GeometryStage::pitch_height: return "pitch pixel height (release frame)";
    case GeometryStage::bounce_batsman: return "batsman height (bounce frame)";
    case GeometryStage::zoom: return "zoom factor";
    case GeometryStage::scaled_pitch: return "scaled pitch height";
    case GeometryStage::distance: return "bounce distance";
    }
    return "?";
}

GeometryError::GeometryError(GeometryStage stage, const std::string& what)
    : std::runtime_error(std::string(to_string(stage)) + ": " + what), stage_(stage)
{
}

void PitchSpec::validate() const
{
    if (!(crease_offset_m >= 0.0 && 2.0 * crease_offset_m < stumps_to_stumps_m))
        throw std::invalid_argument("crease offset must leave a positive crease-to-crease span");
    if (!(full_max_m > 0.0 && full_max_m < good_max_m && good_max_m < stumps_to_stumps_m))
        throw std::invalid_argument("length thresholds must satisfy 0 < full < good < pitch length");
    if (!(tilt_deg >= 0.0 && tilt_deg < 90.0))
        throw std::invalid_argument("tilt must lie in [0, 90) degrees");
}

void RowCalibration::validate() const
{
    if (!(batsman_crease_row > bowler_crease_row))
        throw GeometryError(GeometryStage::distance, "batsman crease row must be below the bowler crease row");
    if (!(tilt_deg >= 0.0 && tilt_deg < 90.0))
        throw GeometryError(GeometryStage::distance, "tilt must lie in [0, 90) degrees");
}

std::string_view to_string(DeliveryType t)
{
    switch (t) {
    case DeliveryType::full_pitched: return "full";
    case DeliveryType::good_length: return "good";
    case DeliveryType::short_pitched: return "short";
    }
    return "?";
}

DeliveryType parse_delivery_type(std::string_view text)
{
    for (auto t : {DeliveryType::full_pitched, DeliveryType::good_length, DeliveryType::short_pitched}) {
        if (to_string(t) == text)
            return t;
    }
    throw std::invalid_argument("unknown delivery type '" + std::string(text) + "'");
}

double batsman_height(const FrameAnnotations& annotations)
{
    const Detection* b = annotations.best(ObjectLabel::batsman);
    if (!b)
        throw GeometryError(GeometryStage::batsman_height,
                            "no batsman detection in frame " + std::to_string(annotations.frame_index));
    return b->box.h;
}

double pitch_pixel_height(const FrameAnnotations& annotations)
{
    const Detection* bat = annotations.best(ObjectLabel::batsman);
    const Detection* bowl = annotations.best(ObjectLabel::bowler);
    if (!bat || !bowl)
        throw GeometryError(GeometryStage::pitch_height,
                            std::string("no ") + (bat ? "bowler" : "batsman") + " detection in frame " +
                                std::to_string(annotations.frame_index));
    const double p = bat->box.bottom() - bowl->box.bottom();
    if (!(p > 0.0))
        throw GeometryError(GeometryStage::pitch_height,
                            "bowler is not above the batsman (span " + fmt(p) + " px)");
    return p;
}

double zoom_factor(double release_height, double bounce_height)
{
    if (!(release_height > 0.0) || !(bounce_height > 0.0))
        throw GeometryError(GeometryStage::zoom, "batsman heights must be positive");
    return bounce_height / release_height;
}

double scaled_pitch_height(double zoom, double release_pitch_px)
{
    if (!(zoom > 0.0) || !(release_pitch_px > 0.0))
        throw GeometryError(GeometryStage::scaled_pitch, "zoom and pitch height must be positive");
    return zoom * release_pitch_px;
}

// The pitch strip is a plane tilted away from the image plane; under
// perspective the along-pitch fraction is a projective function of the
// screen fraction with u(0) = 0 and u(1) = 1 exactly.
double screen_to_pitch_fraction(double t, double tilt_deg)
{
    const double c = cos_deg(tilt_deg);
    return t / (t + (1.0 - t) * c);
}

double pitch_to_screen_fraction(double u, double tilt_deg)
{
    const double c = cos_deg(tilt_deg);
    return u * c / (u * c + (1.0 - u));
}

double row_to_distance(double row, const RowCalibration& calib, const PitchSpec& pitch)
{
    calib.validate();
    if (!(row >= calib.bowler_crease_row && row <= calib.batsman_crease_row))
        throw GeometryError(GeometryStage::distance, "row " + fmt(row) + " outside the crease span [" +
                                                         fmt(calib.bowler_crease_row) + ", " +
                                                         fmt(calib.batsman_crease_row) + "]");
    const double t = (calib.batsman_crease_row - row) / (calib.batsman_crease_row - calib.bowler_crease_row);
    return pitch.crease_offset_m + screen_to_pitch_fraction(t, calib.tilt_deg) * pitch.crease_span_m();
}

double distance_to_row(double distance_m, const RowCalibration& calib, const PitchSpec& pitch)
{
    calib.validate();
    const double u = (distance_m - pitch.crease_offset_m) / pitch.crease_span_m();
    if (!(u >= 0.0 && u <= 1.0))
        throw GeometryError(GeometryStage::distance, "distance " + fmt(distance_m) + " m lies outside the creases");
    const double t = pitch_to_screen_fraction(u, calib.tilt_deg);
    return calib.batsman_crease_row - t * (calib.batsman_crease_row - calib.bowler_crease_row);
}

DeliveryType classify_delivery(double distance_m, const PitchSpec& pitch)
{
    if (!(distance_m >= 0.0 && distance_m <= pitch.stumps_to_stumps_m))
        throw GeometryError(GeometryStage::distance, "distance " + fmt(distance_m) + " m is off the pitch");
    if (distance_m < pitch.full_max_m)
        return DeliveryType::full_pitched;
    if (distance_m <= pitch.good_max_m)
        return DeliveryType::good_length;
    return DeliveryType::short_pitched;
}

DeliveryResult classify_clip_delivery(const Trajectory& trajectory, const FrameAnnotations& release,
                                      const FrameAnnotations& bounce, const PitchSpec& pitch)
{
    pitch.validate();
    if (trajectory.points.empty() || !trajectory.bounce_index)
        throw GeometryError(GeometryStage::distance, "trajectory has no bounce");
    const auto& bounce_point = trajectory.points[*trajectory.bounce_index];

    DeliveryResult r;
    r.release_frame = trajectory.points.front().frame_index;
    r.bounce_frame = bounce_point.frame_index;
    if (release.frame_index != r.release_frame || bounce.frame_index != r.bounce_frame)
        throw std::invalid_argument("annotations do not match the trajectory's release/bounce frames");

    const double h1 = batsman_height(release);
    const double p1 = pitch_pixel_height(release);
    const Detection* bat2 = bounce.best(ObjectLabel::batsman);
    if (!bat2)
        throw GeometryError(GeometryStage::bounce_batsman,
                            "no batsman detection in frame " + std::to_string(bounce.frame_index));
    r.zoom = zoom_factor(h1, bat2->box.h);
    const double p2 = scaled_pitch_height(r.zoom, p1);

    r.calibration = {bat2->box.bottom(), bat2->box.bottom() - p2, pitch.tilt_deg};
    r.distance_m = row_to_distance(bounce_point.center.row, r.calibration, pitch);
    r.type = classify_delivery(r.distance_m, pitch);
    return r;
}

}  // namespace cricseg
