#pragma once

#include "cricseg/config.hpp"
#include "cricseg/eval_metrics.hpp"
#include "cricseg/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cricseg {

// Runtime failure tagged with the pipeline stage it came from.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage))
    {
    }
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// Writes <out>/clips.jsonl (and the frame export, if configured).
SegmentResult cmd_segment(const PipelineConfig& cfg, std::ostream& log);
// Reads a clip manifest; writes <out>/trajectories.jsonl.
std::vector<ClipTrajectory> cmd_track(const PipelineConfig& cfg, const std::filesystem::path& manifest,
                                      std::ostream& log);
// Reads trajectories; writes <out>/deliveries.jsonl.
std::vector<DeliveryRecord> cmd_classify(const PipelineConfig& cfg, const std::filesystem::path& trajectories,
                                         std::ostream& log);

enum class ReportFormat { json, csv };

// Either a counts file ({"tp","fp","fn","tn"}) or a pair of boolean streams
// (whitespace separated 1/0 or true/false).
ConfusionMatrix load_counts(const std::filesystem::path& path);
std::vector<bool> load_bool_stream(const std::filesystem::path& path);
std::string cmd_eval(const ConfusionMatrix& cm, ReportFormat format);

struct BenchSpec {
    std::int64_t frames = 10000;
    int width = 640;
    int height = 360;
};

// Runs the segment pipeline on a generated match with the synthetic
// backend and reports timing together with a machine descriptor.
nlohmann::json cmd_bench(const PipelineConfig& cfg, const BenchSpec& spec, std::ostream& log);
nlohmann::json machine_descriptor();

// Bundled scenario names with their descriptions.
std::vector<std::pair<std::string, std::string>> cmd_scenarios();

// Exit codes: 0 success, 1 configuration error, 2 runtime error.
int run_cli(int argc, char** argv);

}  // namespace cricseg
