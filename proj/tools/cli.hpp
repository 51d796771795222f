#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nosetip/core.hpp"
#include "nosetip/ingest.hpp"
#include "nosetip/smooth.hpp"
#include "nosetip/synth.hpp"

namespace nosetip::cli {

struct SweepSpec {
    double start_deg = -45.0;
    double stop_deg = 45.0;
    double step_deg = 1.0;
};

/// Parses "START:STOP:STEP" in degrees.
SweepSpec parse_sweep(const std::string& text);

struct PipelineConfig {
    std::filesystem::path input;
    ingest::DepthFileFormat format = ingest::DepthFileFormat::ASCII_GRID;
    bool smoothing = true;
    smooth::SmoothingConfig smoothing_config;
    std::optional<Axis> align_axis;
    SweepSpec sweep;
    std::filesystem::path out_landmark;
    std::filesystem::path out_smoothed;
    std::filesystem::path out_aligned;
    ingest::DepthFileFormat out_format = ingest::DepthFileFormat::ASCII_GRID;
    std::filesystem::path dump_dir;
    /// Optional ground-truth record; the summary then reports whether the
    /// detection lies within tolerance_px of it.
    std::filesystem::path truth;
    double tolerance_px = 3.0;

    void validate() const;
};

struct SynthConfig {
    synth::FaceParams face;
    std::optional<Axis> pose_axis;
    double pose_deg = 0.0;
    synth::NoiseParams noise;
    std::filesystem::path out;
    std::filesystem::path out_landmark;  // defaults to "<out>.landmark.txt"
    ingest::DepthFileFormat format = ingest::DepthFileFormat::ASCII_GRID;
};

struct BenchConfig {
    std::size_t faces = 200;
    std::string poses = "frontal";
    double tolerance_px = 3.0;
    synth::NoiseParams noise{0.05, 45.0, 0.0, 1};
    smooth::SmoothingConfig smoothing;
    synth::BenchmarkOptions options;
    std::filesystem::path out_csv;
    std::filesystem::path out_summary;
};

/// Load, threshold, mask, optionally smooth, detect and optionally align.
/// Returns the process exit status; diagnostics go to `err` prefixed with the
/// failing stage.
int cmd_detect(const PipelineConfig& config, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchConfig& config, std::ostream& out, std::ostream& err);

/// Full command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nosetip::cli
