#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nosetip/core.hpp"
#include "nosetip/smooth.hpp"

namespace nosetip::synth {

/// Parameters of the synthetic range face.
///
/// The face is an ellipse centred on the nose with semi-axes 0.36 * width
/// (columns) and 0.42 * height (rows). Inside it the depth is
///   base_depth + dome_amplitude * (1 - rho^2) + nose_height * exp(-d^2 / (2 nose_sigma^2))
/// where rho is the normalized elliptical radius and d the pixel distance to
/// the nose. Outside it the depth is background_depth.
struct FaceParams {
    std::size_t width = 64;
    std::size_t height = 64;
    std::size_t nose_row = 32;
    std::size_t nose_col = 32;
    double nose_height = 15.0;
    double nose_sigma = 3.0;
    double base_depth = 100.0;
    double dome_amplitude = 15.0;
    double background_depth = 20.0;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct NoiseParams {
    double spike_fraction = 0.0;  // of the valid pixels, in [0, 0.2]
    double spike_amplitude = 0.0;
    double gaussian_sigma = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SyntheticFace {
    DepthMap map;
    Landmark truth;
};

/// Renders a face. With a pose, the surface is rotated about the nose tip,
/// supersampled 4x4 per pixel and z-buffered back onto the grid. Cells hit by
/// no face sample show the static background when they connect to the grid
/// border, otherwise they are self-occlusion holes and become invalid.
///
/// Throws std::invalid_argument for bad params and Error when the pose is
/// 90 degrees or more or the nose window is not fully visible.
SyntheticFace generate_face(const FaceParams& params, const std::optional<RotationSpec>& pose = {});

/// Adds N(0, gaussian_sigma) to every valid pixel, then raises
/// round(spike_fraction * valid_count) distinct valid pixels by
/// spike_amplitude. The validity mask is untouched.
DepthMap inject_noise(const DepthMap& map, const NoiseParams& noise);

/// SplitMix64 step, used to derive independent per-face seeds.
std::uint64_t mix_seed(std::uint64_t x);

using PoseSet = std::vector<std::optional<RotationSpec>>;

/// Frontal plus the tested viewpoints: Y at +-30, +-38, +-40 degrees;
/// Z at +-18, +-30, +-38, +-40; X at +-5, +-18, +-40.
PoseSet standard_pose_set();

/// Comma-separated bucket list: "frontal", or an axis letter followed by a
/// signed angle in degrees ("y+30", "z-18", "x5"). "standard" expands to
/// standard_pose_set(). Throws std::invalid_argument on malformed input.
PoseSet parse_pose_set(std::string_view spec);

std::string pose_label(const std::optional<RotationSpec>& pose);

struct BucketResult {
    std::optional<RotationSpec> pose;
    std::size_t count = 0;
    std::size_t correct_unsmoothed = 0;
    std::size_t correct_smoothed = 0;
};

struct BenchmarkReport {
    std::size_t faces_per_bucket = 0;
    std::size_t kernel_side = 0;
    std::size_t iterations = 0;
    smooth::Boundary boundary = smooth::Boundary::Clamp;
    double tolerance_px = 0.0;
    NoiseParams noise;
    std::vector<BucketResult> buckets;

    std::size_t total() const;
    std::size_t total_correct_unsmoothed() const;
    std::size_t total_correct_smoothed() const;
};

struct BenchmarkOptions {
    /// Geometry of face 0; later faces jitter the nose position, height and
    /// width around it when `jitter` is set.
    FaceParams face;
    bool jitter = true;
    /// Worker threads; 0 picks the hardware concurrency. Results do not
    /// depend on this value.
    unsigned threads = 0;
};

/// For every bucket, renders n_faces noisy faces and localizes the nose with
/// and without smoothing. A detection is correct when it lies within
/// tolerance_px (Euclidean, in pixels) of the ground truth; a detection error
/// counts as a miss. An empty pose set means a single frontal bucket.
/// Throws std::invalid_argument when n_faces is zero or a pose reaches 90
/// degrees.
BenchmarkReport run_benchmark(std::size_t n_faces, const PoseSet& pose_set, const NoiseParams& noise,
                              const smooth::SmoothingConfig& config, double tolerance_px,
                              const BenchmarkOptions& options = {});

/// Success percentage in hundredths of a percent, rounded half up; the
/// failure percentage is its complement so the two always sum to 100.00.
std::uint32_t success_centi_percent(std::size_t correct, std::size_t count);
std::string format_percent(std::uint32_t centi);

/// Header "bucket,axis,angle_deg,arm,count,correct,success_pct,failure_pct"
/// followed by one row per bucket per arm (unsmoothed first).
std::string report_csv(const BenchmarkReport& report);

/// Key=value run parameters followed by one line per bucket and arm and the
/// overall totals.
std::string report_summary(const BenchmarkReport& report);

}  // namespace nosetip::synth
