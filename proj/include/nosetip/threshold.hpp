#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "nosetip/core.hpp"

namespace nosetip::threshold {

inline constexpr std::size_t kBins = 256;

/// Gray-level distribution of the valid depths, linearly quantized over
/// [min_depth, max_depth].
struct Histogram {
    std::array<std::uint64_t, kBins> bins{};
    double min_depth = 0.0;
    double max_depth = 0.0;

    /// floor(255 * (d - min) / (max - min)), clamped to 0..255; 0 when min == max.
    std::size_t bin_of(double depth) const noexcept;
    std::uint64_t total() const noexcept;

    friend bool operator==(const Histogram&, const Histogram&) = default;
};

/// Throws std::invalid_argument when the map has no valid pixel.
Histogram build_histogram(const DepthMap& map);

/// Otsu's threshold: the bin t maximizing the between-class variance
///   w0(t) w1(t) (mu0(t) - mu1(t))^2
/// with class 0 = bins <= t and class 1 = bins > t. Partitions leaving a class
/// empty are skipped and ties go to the smallest t. Scores are compared in
/// exact integer arithmetic, so equal-variance partitions always tie.
/// When every count sits in one bin, that bin is returned.
/// Throws std::invalid_argument on an empty histogram.
std::size_t otsu_threshold(const Histogram& hist);

/// Foreground iff the pixel is valid and its bin is strictly above t.
/// Throws std::invalid_argument if t is not a bin index.
BinaryMask binarize(const DepthMap& map, std::size_t t, const Histogram& hist);

}  // namespace nosetip::threshold
