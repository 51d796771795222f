#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nosetip/core.hpp"

namespace nosetip::smooth {

/// N x N x N structuring element of positive integer weights h(i, j, k).
///
/// Weights are stored row-wise with k fastest: h(i, j, k) lives at
/// ((i * N) + j) * N + k, where i runs along x (columns), j along y (rows) and
/// k along z (the depth layers of the window).
class WeightKernel {
public:
    /// Throws std::invalid_argument unless side is odd and >= 3, there are
    /// side^3 weights, and every weight is >= 1.
    WeightKernel(std::size_t side, std::vector<std::uint32_t> weights);

    static WeightKernel uniform(std::size_t side = 3);

    std::size_t side() const noexcept { return side_; }
    std::span<const std::uint32_t> weights() const noexcept { return weights_; }
    std::uint32_t at(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return weights_[(i * side_ + j) * side_ + k];
    }

    friend bool operator==(const WeightKernel&, const WeightKernel&) = default;

private:
    std::size_t side_;
    std::vector<std::uint32_t> weights_;
};

enum class Boundary {
    Clamp,  // out-of-range window cells read the nearest edge pixel
    Skip,   // out-of-range window cells contribute nothing
};

struct SmoothingConfig {
    WeightKernel kernel = WeightKernel::uniform(3);
    std::size_t iterations = 100;
    Boundary boundary = Boundary::Clamp;
};

/// Lower weighted median: the smallest value v whose cumulative weight
/// (over elements <= v) reaches half of the total weight. With 27 unit
/// weights this is the 14th smallest value.
///
/// Throws std::invalid_argument on empty input, mismatched lengths or a zero
/// weight.
double weighted_median(std::span<const double> values, std::span<const std::uint64_t> weights);

/// Iterated 3D weighted-median filter over a range image.
///
/// The cubic window is laid over the 2.5D grid by giving every in-window
/// valid pixel N samples of its depth, one per k-layer, weighted
/// h(i, j, 1..N). Each pixel's new depth is the weighted median of those
/// samples. Passes are double buffered, invalid pixels stay invalid and never
/// contribute.
///
/// Throws std::invalid_argument if the kernel is larger than the map or
/// iterations is zero.
DepthMap smooth_depth_map(const DepthMap& map, const SmoothingConfig& config);

}  // namespace nosetip::smooth
