#include "nosetip/smooth.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace nosetip::smooth {
namespace {

struct Sample {
    double value;
    std::uint64_t weight;
};

// Sorts in place; the buffer is scratch space owned by the caller.
double weighted_median_of(std::span<Sample> samples) {
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.value < b.value; });
    std::uint64_t total = 0;
    for (const auto& s : samples) total += s.weight;
    std::uint64_t cumulative = 0;
    for (const auto& s : samples) {
        cumulative += s.weight;
        if (2 * cumulative >= total) return s.value;
    }
    return samples.back().value;
}

}  // namespace

WeightKernel::WeightKernel(std::size_t side, std::vector<std::uint32_t> weights)
    : side_(side), weights_(std::move(weights)) {
    if (side_ < 3 || side_ % 2 == 0)
        throw std::invalid_argument("kernel side must be odd and >= 3, got " + std::to_string(side_));
    if (weights_.size() != side_ * side_ * side_)
        throw std::invalid_argument("kernel needs side^3 = " + std::to_string(side_ * side_ * side_) +
                                    " weights, got " + std::to_string(weights_.size()));
    if (std::any_of(weights_.begin(), weights_.end(), [](std::uint32_t w) { return w == 0; }))
        throw std::invalid_argument("kernel weights must be positive");
}

WeightKernel WeightKernel::uniform(std::size_t side) {
    return WeightKernel(side, std::vector<std::uint32_t>(side * side * side, 1));
}

double weighted_median(std::span<const double> values, std::span<const std::uint64_t> weights) {
    if (values.empty()) throw std::invalid_argument("weighted_median: empty input");
    if (values.size() != weights.size())
        throw std::invalid_argument("weighted_median: values and weights differ in length");
    std::vector<Sample> samples(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (weights[i] == 0) throw std::invalid_argument("weighted_median: weights must be positive");
        samples[i] = {values[i], weights[i]};
    }
    return weighted_median_of(samples);
}

DepthMap smooth_depth_map(const DepthMap& map, const SmoothingConfig& config) {
    const std::size_t n = config.kernel.side();
    if (n > std::min(map.width(), map.height()))
        throw std::invalid_argument("kernel side " + std::to_string(n) + " exceeds map size " +
                                    std::to_string(map.width()) + "x" + std::to_string(map.height()));
    if (config.iterations == 0) throw std::invalid_argument("iterations must be >= 1");

    // The N layers at a window cell all replicate the same depth, so their
    // weights merge into one sample without changing the median.
    std::vector<std::uint64_t> cell_weight(n * n, 0);  // indexed [dy * n + dx]
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) cell_weight[j * n + i] += config.kernel.at(i, j, k);

    const auto w = static_cast<long>(map.width());
    const auto h = static_cast<long>(map.height());
    const long half = static_cast<long>(n / 2);
    const auto valid = map.validity();

    std::vector<double> current(map.depths().begin(), map.depths().end());
    std::vector<double> next = current;
    std::vector<Sample> window(n * n);

    for (std::size_t pass = 0; pass < config.iterations; ++pass) {
        for (long r = 0; r < h; ++r) {
            for (long c = 0; c < w; ++c) {
                const std::size_t centre = static_cast<std::size_t>(r * w + c);
                if (valid[centre] == 0) continue;
                std::size_t count = 0;
                for (long dy = -half; dy <= half; ++dy) {
                    for (long dx = -half; dx <= half; ++dx) {
                        long rr = r + dy;
                        long cc = c + dx;
                        if (rr < 0 || rr >= h || cc < 0 || cc >= w) {
                            if (config.boundary == Boundary::Skip) continue;
                            rr = std::clamp(rr, 0L, h - 1);
                            cc = std::clamp(cc, 0L, w - 1);
                        }
                        const std::size_t idx = static_cast<std::size_t>(rr * w + cc);
                        if (valid[idx] == 0) continue;
                        window[count++] = {current[idx],
                                           cell_weight[static_cast<std::size_t>(dy + half) * n +
                                                       static_cast<std::size_t>(dx + half)]};
                    }
                }
                next[centre] = weighted_median_of(std::span(window.data(), count));
            }
        }
        std::swap(current, next);
    }
    return DepthMap(map.width(), map.height(), std::move(current),
                    {valid.begin(), valid.end()});
}

}  // namespace nosetip::smooth
