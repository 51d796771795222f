#include "nosetip/landmark.hpp"

#include <optional>
#include <stdexcept>

#include "nosetip/error.hpp"

namespace nosetip::landmark {

Landmark find_nose_tip(const DepthMap& map, const BinaryMask& mask) {
    if (map.width() != mask.width() || map.height() != mask.height())
        throw std::invalid_argument("mask dimensions do not match depth map");

    const auto usable = [&](std::size_t r, std::size_t c) { return map.valid(r, c) && mask.at(r, c); };

    std::optional<Landmark> best;
    for (std::size_t r = 1; r + 1 < map.height(); ++r) {
        for (std::size_t c = 1; c + 1 < map.width(); ++c) {
            double sum = 0.0;
            bool eligible = true;
            for (std::size_t rr = r - 1; rr <= r + 1 && eligible; ++rr)
                for (std::size_t cc = c - 1; cc <= c + 1; ++cc) {
                    if (!usable(rr, cc)) {
                        eligible = false;
                        break;
                    }
                    sum += map.depth(rr, cc);
                }
            if (!eligible) continue;
            if (!best || sum > best->score)
                best = Landmark{r, c, {static_cast<double>(c), static_cast<double>(r), map.depth(r, c)},
                                sum};
        }
    }
    if (!best) throw Error("no pixel has a fully valid foreground 3x3 window");
    return *best;
}

std::pair<Landmark, Landmark> find_nose_tip_unsmoothed_vs_smoothed(
    const DepthMap& map, const BinaryMask& mask, const smooth::SmoothingConfig& config) {
    const DepthMap masked = apply_mask(map, mask);
    const Landmark raw = find_nose_tip(masked, mask);
    const Landmark smoothed = find_nose_tip(smooth::smooth_depth_map(masked, config), mask);
    return {raw, smoothed};
}

}  // namespace nosetip::landmark
