#pragma once

#include <utility>

#include "nosetip/core.hpp"
#include "nosetip/smooth.hpp"

namespace nosetip::landmark {

/// Maximum-intensity nose-tip search.
///
/// Scans interior pixels row by row. A pixel is a candidate when its whole
/// 3x3 window is valid and foreground; its score is the sum of the nine
/// depths. The first candidate reaching the maximum score wins.
///
/// Throws Error when no pixel is eligible and std::invalid_argument on a
/// dimension mismatch.
Landmark find_nose_tip(const DepthMap& map, const BinaryMask& mask);

/// Runs find_nose_tip on the masked map and on its smoothed version, both
/// with the same mask. Returns {unsmoothed, smoothed}.
std::pair<Landmark, Landmark> find_nose_tip_unsmoothed_vs_smoothed(
    const DepthMap& map, const BinaryMask& mask, const smooth::SmoothingConfig& config);

}  // namespace nosetip::landmark
