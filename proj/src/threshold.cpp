#include "nosetip/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace nosetip::threshold {

std::size_t Histogram::bin_of(double depth) const noexcept {
    if (!(max_depth > min_depth)) return 0;
    const double scaled = std::floor(255.0 * (depth - min_depth) / (max_depth - min_depth));
    return static_cast<std::size_t>(std::clamp(scaled, 0.0, 255.0));
}

std::uint64_t Histogram::total() const noexcept {
    return std::accumulate(bins.begin(), bins.end(), std::uint64_t{0});
}

Histogram build_histogram(const DepthMap& map) {
    Histogram h;
    bool any = false;
    for (std::size_t i = 0; i < map.size(); ++i) {
        if (map.validity()[i] == 0) continue;
        const double d = map.depths()[i];
        if (!any) {
            h.min_depth = h.max_depth = d;
            any = true;
        } else {
            h.min_depth = std::min(h.min_depth, d);
            h.max_depth = std::max(h.max_depth, d);
        }
    }
    if (!any) throw std::invalid_argument("cannot build a histogram: no valid pixels");
    for (std::size_t i = 0; i < map.size(); ++i)
        if (map.validity()[i] != 0) ++h.bins[h.bin_of(map.depths()[i])];
    return h;
}

std::size_t otsu_threshold(const Histogram& hist) {
    using boost::multiprecision::int256_t;

    // With n0, n1 the class counts and s0, s1 the class sums of bin indices,
    // N^2 * w0 w1 (mu0 - mu1)^2 = (n1 s0 - n0 s1)^2 / (n0 n1). The common N^2
    // factor does not move the argmax, so candidates are compared as exact
    // fractions D^2 / P.
    int256_t n_total = 0, s_total = 0;
    for (std::size_t i = 0; i < kBins; ++i) {
        n_total += hist.bins[i];
        s_total += int256_t(hist.bins[i]) * i;
    }
    if (n_total == 0) throw std::invalid_argument("otsu_threshold: empty histogram");

    std::optional<std::size_t> best;
    int256_t best_num = 0, best_den = 1;
    int256_t n0 = 0, s0 = 0;
    for (std::size_t t = 0; t + 1 < kBins; ++t) {
        n0 += hist.bins[t];
        s0 += int256_t(hist.bins[t]) * t;
        const int256_t n1 = n_total - n0;
        if (n0 == 0 || n1 == 0) continue;
        const int256_t s1 = s_total - s0;
        const int256_t d = n1 * s0 - n0 * s1;
        const int256_t num = d * d;
        const int256_t den = n0 * n1;
        if (!best || num * best_den > best_num * den) {
            best = t;
            best_num = num;
            best_den = den;
        }
    }
    if (best) return *best;

    // Single occupied bin.
    for (std::size_t i = 0; i < kBins; ++i)
        if (hist.bins[i] != 0) return i;
    return 0;
}

BinaryMask binarize(const DepthMap& map, std::size_t t, const Histogram& hist) {
    if (t >= kBins) throw std::invalid_argument("threshold must be a bin index 0..255");
    std::vector<std::uint8_t> bits(map.size(), 0);
    for (std::size_t i = 0; i < map.size(); ++i)
        if (map.validity()[i] != 0 && hist.bin_of(map.depths()[i]) > t) bits[i] = 1;
    return BinaryMask(map.width(), map.height(), std::move(bits));
}

}  // namespace nosetip::threshold
