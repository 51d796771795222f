#pragma once

// Brute-force reference implementations used only by the tests. Each one
// takes the direct route from the definition and shares no code with the
// library path it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nosetip/core.hpp"

namespace oracle {

using boost::multiprecision::cpp_rational;

/// argmax over t of w0 w1 (mu0 - mu1)^2 using exact rationals, recomputing
/// both classes from scratch for every t. Smallest t wins ties; a histogram
/// with one occupied bin yields that bin.
inline std::size_t otsu(const std::array<std::uint64_t, 256>& bins) {
    using boost::multiprecision::cpp_int;
    cpp_int total = 0;
    for (auto b : bins) total += b;
    std::optional<std::size_t> best;
    cpp_rational best_var = -1;
    for (std::size_t t = 0; t < 256; ++t) {
        cpp_int n0 = 0, n1 = 0, s0 = 0, s1 = 0;
        for (std::size_t i = 0; i < 256; ++i) {
            if (i <= t) {
                n0 += bins[i];
                s0 += cpp_int(bins[i]) * i;
            } else {
                n1 += bins[i];
                s1 += cpp_int(bins[i]) * i;
            }
        }
        if (n0 == 0 || n1 == 0) continue;
        const cpp_rational w0(n0, total), w1(n1, total);
        const cpp_rational diff = cpp_rational(s0, n0) - cpp_rational(s1, n1);
        const cpp_rational var = w0 * w1 * diff * diff;
        if (var > best_var) {
            best_var = var;
            best = t;
        }
    }
    if (best) return *best;
    for (std::size_t i = 0; i < 256; ++i)
        if (bins[i] != 0) return i;
    return 0;
}

/// Expands every value into `weight` copies, sorts, and takes the element at
/// 1-based position ceil(W / 2).
inline double expanded_lower_median(const std::vector<double>& values,
                                    const std::vector<std::uint64_t>& weights) {
    std::vector<double> multiset;
    for (std::size_t i = 0; i < values.size(); ++i) multiset.insert(multiset.end(), weights[i], values[i]);
    std::sort(multiset.begin(), multiset.end());
    return multiset[(multiset.size() + 1) / 2 - 1];
}

/// Plain 3x3 median filter (lower median of the valid in-window pixels),
/// clamp-to-edge boundary, one pass.
inline nosetip::DepthMap plain_median_3x3(const nosetip::DepthMap& map) {
    const long w = static_cast<long>(map.width()), h = static_cast<long>(map.height());
    std::vector<double> out(map.depths().begin(), map.depths().end());
    for (long r = 0; r < h; ++r)
        for (long c = 0; c < w; ++c) {
            if (!map.valid(r, c)) continue;
            std::vector<double> win;
            for (long dr = -1; dr <= 1; ++dr)
                for (long dc = -1; dc <= 1; ++dc) {
                    const long rr = std::clamp(r + dr, 0L, h - 1), cc = std::clamp(c + dc, 0L, w - 1);
                    if (map.valid(rr, cc)) win.push_back(map.depth(rr, cc));
                }
            std::sort(win.begin(), win.end());
            out[r * w + c] = win[(win.size() + 1) / 2 - 1];
        }
    return nosetip::DepthMap(map.width(), map.height(), std::move(out),
                             {map.validity().begin(), map.validity().end()});
}

struct NoseTip {
    std::size_t row, col;
    double score;
};

/// Computes every eligible window sum first, then takes the maximum, then
/// the first row-major position attaining it.
inline std::optional<NoseTip> nose_tip(const nosetip::DepthMap& map, const nosetip::BinaryMask& mask) {
    struct Cand {
        std::size_t r, c;
        double s;
    };
    std::vector<Cand> cands;
    for (std::size_t r = 1; r + 1 < map.height(); ++r)
        for (std::size_t c = 1; c + 1 < map.width(); ++c) {
            bool ok = true;
            double s = 0.0;
            for (std::size_t rr = r - 1; rr <= r + 1; ++rr)
                for (std::size_t cc = c - 1; cc <= c + 1; ++cc) {
                    ok = ok && map.valid(rr, cc) && mask.at(rr, cc);
                    s += map.depth(rr, cc);
                }
            if (ok) cands.push_back({r, c, s});
        }
    if (cands.empty()) return std::nullopt;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& c : cands) best = std::max(best, c.s);
    for (const auto& c : cands)
        if (c.s == best) return NoseTip{c.r, c.c, c.s};
    return std::nullopt;
}

/// Minimizer of the weighted sum of angles (via acos of the clamped dot
/// product), earliest index on ties within `eps`.
inline std::size_t vector_median(const std::vector<nosetip::Point3>& n,
                                 const std::vector<std::uint32_t>& w, double eps = 1e-12) {
    std::vector<double> cost(n.size(), 0.0);
    for (std::size_t i = 0; i < n.size(); ++i)
        for (std::size_t j = 0; j < n.size(); ++j)
            cost[i] += w[j] * std::acos(std::clamp(nosetip::dot(n[i], n[j]), -1.0, 1.0));
    const double best = *std::min_element(cost.begin(), cost.end());
    for (std::size_t i = 0; i < n.size(); ++i)
        if (cost[i] <= best + eps) return i;
    return 0;
}

/// O(n^2) mirror nearest-neighbour symmetry score with mirror plane x = px.
inline double mirror_score_x(const std::vector<nosetip::Point3>& pts, double px) {
    double total = 0.0;
    for (const auto& p : pts) {
        const nosetip::Point3 m{2 * px - p.x, p.y, p.z};
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : pts) best = std::min(best, nosetip::distance(m, q));
        total += best;
    }
    return -total / static_cast<double>(pts.size());
}

inline nosetip::DepthMap random_map(std::mt19937_64& rng, std::size_t w, std::size_t h,
                                    double invalid_prob, double lo, double hi) {
    std::uniform_real_distribution<double> depth(lo, hi);
    std::bernoulli_distribution hole(invalid_prob);
    std::vector<double> d(w * h);
    std::vector<std::uint8_t> v(w * h);
    for (std::size_t i = 0; i < w * h; ++i) {
        d[i] = depth(rng);
        v[i] = hole(rng) ? 0 : 1;
    }
    return nosetip::DepthMap(w, h, std::move(d), std::move(v));
}

}  // namespace oracle
