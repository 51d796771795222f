#include <doctest.h>

#include <random>

#include "nosetip/threshold.hpp"
#include "oracles.hpp"

using namespace nosetip;
using namespace nosetip::threshold;

namespace {

Histogram with_bins(std::initializer_list<std::pair<std::size_t, std::uint64_t>> entries) {
    Histogram h;
    for (auto [bin, n] : entries) h.bins[bin] = n;
    return h;
}

Histogram random_histogram(std::mt19937_64& rng) {
    Histogram h;
    std::uniform_int_distribution<int> occupied(1, 12);
    std::uniform_int_distribution<std::size_t> bin(0, kBins - 1);
    std::uniform_int_distribution<std::uint64_t> count(1, 5000);
    const int k = occupied(rng);
    for (int i = 0; i < k; ++i) h.bins[bin(rng)] += count(rng);
    return h;
}

}  // namespace

TEST_CASE("histogram") {
    SUBCASE("constant map lands in bin 0") {
        const auto h = build_histogram(DepthMap::filled(4, 3, 7.5));
        CHECK(h.bins[0] == 12);
        CHECK(h.total() == 12);
        CHECK(h.min_depth == 7.5);
        CHECK(h.max_depth == 7.5);
    }
    SUBCASE("extremes go to the first and last bin") {
        const auto h = build_histogram(DepthMap::from_rows(3, 1, {0.0, 0.5, 1.0}));
        CHECK(h.bins[0] == 1);
        CHECK(h.bins[127] == 1);
        CHECK(h.bins[255] == 1);
    }
    SUBCASE("invalid pixels are not counted") {
        const DepthMap m(3, 1, {1.0, 1e9, 2.0}, {1, 0, 1});
        const auto h = build_histogram(m);
        CHECK(h.total() == 2);
        CHECK(h.max_depth == 2.0);
    }
    SUBCASE("no valid pixels") {
        CHECK_THROWS(build_histogram(DepthMap(2, 2, std::vector<double>(4, 0.0), std::vector<std::uint8_t>(4, 0))));
    }
}

TEST_CASE("otsu examples") {
    CHECK(otsu_threshold(with_bins({{10, 50}, {200, 50}})) == 10);
    CHECK(otsu_threshold(with_bins({{0, 100}})) == 0);
    CHECK(otsu_threshold(with_bins({{0, 3}, {255, 1}})) == 0);
    CHECK(otsu_threshold(with_bins({{17, 4}})) == 17);
    CHECK(otsu_threshold(with_bins({{0, 1}, {1, 1}, {2, 1}, {3, 1}})) == 1);
}

TEST_CASE("otsu matches the exact oracle") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const auto h = random_histogram(rng);
        REQUIRE(otsu_threshold(h) == oracle::otsu(h.bins));
    }
}

TEST_CASE("otsu is invariant under scaling of the counts") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::uint64_t> factor(2, 1000);
    for (int trial = 0; trial < 200; ++trial) {
        const auto h = random_histogram(rng);
        auto scaled = h;
        const auto f = factor(rng);
        for (auto& b : scaled.bins) b *= f;
        REQUIRE(otsu_threshold(scaled) == otsu_threshold(h));
    }
}

TEST_CASE("binarize") {
    const auto bimodal = DepthMap::from_rows(4, 2, {1, 1, 9, 9, 1, 9, 9, 1});
    const auto h = build_histogram(bimodal);
    const auto t = otsu_threshold(h);
    const auto mask = binarize(bimodal, t, h);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 4; ++c) CHECK(mask.at(r, c) == (bimodal.depth(r, c) == 9));

    CHECK(binarize(bimodal, 255, h).count() == 0);
    const auto flat = DepthMap::filled(3, 3, 5);
    CHECK(binarize(flat, 0, build_histogram(flat)).count() == 0);
    CHECK_THROWS_AS(binarize(bimodal, 256, h), std::invalid_argument);
}

TEST_CASE("binarize partitions the valid pixels") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = oracle::random_map(rng, 13, 9, 0.25, -50, 50);
        if (m.valid_count() == 0) continue;
        const auto h = build_histogram(m);
        const auto t = otsu_threshold(h);
        const auto fg = binarize(m, t, h);
        std::size_t below = 0;
        for (std::size_t r = 0; r < m.height(); ++r)
            for (std::size_t c = 0; c < m.width(); ++c) {
                if (!m.valid(r, c)) {
                    CHECK_FALSE(fg.at(r, c));
                    continue;
                }
                const bool above = h.bin_of(m.depth(r, c)) > t;
                CHECK(fg.at(r, c) == above);
                below += above ? 0 : 1;
            }
        CHECK(fg.count() + below == m.valid_count());
    }
}
