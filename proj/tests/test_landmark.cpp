#include <doctest.h>

#include <cmath>
#include <random>

#include "nosetip/error.hpp"
#include "nosetip/landmark.hpp"
#include "nosetip/synth.hpp"
#include "nosetip/threshold.hpp"
#include "oracles.hpp"

using namespace nosetip;
using namespace nosetip::landmark;

namespace {

BinaryMask all(const DepthMap& m) { return BinaryMask::filled(m.width(), m.height(), true); }

BinaryMask otsu_mask(const DepthMap& m) {
    const auto h = threshold::build_histogram(m);
    return threshold::binarize(m, threshold::otsu_threshold(h), h);
}

smooth::SmoothingConfig short_run() {
    smooth::SmoothingConfig c;
    c.iterations = 10;
    return c;
}

double pixel_distance(const Landmark& a, const Landmark& b) {
    return std::hypot(static_cast<double>(a.row) - static_cast<double>(b.row),
                      static_cast<double>(a.col) - static_cast<double>(b.col));
}

}  // namespace

TEST_CASE("constant map picks the first interior pixel") {
    const auto m = DepthMap::filled(5, 5, 3.0);
    const auto lm = find_nose_tip(m, all(m));
    CHECK(lm.row == 1);
    CHECK(lm.col == 1);
    CHECK(lm.score == 27.0);
    CHECK(lm.point == Point3{1, 1, 3});
}

TEST_CASE("a lone spike ties every window that covers it") {
    std::vector<double> d(25, 1.0);
    d[12] = 10.0;
    const auto m = DepthMap::from_rows(5, 5, d);
    const auto lm = find_nose_tip(m, all(m));
    CHECK(lm.row == 1);
    CHECK(lm.col == 1);
    CHECK(lm.score == 18.0);
}

TEST_CASE("a peaked surface has a unique maximum at its apex") {
    std::vector<double> d(25);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) d[r * 5 + c] = 10.0 - ((r - 2) * (r - 2) + (c - 2) * (c - 2));
    const auto m = DepthMap::from_rows(5, 5, d);
    const auto lm = find_nose_tip(m, all(m));
    CHECK(lm.row == 2);
    CHECK(lm.col == 2);
    CHECK(lm.point.z == 10.0);
}

TEST_CASE("mask and validity restrict the candidates") {
    std::vector<double> d(25, 1.0);
    d[6] = 50.0;
    std::vector<std::uint8_t> v(25, 1);
    v[0] = 0;
    const DepthMap m(5, 5, d, v);
    auto lm = find_nose_tip(m, all(m));
    CHECK((lm.row == 1 && lm.col == 2));

    std::vector<std::uint8_t> bits(25, 1);
    bits[13] = 0;
    lm = find_nose_tip(m, BinaryMask(5, 5, bits));
    CHECK((lm.row == 2 && lm.col == 1));

    CHECK_THROWS_AS(find_nose_tip(m, BinaryMask::filled(5, 5, false)), Error);
    CHECK_THROWS_AS(find_nose_tip(DepthMap::filled(2, 2, 1), BinaryMask::filled(2, 2, true)), Error);
    CHECK_THROWS_AS(find_nose_tip(m, BinaryMask::filled(4, 5, true)), std::invalid_argument);
}

TEST_CASE("detector matches the exhaustive oracle") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> depth(0, 20);
    std::bernoulli_distribution masked(0.1);
    int found = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto m = oracle::random_map(rng, 20, 20, 0.05, 0, 1);
        std::vector<double> d(400);
        std::vector<std::uint8_t> bits(400);
        for (std::size_t i = 0; i < 400; ++i) {
            d[i] = depth(rng);
            bits[i] = masked(rng) ? 0 : 1;
        }
        m = DepthMap(20, 20, d, {m.validity().begin(), m.validity().end()});
        const BinaryMask mask(20, 20, bits);
        const auto want = oracle::nose_tip(m, mask);
        if (!want) {
            CHECK_THROWS_AS(find_nose_tip(m, mask), Error);
            continue;
        }
        ++found;
        const auto got = find_nose_tip(m, mask);
        REQUIRE(got.row == want->row);
        REQUIRE(got.col == want->col);
        REQUIRE(got.score == want->score);
        double s = 0;
        for (std::size_t r = got.row - 1; r <= got.row + 1; ++r)
            for (std::size_t c = got.col - 1; c <= got.col + 1; ++c) s += m.depth(r, c);
        CHECK(s == got.score);

        std::vector<double> shifted(d);
        for (auto& x : shifted) x += 7;
        const DepthMap m2(20, 20, shifted, {m.validity().begin(), m.validity().end()});
        const auto moved = find_nose_tip(m2, mask);
        CHECK(moved.row == got.row);
        CHECK(moved.col == got.col);
        CHECK(moved.score == got.score + 63);
    }
    CHECK(found > 250);
}

TEST_CASE("smoothed and unsmoothed detection") {
    SUBCASE("clean face: both arms agree within a pixel") {
        const auto face = synth::generate_face({});
        const auto [raw, sm] = find_nose_tip_unsmoothed_vs_smoothed(face.map, otsu_mask(face.map), short_run());
        CHECK(pixel_distance(raw, face.truth) <= 1.0);
        CHECK(pixel_distance(sm, face.truth) <= 1.0);
    }
    SUBCASE("a spike on the cheek only fools the unsmoothed arm") {
        const auto face = synth::generate_face({});
        std::vector<double> d(face.map.depths().begin(), face.map.depths().end());
        d[face.map.index(20, 20)] += 300.0;
        const DepthMap spiked(face.map.width(), face.map.height(), d,
                              {face.map.validity().begin(), face.map.validity().end()});
        const auto [raw, sm] = find_nose_tip_unsmoothed_vs_smoothed(spiked, otsu_mask(spiked), short_run());
        CHECK(std::abs(static_cast<double>(raw.row) - 20) <= 1);
        CHECK(std::abs(static_cast<double>(raw.col) - 20) <= 1);
        CHECK(pixel_distance(sm, face.truth) <= 1.0);
    }
    SUBCASE("constant map: identical landmarks") {
        const auto m = DepthMap::filled(7, 7, 4.0);
        const auto [raw, sm] = find_nose_tip_unsmoothed_vs_smoothed(m, all(m), short_run());
        CHECK(raw == sm);
    }
}
