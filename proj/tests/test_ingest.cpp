#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "nosetip/error.hpp"
#include "nosetip/ingest.hpp"
#include "oracles.hpp"

using namespace nosetip;
using namespace nosetip::ingest;

namespace {

DepthMap read(const std::string& text, DepthFileFormat f) {
    std::istringstream in(text, std::ios::binary);
    return read_depth_map(in, f);
}

std::string write(const DepthMap& m, DepthFileFormat f) {
    std::ostringstream out(std::ios::binary);
    write_depth_map(m, out, f);
    return out.str();
}

}  // namespace

TEST_CASE("ascii grid") {
    SUBCASE("constant map") {
        CHECK(read("3 3\n7 7 7\n7 7 7\n7 7 7\n", DepthFileFormat::ASCII_GRID) == DepthMap::filled(3, 3, 7));
    }
    SUBCASE("exact text of a 2x2 map") {
        CHECK(write(DepthMap::from_rows(2, 2, {1, 2, 3, 4}), DepthFileFormat::ASCII_GRID) == "2 2\n1 2\n3 4\n");
    }
    SUBCASE("nan in any case is invalid") {
        const auto m = read("2 2\nNaN 1.5\n-2 nan\n", DepthFileFormat::ASCII_GRID);
        CHECK_FALSE(m.valid(0, 0));
        CHECK_FALSE(m.valid(1, 1));
        CHECK(m.depth(0, 1) == 1.5);
        CHECK(m.depth(1, 0) == -2.0);
    }
    SUBCASE("errors name the line") {
        try {
            read("3 2\n1 2 3\n4 5\n", DepthFileFormat::ASCII_GRID);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.location() == 3);
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
}

TEST_CASE("xyz") {
    SUBCASE("four points grid into a 2x2 map") {
        CHECK(read("0 0 1\n1 0 2\n0 1 3\n1 1 4\n", DepthFileFormat::XYZ) ==
              DepthMap::from_rows(2, 2, {1, 2, 3, 4}));
    }
    SUBCASE("bounding box starts at the minimum coordinate") {
        const auto m = read("5 7 1\n6 9 2\n", DepthFileFormat::XYZ);
        CHECK(m.width() == 2);
        CHECK(m.height() == 3);
        CHECK(m.valid_count() == 2);
        CHECK(m.depth(2, 1) == 2.0);
    }
    SUBCASE("all-invalid map writes an empty body") {
        const DepthMap m(3, 2, std::vector<double>(6, 0.0), std::vector<std::uint8_t>(6, 0));
        CHECK(write(m, DepthFileFormat::XYZ) == "# grid 3 2\n");
        CHECK(read(write(m, DepthFileFormat::XYZ), DepthFileFormat::XYZ) == m);
    }
}

TEST_CASE("pgm16") {
    std::vector<double> d{1, 2, 3, 4, 5, 6, 7, 8, 65535};
    std::vector<std::uint8_t> v(9, 1);
    v[4] = 0;
    const DepthMap m(3, 3, d, v);
    const auto bytes = write(m, DepthFileFormat::PGM16);
    CHECK(bytes.substr(0, 15) == std::string("P5\n3 3\n65535\n\x00\x01", 15));
    const auto back = read(bytes, DepthFileFormat::PGM16);
    CHECK(back == m);
    CHECK_FALSE(back.valid(1, 1));

    SUBCASE("header comments are skipped") {
        std::string text = "P5\n# scanner dump\n1 1 # size\n65535\n";
        text += std::string("\x01\x00", 2);
        CHECK(read(text, DepthFileFormat::PGM16).depth(0, 0) == 256.0);
    }
    SUBCASE("quantization rounds to nearest") {
        const auto q = read(write(DepthMap::from_rows(3, 1, {1.4, 2.6, 100.5}), DepthFileFormat::PGM16),
                            DepthFileFormat::PGM16);
        CHECK(q == DepthMap::from_rows(3, 1, {1, 3, 101}));
    }
    SUBCASE("out of range depths are refused") {
        CHECK_THROWS_AS(write(DepthMap::from_rows(3, 1, {1, 0.2, 5}), DepthFileFormat::PGM16), std::range_error);
        CHECK_THROWS_AS(write(DepthMap::from_rows(3, 1, {1, 70000, 5}), DepthFileFormat::PGM16),
                        std::range_error);
    }
}

TEST_CASE("round trips on random maps") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> dim(1, 12);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = oracle::random_map(rng, dim(rng), dim(rng), 0.2, -1e3, 1e3);
        CHECK(read(write(m, DepthFileFormat::ASCII_GRID), DepthFileFormat::ASCII_GRID) == m);
        CHECK(read(write(m, DepthFileFormat::XYZ), DepthFileFormat::XYZ) == m);
    }
}

TEST_CASE("malformed inputs are rejected with a located error") {
    for (const auto& f : fixtures::malformed_inputs()) {
        CAPTURE(f.name);
        CHECK_THROWS_AS(read(f.bytes, f.format), ParseError);
    }
}

TEST_CASE("file helpers") {
    fixtures::TempDir dir;
    CHECK_THROWS_AS(load_depth_map(dir / "missing.grid", DepthFileFormat::ASCII_GRID), IoError);
    CHECK_THROWS_AS(save_depth_map(DepthMap::filled(3, 3, 1), dir / "no/such/dir/x.grid",
                                   DepthFileFormat::ASCII_GRID),
                    IoError);

    const auto m = DepthMap::from_rows(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9.25});
    save_depth_map(m, dir / "m.grid", DepthFileFormat::ASCII_GRID);
    CHECK(load_depth_map(dir / "m.grid", DepthFileFormat::ASCII_GRID) == m);

    SUBCASE("malformed file errors carry the path") {
        fixtures::TempDir d2;
        ingest::write_text_file(d2 / "bad.grid", "2 2\n1\n");
        try {
            load_depth_map(d2 / "bad.grid", DepthFileFormat::ASCII_GRID);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("bad.grid") != std::string::npos);
            CHECK(e.location() == 2);
        }
    }
}

TEST_CASE("landmark records") {
    fixtures::TempDir dir;
    const Landmark lm{1, 1, {1, 1, 5}, 45};
    const auto text = format_landmark(lm);
    CHECK(text.find("row=1\n") != std::string::npos);
    CHECK(text.find("col=1\n") != std::string::npos);
    CHECK(text.find("z=5\n") != std::string::npos);

    save_landmark(lm, dir / "a.txt");
    save_landmark(lm, dir / "b.txt");
    CHECK(fixtures::slurp(dir / "a.txt") == fixtures::slurp(dir / "b.txt"));
    CHECK(load_landmark(dir / "a.txt") == lm);

    const Landmark precise{7, 9, {9, 7, 0.1 + 0.2}, 1.0 / 3.0};
    CHECK(parse_landmark(format_landmark(precise)) == precise);
    CHECK_THROWS_AS(parse_landmark("row=1\ncol=2\n"), ParseError);
    CHECK_THROWS_AS(parse_landmark("row=a\ncol=2\nx=1\ny=1\nz=1\nscore=1\n"), ParseError);
}

TEST_CASE("format names") {
    CHECK(parse_format("pgm16") == DepthFileFormat::PGM16);
    CHECK(parse_format("grid") == DepthFileFormat::ASCII_GRID);
    CHECK(parse_format("XYZ") == DepthFileFormat::XYZ);
    CHECK_FALSE(parse_format("vrml").has_value());
}
