#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "nosetip/ingest.hpp"

namespace fixtures {

struct Malformed {
    const char* name;
    nosetip::ingest::DepthFileFormat format;
    std::string bytes;
};

inline std::string pgm_bytes(std::string header, std::size_t samples, unsigned value = 0x0101) {
    for (std::size_t i = 0; i < samples; ++i) {
        header.push_back(static_cast<char>(value >> 8));
        header.push_back(static_cast<char>(value & 0xff));
    }
    return header;
}

/// Twenty broken inputs covering every rejection path of the three loaders.
inline std::vector<Malformed> malformed_inputs() {
    using F = nosetip::ingest::DepthFileFormat;
    return {
        {"grid: empty file", F::ASCII_GRID, ""},
        {"grid: header with one token", F::ASCII_GRID, "3\n1 2 3\n"},
        {"grid: non-numeric header", F::ASCII_GRID, "three 3\n"},
        {"grid: zero width", F::ASCII_GRID, "0 3\n"},
        {"grid: short row", F::ASCII_GRID, "3 2\n1 2 3\n4 5\n"},
        {"grid: too few rows", F::ASCII_GRID, "2 3\n1 2\n3 4\n"},
        {"grid: extra row", F::ASCII_GRID, "2 1\n1 2\n3 4\n"},
        {"grid: bad token", F::ASCII_GRID, "2 1\n1 x2\n"},
        {"grid: infinite depth", F::ASCII_GRID, "2 1\n1 inf\n"},
        {"xyz: two columns", F::XYZ, "0 0\n"},
        {"xyz: fractional x", F::XYZ, "0.5 0 1\n"},
        {"xyz: garbage number", F::XYZ, "0 0 abc\n"},
        {"xyz: duplicate cell", F::XYZ, "0 0 1\n0 0 2\n"},
        {"xyz: outside declared grid", F::XYZ, "# grid 2 2\n2 0 1\n"},
        {"xyz: no points, no header", F::XYZ, "\n\n"},
        {"xyz: malformed grid header", F::XYZ, "# grid 2\n0 0 1\n"},
        {"pgm16: wrong magic", F::PGM16, pgm_bytes("P2\n2 2\n65535\n", 4)},
        {"pgm16: 8-bit maxval", F::PGM16, pgm_bytes("P5\n2 2\n255\n", 4)},
        {"pgm16: truncated pixels", F::PGM16, pgm_bytes("P5\n2 2\n65535\n", 3)},
        {"pgm16: sample above maxval", F::PGM16, pgm_bytes("P5\n2 2\n1000\n", 4, 0x1000)},
    };
}

/// Directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("nosetip-test-" + std::to_string(rd()) + "-" +
                 std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace fixtures
