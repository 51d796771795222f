#include "nosetip/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nosetip {

DepthMap::DepthMap(std::size_t width, std::size_t height, std::vector<double> depth,
                   std::vector<std::uint8_t> valid)
    : width_(width), height_(height), depth_(std::move(depth)), valid_(std::move(valid)) {
    if (width_ == 0 || height_ == 0)
        throw std::invalid_argument("depth map must have non-zero dimensions");
    if (depth_.size() != width_ * height_ || valid_.size() != width_ * height_)
        throw std::invalid_argument("depth map buffers do not match " + std::to_string(width_) +
                                    "x" + std::to_string(height_));
    for (std::size_t i = 0; i < depth_.size(); ++i) {
        if (valid_[i] != 0 && !std::isfinite(depth_[i]))
            throw std::invalid_argument("non-finite depth at valid pixel " + std::to_string(i));
        valid_[i] = valid_[i] != 0 ? 1 : 0;
    }
}

DepthMap DepthMap::filled(std::size_t width, std::size_t height, double value) {
    return DepthMap(width, height, std::vector<double>(width * height, value),
                    std::vector<std::uint8_t>(width * height, 1));
}

DepthMap DepthMap::from_rows(std::size_t width, std::size_t height, std::vector<double> depth) {
    return DepthMap(width, height, std::move(depth), std::vector<std::uint8_t>(width * height, 1));
}

std::size_t DepthMap::valid_count() const noexcept {
    return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

bool operator==(const DepthMap& a, const DepthMap& b) {
    if (a.width_ != b.width_ || a.height_ != b.height_ || a.valid_ != b.valid_) return false;
    for (std::size_t i = 0; i < a.depth_.size(); ++i)
        if (a.valid_[i] != 0 && a.depth_[i] != b.depth_[i]) return false;
    return true;
}

BinaryMask::BinaryMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
    if (bits_.size() != width_ * height_)
        throw std::invalid_argument("mask buffer does not match its dimensions");
    for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

BinaryMask BinaryMask::filled(std::size_t width, std::size_t height, bool value) {
    return BinaryMask(width, height, std::vector<std::uint8_t>(width * height, value ? 1 : 0));
}

std::size_t BinaryMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double norm(const Point3& a) { return std::sqrt(dot(a, a)); }

double distance(const Point3& a, const Point3& b) { return norm(a - b); }

char axis_name(Axis axis) {
    switch (axis) {
        case Axis::X: return 'x';
        case Axis::Y: return 'y';
        case Axis::Z: return 'z';
    }
    return '?';
}

std::vector<Point3> depth_map_to_point_cloud(const DepthMap& map) {
    std::vector<Point3> cloud;
    cloud.reserve(map.valid_count());
    for (std::size_t r = 0; r < map.height(); ++r)
        for (std::size_t c = 0; c < map.width(); ++c)
            if (map.valid(r, c))
                cloud.push_back({static_cast<double>(c), static_cast<double>(r), map.depth(r, c)});
    return cloud;
}

DepthMap apply_mask(const DepthMap& map, const BinaryMask& mask) {
    if (map.width() != mask.width() || map.height() != mask.height())
        throw std::invalid_argument("mask dimensions do not match depth map");
    std::vector<std::uint8_t> valid(map.validity().begin(), map.validity().end());
    auto bits = mask.bits();
    for (std::size_t i = 0; i < valid.size(); ++i) valid[i] = valid[i] & bits[i];
    return DepthMap(map.width(), map.height(), {map.depths().begin(), map.depths().end()},
                    std::move(valid));
}

}  // namespace nosetip
