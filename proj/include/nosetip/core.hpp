#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nosetip {

/// Range image z = f(x, y) on a unit pixel grid with a validity mask.
///
/// Depth follows the camera-distance convention: a larger value is closer to
/// the sensor, so the nose tip of a frontal face carries the highest value.
/// Storage is row-major; pixel (row, col) maps to the 3D point
/// (x = col, y = row, z = depth).
class DepthMap {
public:
    /// Throws std::invalid_argument when the buffers do not match the
    /// dimensions, a dimension is zero, or a valid pixel is non-finite.
    DepthMap(std::size_t width, std::size_t height, std::vector<double> depth,
             std::vector<std::uint8_t> valid);

    /// All-valid map filled with `value`.
    static DepthMap filled(std::size_t width, std::size_t height, double value);

    /// All-valid map from row-major depth values.
    static DepthMap from_rows(std::size_t width, std::size_t height,
                              std::vector<double> depth);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return depth_.size(); }

    std::size_t index(std::size_t row, std::size_t col) const noexcept {
        return row * width_ + col;
    }
    double depth(std::size_t row, std::size_t col) const noexcept {
        return depth_[index(row, col)];
    }
    bool valid(std::size_t row, std::size_t col) const noexcept {
        return valid_[index(row, col)] != 0;
    }

    std::span<const double> depths() const noexcept { return depth_; }
    std::span<const std::uint8_t> validity() const noexcept { return valid_; }

    std::size_t valid_count() const noexcept;

    /// Equal dimensions, equal validity, and equal depth at every valid pixel.
    /// Depth stored under an invalid pixel carries no data and is ignored.
    friend bool operator==(const DepthMap& a, const DepthMap& b);

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> depth_;
    std::vector<std::uint8_t> valid_;
};

/// Per-pixel foreground flag (true = foreground).
class BinaryMask {
public:
    BinaryMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits);

    static BinaryMask filled(std::size_t width, std::size_t height, bool value);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }

    bool at(std::size_t row, std::size_t col) const noexcept {
        return bits_[row * width_ + col] != 0;
    }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    std::size_t count() const noexcept;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> bits_;
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;
};

inline Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator*(double s, const Point3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(const Point3& a, const Point3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(const Point3& a);
double distance(const Point3& a, const Point3& b);

/// Detected (or ground-truth) nose tip.
struct Landmark {
    std::size_t row = 0;
    std::size_t col = 0;
    Point3 point;
    /// Sum of the 3x3 depth window centred on (row, col).
    double score = 0.0;

    friend bool operator==(const Landmark&, const Landmark&) = default;
};

enum class Axis { X, Y, Z };

struct RotationSpec {
    Axis axis = Axis::Y;
    double theta = 0.0;  // radians

    friend bool operator==(const RotationSpec&, const RotationSpec&) = default;
};

char axis_name(Axis axis);

/// One point per valid pixel, row-major, (x = col, y = row, z = depth).
std::vector<Point3> depth_map_to_point_cloud(const DepthMap& map);

/// Restricts validity to the foreground of `mask`; depth values are untouched.
/// Throws std::invalid_argument on dimension mismatch.
DepthMap apply_mask(const DepthMap& map, const BinaryMask& mask);

}  // namespace nosetip
