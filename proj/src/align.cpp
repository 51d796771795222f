#include "nosetip/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

namespace nosetip::align {
namespace {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;
using BPoint = bg::model::point<double, 3, bg::cs::cartesian>;

BPoint to_boost(const Point3& p) { return BPoint(p.x, p.y, p.z); }

Point3 mirror(const Point3& p, const Point3& pivot, Axis axis) {
    if (axis == Axis::X) return {p.x, 2.0 * pivot.y - p.y, p.z};
    return {2.0 * pivot.x - p.x, p.y, p.z};
}

}  // namespace

double RotationMatrix::determinant() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double RotationMatrix::orthonormality_error() const {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += m[k][i] * m[k][j];
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

RotationMatrix rotation_matrix(const RotationSpec& spec) {
    const double c = std::cos(spec.theta);
    const double s = std::sin(spec.theta);
    switch (spec.axis) {
        case Axis::X: return {{{{1, 0, 0}, {0, c, -s}, {0, s, c}}}};
        case Axis::Y: return {{{{c, 0, s}, {0, 1, 0}, {-s, 0, c}}}};
        case Axis::Z: return {{{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}}};
    }
    throw std::invalid_argument("unknown rotation axis");
}

std::vector<Point3> align_cloud(std::span<const Point3> points, const Point3& pivot,
                                const RotationSpec& spec) {
    const RotationMatrix r = rotation_matrix(spec);
    std::vector<Point3> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(r * (p - pivot) + pivot);
    return out;
}

double symmetry_score(std::span<const Point3> points, const Point3& pivot, Axis axis) {
    if (points.empty()) return 0.0;
    std::vector<BPoint> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.push_back(to_boost(p));
    const bgi::rtree<BPoint, bgi::quadratic<16>> tree(pts.begin(), pts.end());

    double total = 0.0;
    std::vector<BPoint> hit;
    for (const auto& p : points) {
        const BPoint q = to_boost(mirror(p, pivot, axis));
        hit.clear();
        tree.query(bgi::nearest(q, 1), std::back_inserter(hit));
        total += bg::distance(q, hit.front());
    }
    return -total / static_cast<double>(points.size());
}

RotationSpec estimate_pose_by_symmetry(std::span<const Point3> points, const Point3& pivot,
                                       Axis axis, std::span<const double> sweep) {
    if (sweep.empty()) throw std::invalid_argument("symmetry sweep is empty");
    if (points.size() < 10)
        throw std::invalid_argument("symmetry estimation needs at least 10 points");

    std::vector<double> angles(sweep.begin(), sweep.end());
    std::sort(angles.begin(), angles.end());

    double best_angle = angles.front();
    double best_score = -std::numeric_limits<double>::infinity();
    for (double theta : angles) {
        const auto rotated = align_cloud(points, pivot, {axis, theta});
        const double score = symmetry_score(rotated, pivot, axis);
        if (score > best_score) {
            best_score = score;
            best_angle = theta;
        }
    }
    return {axis, best_angle};
}

std::vector<double> make_sweep(double start, double stop, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
    if (stop < start) throw std::invalid_argument("sweep stop is below start");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-6));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }
double radians_to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace nosetip::align
