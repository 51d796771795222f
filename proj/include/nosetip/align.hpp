#pragma once

#include <array>
#include <span>
#include <vector>

#include "nosetip/core.hpp"

namespace nosetip::align {

/// Proper rotation (orthonormal, det = +1), row-major.
struct RotationMatrix {
    std::array<std::array<double, 3>, 3> m{};

    Point3 operator*(const Point3& p) const {
        return {m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
                m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
                m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z};
    }

    double determinant() const;
    /// max |(R^T R - I)_ij|
    double orthonormality_error() const;
};

/// Right-handed rotation by spec.theta about spec.axis.
RotationMatrix rotation_matrix(const RotationSpec& spec);

/// R (p - pivot) + pivot for every point, order preserved.
std::vector<Point3> align_cloud(std::span<const Point3> points, const Point3& pivot,
                                const RotationSpec& spec);

/// Bilateral symmetry of a cloud: minus the mean distance from each mirrored
/// point to its nearest neighbour in the cloud. The mirror plane passes
/// through the pivot and contains both `axis` and the viewing direction z:
/// x = pivot.x for rotations about Y or Z, y = pivot.y for rotations about X.
double symmetry_score(std::span<const Point3> points, const Point3& pivot, Axis axis);

/// Rotates the cloud about the pivot by every angle in `sweep` and returns
/// the rotation with the best symmetry score; ties go to the smallest angle.
/// Throws std::invalid_argument on an empty sweep or fewer than 10 points.
RotationSpec estimate_pose_by_symmetry(std::span<const Point3> points, const Point3& pivot,
                                       Axis axis, std::span<const double> sweep);

/// Angles start, start + step, ... up to stop inclusive (within step / 1e6).
/// Throws std::invalid_argument when step <= 0 or stop < start.
std::vector<double> make_sweep(double start, double stop, double step);

double degrees_to_radians(double deg);
double radians_to_degrees(double rad);

}  // namespace nosetip::align
