#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "nosetip/core.hpp"

namespace nosetip::smooth {

using Face = std::array<std::size_t, 3>;

/// Indexed triangle mesh with consistently oriented faces.
class TriangleMesh {
public:
    /// Throws std::invalid_argument on out-of-range indices, repeated indices
    /// within a face, or a directed edge used by two faces (inconsistent
    /// orientation or non-manifold edge).
    TriangleMesh(std::vector<Point3> vertices, std::vector<Face> faces);

    const std::vector<Point3>& vertices() const noexcept { return vertices_; }
    const std::vector<Face>& faces() const noexcept { return faces_; }

    Point3 normal(std::size_t face) const;  // unit; zero vector for a degenerate face
    double area(std::size_t face) const;
    Point3 centroid(std::size_t face) const;

    friend bool operator==(const TriangleMesh&, const TriangleMesh&) = default;

private:
    std::vector<Point3> vertices_;
    std::vector<Face> faces_;
};

/// Weights of the median-normal vote. Defaults follow the unit weighting of
/// both neighbour rings.
struct MedianWeights {
    std::uint32_t self = 1;
    std::uint32_t edge = 1;
    std::uint32_t vertex = 1;
};

/// Faces sharing an edge with T, faces sharing only a vertex with T, and the
/// vote weight of each entry (parallel to edge_neighbors followed by
/// vertex_neighbors). T itself appears in neither list.
struct TriangleNeighborhood {
    std::vector<std::size_t> edge_neighbors;
    std::vector<std::size_t> vertex_neighbors;
    std::vector<std::uint32_t> weights;
};

std::vector<TriangleNeighborhood> build_neighborhoods(const TriangleMesh& mesh,
                                                      const MedianWeights& weights = {});

/// Angle between two unit vectors, computed as atan2(|a x b|, a . b).
double angular_distance(const Point3& a, const Point3& b);

/// Vector weighted median: the candidate minimizing the weighted sum of
/// angular distances to all candidates. Ties go to the earliest candidate.
/// Returns an index into `normals`.
std::size_t vector_median(const std::vector<Point3>& normals,
                          const std::vector<std::uint32_t>& weights);

/// Median normal of every face over N_e(T) + N_v(T) + {T}, candidates visited
/// in ascending face index. Throws Error naming the first zero-area face.
std::vector<Point3> median_normals(const TriangleMesh& mesh, const MedianWeights& weights = {});

/// Median-normal mesh filter. Each iteration replaces face normals by their
/// median normals m(T) and moves every vertex v to
///   v + sum_T A(T) m(T) <m(T), C(T) - v> / sum_T A(T)
/// over the faces T incident to v. Connectivity never changes; vertices with
/// no incident face stay put. Throws Error on a zero-area face.
TriangleMesh smooth_mesh(const TriangleMesh& mesh, std::size_t iterations,
                         const MedianWeights& weights = {});

/// Triangulates the valid pixels of a range image: every 2x2 block of valid
/// pixels yields two triangles with normals towards +z. Vertices are the
/// valid pixels in row-major order.
TriangleMesh grid_to_mesh(const DepthMap& map);

}  // namespace nosetip::smooth
