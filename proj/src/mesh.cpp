#include "nosetip/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "nosetip/error.hpp"

namespace nosetip::smooth {
namespace {

std::size_t shared_vertices(const Face& a, const Face& b) {
    std::size_t n = 0;
    for (auto va : a)
        for (auto vb : b) n += va == vb ? 1 : 0;
    return n;
}

void require_nondegenerate(const TriangleMesh& mesh) {
    for (std::size_t f = 0; f < mesh.faces().size(); ++f) {
        const auto& [a, b, c] = mesh.faces()[f];
        const auto& p = mesh.vertices();
        const double longest = std::max({distance(p[a], p[b]), distance(p[b], p[c]),
                                         distance(p[c], p[a])});
        if (!(mesh.area(f) > 1e-12 * longest * longest))
            throw Error("face " + std::to_string(f) + " has zero area");
    }
}

}  // namespace

TriangleMesh::TriangleMesh(std::vector<Point3> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
    std::set<std::pair<std::size_t, std::size_t>> directed;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& face = faces_[f];
        for (auto v : face)
            if (v >= vertices_.size())
                throw std::invalid_argument("face " + std::to_string(f) + " references vertex " +
                                            std::to_string(v) + " out of range");
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2])
            throw std::invalid_argument("face " + std::to_string(f) + " repeats a vertex");
        for (std::size_t e = 0; e < 3; ++e)
            if (!directed.insert({face[e], face[(e + 1) % 3]}).second)
                throw std::invalid_argument("face " + std::to_string(f) +
                                            " breaks consistent orientation");
    }
}

Point3 TriangleMesh::normal(std::size_t face) const {
    const auto& [a, b, c] = faces_[face];
    const Point3 n = cross(vertices_[b] - vertices_[a], vertices_[c] - vertices_[a]);
    const double len = norm(n);
    return len > 0.0 ? (1.0 / len) * n : Point3{};
}

double TriangleMesh::area(std::size_t face) const {
    const auto& [a, b, c] = faces_[face];
    return 0.5 * norm(cross(vertices_[b] - vertices_[a], vertices_[c] - vertices_[a]));
}

Point3 TriangleMesh::centroid(std::size_t face) const {
    const auto& [a, b, c] = faces_[face];
    return (1.0 / 3.0) * (vertices_[a] + vertices_[b] + vertices_[c]);
}

std::vector<TriangleNeighborhood> build_neighborhoods(const TriangleMesh& mesh,
                                                      const MedianWeights& weights) {
    std::vector<std::vector<std::size_t>> incident(mesh.vertices().size());
    for (std::size_t f = 0; f < mesh.faces().size(); ++f)
        for (auto v : mesh.faces()[f]) incident[v].push_back(f);

    std::vector<TriangleNeighborhood> out(mesh.faces().size());
    for (std::size_t f = 0; f < mesh.faces().size(); ++f) {
        std::vector<std::size_t> touching;
        for (auto v : mesh.faces()[f])
            touching.insert(touching.end(), incident[v].begin(), incident[v].end());
        std::sort(touching.begin(), touching.end());
        touching.erase(std::unique(touching.begin(), touching.end()), touching.end());

        auto& nb = out[f];
        for (auto g : touching) {
            if (g == f) continue;
            if (shared_vertices(mesh.faces()[f], mesh.faces()[g]) >= 2)
                nb.edge_neighbors.push_back(g);
            else
                nb.vertex_neighbors.push_back(g);
        }
        nb.weights.assign(nb.edge_neighbors.size(), weights.edge);
        nb.weights.insert(nb.weights.end(), nb.vertex_neighbors.size(), weights.vertex);
    }
    return out;
}

double angular_distance(const Point3& a, const Point3& b) {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

std::size_t vector_median(const std::vector<Point3>& normals,
                          const std::vector<std::uint32_t>& weights) {
    if (normals.empty() || normals.size() != weights.size())
        throw std::invalid_argument("vector_median: need equally many normals and weights");
    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < normals.size(); ++i) {
        double cost = 0.0;
        for (std::size_t j = 0; j < normals.size(); ++j)
            cost += weights[j] * angular_distance(normals[i], normals[j]);
        if (cost < best_cost) {
            best_cost = cost;
            best = i;
        }
    }
    return best;
}

std::vector<Point3> median_normals(const TriangleMesh& mesh, const MedianWeights& weights) {
    require_nondegenerate(mesh);
    const auto hoods = build_neighborhoods(mesh, weights);
    std::vector<Point3> face_normals(mesh.faces().size());
    for (std::size_t f = 0; f < face_normals.size(); ++f) face_normals[f] = mesh.normal(f);

    std::vector<Point3> out(mesh.faces().size());
    std::vector<std::pair<std::size_t, std::uint32_t>> gathered;
    std::vector<Point3> normals;
    std::vector<std::uint32_t> w;
    for (std::size_t f = 0; f < out.size(); ++f) {
        const auto& nb = hoods[f];
        gathered.clear();
        gathered.emplace_back(f, weights.self);
        for (std::size_t i = 0; i < nb.edge_neighbors.size(); ++i)
            gathered.emplace_back(nb.edge_neighbors[i], nb.weights[i]);
        for (std::size_t i = 0; i < nb.vertex_neighbors.size(); ++i)
            gathered.emplace_back(nb.vertex_neighbors[i], nb.weights[nb.edge_neighbors.size() + i]);
        std::sort(gathered.begin(), gathered.end());

        normals.clear();
        w.clear();
        for (auto [g, weight] : gathered) {
            normals.push_back(face_normals[g]);
            w.push_back(weight);
        }
        out[f] = normals[vector_median(normals, w)];
    }
    return out;
}

TriangleMesh smooth_mesh(const TriangleMesh& mesh, std::size_t iterations,
                         const MedianWeights& weights) {
    if (mesh.faces().empty()) throw std::invalid_argument("smooth_mesh: mesh has no faces");
    if (iterations == 0) throw std::invalid_argument("smooth_mesh: iterations must be >= 1");

    TriangleMesh current = mesh;
    for (std::size_t it = 0; it < iterations; ++it) {
        const auto medians = median_normals(current, weights);
        const auto& verts = current.vertices();
        std::vector<Point3> shift(verts.size());
        std::vector<double> area_sum(verts.size(), 0.0);
        for (std::size_t f = 0; f < current.faces().size(); ++f) {
            const double a = current.area(f);
            const Point3 c = current.centroid(f);
            const Point3& m = medians[f];
            for (auto v : current.faces()[f]) {
                shift[v] = shift[v] + (a * dot(m, c - verts[v])) * m;
                area_sum[v] += a;
            }
        }
        std::vector<Point3> moved = verts;
        for (std::size_t v = 0; v < moved.size(); ++v)
            if (area_sum[v] > 0.0) moved[v] = moved[v] + (1.0 / area_sum[v]) * shift[v];
        current = TriangleMesh(std::move(moved), current.faces());
    }
    return current;
}

TriangleMesh grid_to_mesh(const DepthMap& map) {
    std::vector<std::size_t> vertex_of(map.size(), std::numeric_limits<std::size_t>::max());
    std::vector<Point3> vertices;
    for (std::size_t r = 0; r < map.height(); ++r)
        for (std::size_t c = 0; c < map.width(); ++c)
            if (map.valid(r, c)) {
                vertex_of[map.index(r, c)] = vertices.size();
                vertices.push_back({static_cast<double>(c), static_cast<double>(r), map.depth(r, c)});
            }
    std::vector<Face> faces;
    for (std::size_t r = 0; r + 1 < map.height(); ++r)
        for (std::size_t c = 0; c + 1 < map.width(); ++c) {
            if (!(map.valid(r, c) && map.valid(r, c + 1) && map.valid(r + 1, c) &&
                  map.valid(r + 1, c + 1)))
                continue;
            const auto p00 = vertex_of[map.index(r, c)];
            const auto p01 = vertex_of[map.index(r, c + 1)];
            const auto p10 = vertex_of[map.index(r + 1, c)];
            const auto p11 = vertex_of[map.index(r + 1, c + 1)];
            faces.push_back({p00, p01, p10});
            faces.push_back({p01, p11, p10});
        }
    return TriangleMesh(std::move(vertices), std::move(faces));
}

}  // namespace nosetip::smooth
