// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VIEWRET_GEOMETRY_HPP
#define VIEWRET_GEOMETRY_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace viewret {

using Vec3 = Eigen::Vector3d;

/// Smallest image side accepted by the renderers and the projection.
inline constexpr int kMinResolution = 8;

struct PointCloud {
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  bool empty() const { return triangles.empty(); }
};

/// Camera position on the unit sphere; the camera always looks at the origin.
class Viewpoint {
 public:
  Viewpoint() : direction_(0.0, 0.0, 1.0) {}
  /// Normalizes `direction`; throws InvalidArgument for a zero or non-finite
  /// vector.
  explicit Viewpoint(const Vec3& direction);

  const Vec3& direction() const { return direction_; }

  bool operator==(const Viewpoint& other) const {
    return direction_ == other.direction_;
  }

 private:
  Vec3 direction_;
};

struct CameraFrame {
  Vec3 eye;
  Vec3 forward;
  Vec3 right;
  Vec3 up;
};

struct NormalizationTransform {
  Vec3 translation = Vec3::Zero();
  double scale = 1.0;

  Vec3 apply(const Vec3& p) const { return (p + translation) * scale; }
};

struct PixelDepth {
  int row;
  int col;
  double depth;  // 0 at the eye, 1 at the far side of the unit sphere
};

/// Translates the center of mass to the origin and scales so the farthest
/// point lies on the unit sphere.
std::pair<PointCloud, NormalizationTransform> normalize_pose(
    const PointCloud& cloud);

PointCloud apply_transform(const PointCloud& cloud,
                           const NormalizationTransform& transform);

/// Same normalization for a mesh, using the area-weighted surface centroid
/// (what a uniformly sampled scan of the surface would have as its center of
/// mass) and the farthest vertex.
std::pair<TriangleMesh, NormalizationTransform> normalize_mesh(
    const TriangleMesh& mesh);

/// Area-weighted centroid of the mesh surface.
Vec3 surface_centroid(const TriangleMesh& mesh);

/// Throws InvalidArgument when an index is out of range or a triangle repeats
/// a vertex.
void validate_mesh(const TriangleMesh& mesh);

/// The 20 vertices of the dodecahedron inscribed in the unit sphere, in a
/// fixed order: the 8 cube vertices first, then the three cyclic families.
const std::vector<Viewpoint>& dodecahedron_viewpoints();

/// eye = v, forward = -v. The reference up is +z unless forward is within
/// ~2.6 degrees of it, in which case +y is used.
CameraFrame camera_frame(const Viewpoint& v);

/// Orthographic projection of a point in the unit sphere onto an r x r image.
/// Pixel (0, 0) is the top-left corner. Out-of-sphere points are clamped to
/// the image bounds.
PixelDepth project(const Vec3& p, const CameraFrame& frame, int resolution);

/// Throws BadResolution when resolution < kMinResolution.
void check_resolution(int resolution);

}  // namespace viewret

#endif  // VIEWRET_GEOMETRY_HPP
