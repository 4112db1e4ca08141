// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VIEWRET_SCANSIM_HPP
#define VIEWRET_SCANSIM_HPP

#include <cstdint>
#include <optional>

#include "viewret/geometry.hpp"

namespace viewret {

/// Terrestrial-scanner model: rays on a constant-step azimuth/elevation
/// lattice around the aim direction.
struct ScannerConfig {
  Vec3 position = Vec3(4.0, 0.0, 0.0);
  Vec3 target = Vec3::Zero();
  double fov_deg = 40.0;
  double angular_step_deg = 0.5;
  double max_range = 100.0;
  /// Standard deviation of Gaussian range noise; 0 disables it.
  double noise_sigma = 0.0;
  std::uint64_t seed = 42;
};

struct ScanResult {
  PointCloud cloud;
  /// Unit vector from the mesh surface centroid toward the scanner.
  Viewpoint ground_truth;
};

/// Nearest positive hit distance of the ray against the triangle, edges
/// included. Degenerate (zero-area) triangles and parallel rays never hit.
std::optional<double> ray_triangle_intersect(const Vec3& origin,
                                             const Vec3& dir, const Vec3& a,
                                             const Vec3& b, const Vec3& c);

/// Throws InvalidArgument for an invalid config, EmptyMesh for an empty mesh
/// and NoHits when no ray reaches the surface.
ScanResult simulate_scan(const TriangleMesh& mesh, const ScannerConfig& cfg);

/// Closed primitive meshes centered at the origin, z up.
TriangleMesh make_sphere(double radius, int slices = 32, int stacks = 16);
TriangleMesh make_box(double sx, double sy, double sz);
TriangleMesh make_cylinder(double radius, double height, int slices = 32);
TriangleMesh make_cone(double radius, double height, int slices = 32);

}  // namespace viewret

#endif  // VIEWRET_SCANSIM_HPP
