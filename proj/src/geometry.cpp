// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include "viewret/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "viewret/error.hpp"

namespace viewret {

namespace {

constexpr double kDegenerateRadius = 1e-12;

void check_finite(const std::vector<Vec3>& points) {
  for (const auto& p : points) {
    if (!p.allFinite()) {
      throw Error(Errc::kInvalidArgument, "non-finite coordinate in input");
    }
  }
}

NormalizationTransform make_transform(const Vec3& center,
                                      const std::vector<Vec3>& points) {
  double max_dist = 0.0;
  for (const auto& p : points) max_dist = std::max(max_dist, (p - center).norm());
  if (max_dist < kDegenerateRadius) {
    throw Error(Errc::kDegenerateCloud, "all points coincide");
  }
  NormalizationTransform t;
  t.translation = -center;
  t.scale = 1.0 / max_dist;
  return t;
}

}  // namespace

Viewpoint::Viewpoint(const Vec3& direction) {
  const double n = direction.norm();
  if (!direction.allFinite() || n == 0.0) {
    throw Error(Errc::kInvalidArgument, "viewpoint direction must be nonzero");
  }
  direction_ = direction / n;
}

std::pair<PointCloud, NormalizationTransform> normalize_pose(
    const PointCloud& cloud) {
  if (cloud.empty()) throw Error(Errc::kEmptyCloud, "cannot normalize");
  check_finite(cloud.points);
  Vec3 sum = Vec3::Zero();
  for (const auto& p : cloud.points) sum += p;
  const Vec3 center = sum / static_cast<double>(cloud.size());
  const NormalizationTransform t = make_transform(center, cloud.points);
  return {apply_transform(cloud, t), t};
}

PointCloud apply_transform(const PointCloud& cloud,
                           const NormalizationTransform& transform) {
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const auto& p : cloud.points) out.points.push_back(transform.apply(p));
  return out;
}

void validate_mesh(const TriangleMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  for (const auto& tri : mesh.triangles) {
    for (int idx : tri) {
      if (idx < 0 || idx >= n) {
        throw Error(Errc::kInvalidArgument,
                    "triangle index " + std::to_string(idx) + " out of range");
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw Error(Errc::kInvalidArgument, "triangle repeats a vertex");
    }
  }
}

Vec3 surface_centroid(const TriangleMesh& mesh) {
  Vec3 weighted = Vec3::Zero();
  double total_area = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    const double area = 0.5 * (b - a).cross(c - a).norm();
    weighted += area * (a + b + c) / 3.0;
    total_area += area;
  }
  if (total_area <= 0.0) {
    throw Error(Errc::kDegenerateCloud, "mesh has zero surface area");
  }
  return weighted / total_area;
}

std::pair<TriangleMesh, NormalizationTransform> normalize_mesh(
    const TriangleMesh& mesh) {
  if (mesh.empty()) throw Error(Errc::kEmptyMesh, "cannot normalize");
  validate_mesh(mesh);
  check_finite(mesh.vertices);
  const NormalizationTransform t =
      make_transform(surface_centroid(mesh), mesh.vertices);
  TriangleMesh out = mesh;
  for (auto& v : out.vertices) v = t.apply(v);
  return {std::move(out), t};
}

const std::vector<Viewpoint>& dodecahedron_viewpoints() {
  static const std::vector<Viewpoint> views = [] {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double inv = 1.0 / phi;
    const double s = 1.0 / std::sqrt(3.0);
    std::vector<Vec3> raw;
    for (double x : {-1.0, 1.0})
      for (double y : {-1.0, 1.0})
        for (double z : {-1.0, 1.0}) raw.emplace_back(x, y, z);
    for (double a : {-1.0, 1.0})
      for (double b : {-1.0, 1.0}) raw.emplace_back(0.0, a * inv, b * phi);
    for (double a : {-1.0, 1.0})
      for (double b : {-1.0, 1.0}) raw.emplace_back(a * inv, b * phi, 0.0);
    for (double a : {-1.0, 1.0})
      for (double b : {-1.0, 1.0}) raw.emplace_back(a * phi, 0.0, b * inv);
    std::vector<Viewpoint> out;
    out.reserve(raw.size());
    for (const auto& r : raw) out.emplace_back(r * s);
    return out;
  }();
  return views;
}

CameraFrame camera_frame(const Viewpoint& v) {
  CameraFrame frame;
  frame.eye = v.direction();
  frame.forward = -v.direction();
  Vec3 up0(0.0, 0.0, 1.0);
  if (std::abs(frame.forward.dot(up0)) > 0.999) up0 = Vec3(0.0, 1.0, 0.0);
  frame.right = frame.forward.cross(up0).normalized();
  frame.up = frame.right.cross(frame.forward);
  return frame;
}

void check_resolution(int resolution) {
  if (resolution < kMinResolution) {
    throw Error(Errc::kBadResolution,
                "resolution " + std::to_string(resolution) + " is below " +
                    std::to_string(kMinResolution));
  }
}

PixelDepth project(const Vec3& p, const CameraFrame& frame, int resolution) {
  check_resolution(resolution);
  const double r = static_cast<double>(resolution);
  const double x = (p.dot(frame.right) + 1.0) / 2.0;
  const double y = (p.dot(frame.up) + 1.0) / 2.0;
  const auto to_pixel = [resolution](double t) {
    const double f = std::floor(t);
    if (!(f >= 0.0)) return 0;
    if (f >= static_cast<double>(resolution - 1)) return resolution - 1;
    return static_cast<int>(f);
  };
  PixelDepth out;
  out.col = to_pixel(x * r);
  out.row = to_pixel((1.0 - y) * r);
  out.depth = (p - frame.eye).dot(frame.forward) / 2.0;
  return out;
}

}  // namespace viewret
