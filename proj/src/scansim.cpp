// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include "viewret/scansim.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "viewret/error.hpp"
#include "viewret/parallel.hpp"

namespace viewret {

std::optional<double> ray_triangle_intersect(const Vec3& origin,
                                             const Vec3& dir, const Vec3& a,
                                             const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 p = dir.cross(e2);
  const double det = e1.dot(p);
  const double scale = e1.norm() * e2.norm();
  if (scale == 0.0 || std::abs(det) <= 1e-14 * scale) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = origin - a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = dir.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(q) * inv;
  if (!(t > 1e-12)) return std::nullopt;
  return t;
}

ScanResult simulate_scan(const TriangleMesh& mesh, const ScannerConfig& cfg) {
  if (mesh.empty()) throw Error(Errc::kEmptyMesh, "nothing to scan");
  validate_mesh(mesh);
  if (!(cfg.angular_step_deg > 0.0) || cfg.angular_step_deg > cfg.fov_deg) {
    throw Error(Errc::kInvalidArgument, "need 0 < angular step <= fov");
  }
  if ((cfg.position - cfg.target).norm() == 0.0) {
    throw Error(Errc::kInvalidArgument, "scanner position equals target");
  }
  if (!(cfg.max_range > 0.0) || cfg.noise_sigma < 0.0) {
    throw Error(Errc::kInvalidArgument, "bad range or noise setting");
  }

  // Aim frame: same up-vector rule as the rendering camera.
  const Vec3 forward = (cfg.target - cfg.position).normalized();
  Vec3 up0(0.0, 0.0, 1.0);
  if (std::abs(forward.dot(up0)) > 0.999) up0 = Vec3(0.0, 1.0, 0.0);
  const Vec3 right = forward.cross(up0).normalized();
  const Vec3 up = right.cross(forward);

  // Bounding sphere for early ray rejection.
  Vec3 center = Vec3::Zero();
  for (const auto& v : mesh.vertices) center += v;
  center /= static_cast<double>(mesh.vertices.size());
  double radius = 0.0;
  for (const auto& v : mesh.vertices) radius = std::max(radius, (v - center).norm());

  const double step = cfg.angular_step_deg * std::numbers::pi / 180.0;
  const int half = static_cast<int>(std::floor(cfg.fov_deg / 2.0 / cfg.angular_step_deg + 1e-9));
  const int side = 2 * half + 1;
  const std::size_t rays = static_cast<std::size_t>(side) * side;

  std::vector<std::optional<Vec3>> hits(rays);
  parallel_for(rays, [&](std::size_t idx) {
    const int ie = static_cast<int>(idx / side) - half;
    const int ia = static_cast<int>(idx % side) - half;
    const double el = ie * step;
    const double az = ia * step;
    const Vec3 dir = (std::cos(el) * std::cos(az) * forward +
                      std::cos(el) * std::sin(az) * right + std::sin(el) * up)
                         .normalized();
    const Vec3 oc = center - cfg.position;
    const double along = oc.dot(dir);
    if ((oc - along * dir).squaredNorm() > radius * radius * (1.0 + 1e-9)) return;

    double best = std::numeric_limits<double>::infinity();
    for (const auto& tri : mesh.triangles) {
      const auto t = ray_triangle_intersect(cfg.position, dir, mesh.vertices[tri[0]],
                                            mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
      if (t && *t < best) best = *t;
    }
    if (!(best <= cfg.max_range)) return;
    if (cfg.noise_sigma > 0.0) {
      std::mt19937_64 rng(mix_seed(cfg.seed, idx));
      best += std::normal_distribution<double>(0.0, cfg.noise_sigma)(rng);
    }
    hits[idx] = cfg.position + best * dir;
  });

  ScanResult result;
  for (const auto& h : hits) {
    if (h) result.cloud.points.push_back(*h);
  }
  if (result.cloud.empty()) throw Error(Errc::kNoHits, "scanner missed the mesh");
  result.ground_truth = Viewpoint(cfg.position - surface_centroid(mesh));
  return result;
}

}  // namespace viewret
