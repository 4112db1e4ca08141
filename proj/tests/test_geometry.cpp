// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "viewret/error.hpp"
#include "viewret/geometry.hpp"

using namespace viewret;

namespace {

bool near(const Vec3& a, const Vec3& b, double tol) { return (a - b).norm() <= tol; }

}  // namespace

TEST_CASE("normalize_pose: symmetric pair") {
  PointCloud c{{Vec3(0, 0, 0), Vec3(2, 0, 0)}};
  const auto [out, t] = normalize_pose(c);
  CHECK(near(out.points[0], Vec3(-1, 0, 0), 1e-15));
  CHECK(near(out.points[1], Vec3(1, 0, 0), 1e-15));
  CHECK(near(t.translation, Vec3(-1, 0, 0), 1e-15));
  CHECK(t.scale == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normalize_pose: random cloud centered and scaled") {
  const PointCloud raw = [] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 13.0);
    PointCloud c;
    for (int i = 0; i < 100; ++i) c.points.emplace_back(u(rng), u(rng), u(rng));
    return c;
  }();
  const auto [out, t] = normalize_pose(raw);
  Vec3 com = Vec3::Zero();
  double max_norm = 0.0;
  for (const auto& p : out.points) {
    com += p;
    max_norm = std::max(max_norm, p.norm());
  }
  com /= static_cast<double>(out.size());
  CHECK(com.norm() <= 1e-9);
  CHECK(std::abs(max_norm - 1.0) <= 1e-9);

  SUBCASE("transform reproduces the output bit for bit") {
    const PointCloud again = apply_transform(raw, t);
    for (std::size_t i = 0; i < raw.size(); ++i) CHECK(again.points[i] == out.points[i]);
  }
  SUBCASE("idempotent") {
    const auto [twice, t2] = normalize_pose(out);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(near(twice.points[i], out.points[i], 1e-9));
    CHECK(t2.scale == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("normalize_pose: errors") {
  CHECK_THROWS_AS(normalize_pose(PointCloud{}), Error);
  try {
    normalize_pose(PointCloud{});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kEmptyCloud);
  }
  try {
    normalize_pose(PointCloud{{Vec3(1, 2, 3), Vec3(1, 2, 3)}});
    FAIL("expected DegenerateCloud");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kDegenerateCloud);
  }
}

TEST_CASE("dodecahedron viewpoints") {
  const auto& v = dodecahedron_viewpoints();
  REQUIRE(v.size() == 20);
  for (const auto& p : v) CHECK(std::abs(p.direction().norm() - 1.0) <= 1e-12);

  SUBCASE("closed under antipodes") {
    for (const auto& p : v) {
      bool found = false;
      for (const auto& q : v) found = found || near(q.direction(), -p.direction(), 1e-12);
      CHECK(found);
    }
  }
  SUBCASE("every vertex has the same nearest-neighbor angle") {
    // Exhaustive 190-pair scan.
    std::vector<double> nearest(20, 10.0);
    for (std::size_t i = 0; i < 20; ++i) {
      for (std::size_t j = i + 1; j < 20; ++j) {
        const double a = std::acos(std::clamp(v[i].direction().dot(v[j].direction()), -1.0, 1.0));
        nearest[i] = std::min(nearest[i], a);
        nearest[j] = std::min(nearest[j], a);
      }
    }
    for (double a : nearest) CHECK(a == doctest::Approx(nearest[0]).epsilon(1e-12));
    // Edge of a dodecahedron with circumradius 1 subtends acos(sqrt(5)/3).
    CHECK(nearest[0] == doctest::Approx(std::acos(std::sqrt(5.0) / 3.0)).epsilon(1e-12));
  }
  SUBCASE("same sequence on every call") {
    const auto& again = dodecahedron_viewpoints();
    for (std::size_t i = 0; i < 20; ++i) CHECK(again[i] == v[i]);
  }
}

TEST_CASE("camera_frame: axis cases") {
  const CameraFrame fx = camera_frame(Viewpoint(Vec3(1, 0, 0)));
  CHECK(near(fx.forward, Vec3(-1, 0, 0), 1e-15));
  CHECK(near(fx.right, Vec3(0, 1, 0), 1e-15));
  CHECK(near(fx.up, Vec3(0, 0, 1), 1e-15));

  const CameraFrame fz = camera_frame(Viewpoint(Vec3(0, 0, 1)));
  CHECK(near(fz.eye, Vec3(0, 0, 1), 1e-15));
  CHECK(near(fz.right, Vec3(1, 0, 0), 1e-15));
  CHECK(near(fz.up, Vec3(0, 1, 0), 1e-15));
}

TEST_CASE("camera_frame: random directions give right-handed orthonormal frames") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const CameraFrame f = camera_frame(Viewpoint(testing::random_unit(rng)));
    CHECK(std::abs(f.right.dot(f.forward)) <= 1e-9);
    CHECK(std::abs(f.right.dot(f.up)) <= 1e-9);
    CHECK(std::abs(f.up.dot(f.forward)) <= 1e-9);
    CHECK(std::abs(f.right.norm() - 1.0) <= 1e-9);
    CHECK(std::abs(f.up.norm() - 1.0) <= 1e-9);
    CHECK(near(f.right.cross(f.up), -f.forward, 1e-9));
  }
}

TEST_CASE("project: conventions") {
  const CameraFrame f = camera_frame(Viewpoint(Vec3(0, 0, 1)));
  // The r=4 example scaled to the minimum resolution 8.
  const PixelDepth o = project(Vec3::Zero(), f, 8);
  CHECK(o.row == 4);
  CHECK(o.col == 4);
  CHECK(o.depth == 0.5);
  CHECK(project(f.eye, f, 8).depth == 0.0);

  // Top-left pixel holds +up / -right; the +1 boundary clamps.
  const PixelDepth tl = project(Vec3(-1, 1, 0), f, 16);
  CHECK(tl.row == 0);
  CHECK(tl.col == 0);
  const PixelDepth br = project(Vec3(1, -1, 0), f, 16);
  CHECK(br.row == 15);
  CHECK(br.col == 15);

  try {
    project(Vec3::Zero(), f, 7);
    FAIL("expected BadResolution");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kBadResolution);
  }
}

TEST_CASE("project: random in-sphere points match direct arithmetic") {
  std::mt19937_64 rng(3);
  const PointCloud pts = testing::random_ball_cloud(50, 5);
  for (int trial = 0; trial < 5; ++trial) {
    const Viewpoint v(testing::random_unit(rng));
    const CameraFrame f = camera_frame(v);
    const int r = 8 << trial;
    for (const auto& p : pts.points) {
      const PixelDepth px = project(p, f, r);
      CHECK(px.depth >= 0.0);
      CHECK(px.depth <= 1.0);
      CHECK(px.row >= 0);
      CHECK(px.row < r);
      CHECK(px.col >= 0);
      CHECK(px.col < r);
      const double x = p.dot(f.right), y = p.dot(f.up);
      const int col = std::min(r - 1, static_cast<int>(std::floor((x + 1.0) / 2.0 * r)));
      const int row = std::min(r - 1, static_cast<int>(std::floor((1.0 - (y + 1.0) / 2.0) * r)));
      CHECK(px.col == col);
      CHECK(px.row == row);
      CHECK(px.depth == doctest::Approx((1.0 - p.dot(v.direction())) / 2.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("normalize_mesh and validation") {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0)};
  m.triangles = {{0, 1, 2}};
  const auto [out, t] = normalize_mesh(m);
  double max_norm = 0.0;
  for (const auto& v : out.vertices) max_norm = std::max(max_norm, v.norm());
  CHECK(max_norm == doctest::Approx(1.0));
  CHECK(near(surface_centroid(out), Vec3::Zero(), 1e-12));

  TriangleMesh bad = m;
  bad.triangles = {{0, 1, 3}};
  CHECK_THROWS_AS(validate_mesh(bad), Error);
  bad.triangles = {{0, 1, 1}};
  CHECK_THROWS_AS(validate_mesh(bad), Error);
  try {
    normalize_mesh(TriangleMesh{});
    FAIL("expected EmptyMesh");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kEmptyMesh);
  }
}
