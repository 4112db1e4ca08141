// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "viewret/error.hpp"
#include "viewret/scansim.hpp"

namespace viewret {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(Errc::kInvalidArgument, what);
}

// Adds a ring of `slices` vertices at height z and returns the first index.
int add_ring(TriangleMesh& mesh, double radius, double z, int slices) {
  const int first = static_cast<int>(mesh.vertices.size());
  for (int i = 0; i < slices; ++i) {
    const double a = 2.0 * std::numbers::pi * i / slices;
    mesh.vertices.emplace_back(radius * std::cos(a), radius * std::sin(a), z);
  }
  return first;
}

// Fan from `apex` to the ring; flip selects the winding.
void add_fan(TriangleMesh& mesh, int apex, int ring, int slices, bool flip) {
  for (int i = 0; i < slices; ++i) {
    const int a = ring + i;
    const int b = ring + (i + 1) % slices;
    if (flip) {
      mesh.triangles.push_back({apex, b, a});
    } else {
      mesh.triangles.push_back({apex, a, b});
    }
  }
}

void add_band(TriangleMesh& mesh, int lower, int upper, int slices) {
  for (int i = 0; i < slices; ++i) {
    const int a = lower + i;
    const int b = lower + (i + 1) % slices;
    const int c = upper + (i + 1) % slices;
    const int d = upper + i;
    mesh.triangles.push_back({a, b, c});
    mesh.triangles.push_back({a, c, d});
  }
}

}  // namespace

TriangleMesh make_sphere(double radius, int slices, int stacks) {
  require(radius > 0.0 && slices >= 3 && stacks >= 2, "bad sphere parameters");
  TriangleMesh mesh;
  mesh.vertices.emplace_back(0.0, 0.0, -radius);
  const int south = 0;
  std::vector<int> rings;
  for (int s = 1; s < stacks; ++s) {
    const double polar = std::numbers::pi * s / stacks;
    rings.push_back(add_ring(mesh, radius * std::sin(polar), -radius * std::cos(polar), slices));
  }
  const int north = static_cast<int>(mesh.vertices.size());
  mesh.vertices.emplace_back(0.0, 0.0, radius);
  add_fan(mesh, south, rings.front(), slices, true);
  for (std::size_t r = 0; r + 1 < rings.size(); ++r) add_band(mesh, rings[r], rings[r + 1], slices);
  add_fan(mesh, north, rings.back(), slices, false);
  return mesh;
}

TriangleMesh make_box(double sx, double sy, double sz) {
  require(sx > 0.0 && sy > 0.0 && sz > 0.0, "bad box dimensions");
  TriangleMesh mesh;
  for (int i = 0; i < 8; ++i) {
    mesh.vertices.emplace_back((i & 1 ? 0.5 : -0.5) * sx, (i & 2 ? 0.5 : -0.5) * sy,
                               (i & 4 ? 0.5 : -0.5) * sz);
  }
  const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                           {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    mesh.triangles.push_back({q[0], q[1], q[2]});
    mesh.triangles.push_back({q[0], q[2], q[3]});
  }
  return mesh;
}

TriangleMesh make_cylinder(double radius, double height, int slices) {
  require(radius > 0.0 && height > 0.0 && slices >= 3, "bad cylinder parameters");
  TriangleMesh mesh;
  const int bottom = add_ring(mesh, radius, -height / 2.0, slices);
  const int top = add_ring(mesh, radius, height / 2.0, slices);
  const int bottom_center = static_cast<int>(mesh.vertices.size());
  mesh.vertices.emplace_back(0.0, 0.0, -height / 2.0);
  const int top_center = bottom_center + 1;
  mesh.vertices.emplace_back(0.0, 0.0, height / 2.0);
  add_band(mesh, bottom, top, slices);
  add_fan(mesh, bottom_center, bottom, slices, true);
  add_fan(mesh, top_center, top, slices, false);
  return mesh;
}

TriangleMesh make_cone(double radius, double height, int slices) {
  require(radius > 0.0 && height > 0.0 && slices >= 3, "bad cone parameters");
  TriangleMesh mesh;
  const int base = add_ring(mesh, radius, -height / 2.0, slices);
  const int base_center = static_cast<int>(mesh.vertices.size());
  mesh.vertices.emplace_back(0.0, 0.0, -height / 2.0);
  const int apex = base_center + 1;
  mesh.vertices.emplace_back(0.0, 0.0, height / 2.0);
  add_fan(mesh, base_center, base, slices, true);
  add_fan(mesh, apex, base, slices, false);
  return mesh;
}

}  // namespace viewret
