// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include "viewret/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "viewret/error.hpp"

namespace viewret {

template <typename Tag>
Raster<Tag>::Raster(int size, std::vector<std::uint8_t> pixels)
    : size_(size), pixels_(std::move(pixels)) {
  if (size < 0 || pixels_.size() != static_cast<std::size_t>(size) * size) {
    throw Error(Errc::kInvalidArgument, "pixel buffer does not match size");
  }
}

template class Raster<DepthTag>;
template class Raster<BinaryTag>;

std::uint8_t depth_to_intensity(double depth) {
  const double d = std::clamp(depth, 0.0, 1.0);
  return static_cast<std::uint8_t>(255 - std::lround(d * 254.0));
}

DepthImage render_point_cloud(const PointCloud& cloud, const Viewpoint& v,
                              int resolution) {
  if (cloud.empty()) throw Error(Errc::kEmptyCloud, "nothing to render");
  check_resolution(resolution);
  const CameraFrame frame = camera_frame(v);
  DepthImage img(resolution);
  for (const auto& p : cloud.points) {
    const PixelDepth px = project(p, frame, resolution);
    // Intensity is monotone in depth, so keeping the brightest value keeps
    // the nearest point.
    auto& slot = img.at(px.row, px.col);
    slot = std::max(slot, depth_to_intensity(px.depth));
  }
  return img;
}

namespace {

struct ScreenVertex {
  double x;
  double y;
  double depth;
};

ScreenVertex to_screen(const Vec3& p, const CameraFrame& frame, double r) {
  return {(p.dot(frame.right) + 1.0) / 2.0 * r,
          (1.0 - (p.dot(frame.up) + 1.0) / 2.0) * r,
          (p - frame.eye).dot(frame.forward) / 2.0};
}

double edge(const ScreenVertex& a, const ScreenVertex& b, double x, double y) {
  return (b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x);
}

}  // namespace

DepthImage render_mesh(const TriangleMesh& mesh, const Viewpoint& v,
                       int resolution) {
  if (mesh.empty()) throw Error(Errc::kEmptyMesh, "nothing to render");
  check_resolution(resolution);
  validate_mesh(mesh);
  const CameraFrame frame = camera_frame(v);
  const double r = resolution;
  std::vector<double> zbuf(static_cast<std::size_t>(resolution) * resolution,
                           std::numeric_limits<double>::infinity());

  for (const auto& tri : mesh.triangles) {
    const ScreenVertex a = to_screen(mesh.vertices[tri[0]], frame, r);
    const ScreenVertex b = to_screen(mesh.vertices[tri[1]], frame, r);
    const ScreenVertex c = to_screen(mesh.vertices[tri[2]], frame, r);
    const double area = edge(a, b, c.x, c.y);
    if (area == 0.0) continue;  // edge-on

    const auto lo = [&](double v0, double v1, double v2) {
      return std::max(0, static_cast<int>(std::floor(std::min({v0, v1, v2}) - 0.5)));
    };
    const auto hi = [&](double v0, double v1, double v2) {
      return std::min(resolution - 1,
                      static_cast<int>(std::ceil(std::max({v0, v1, v2}) - 0.5)));
    };
    const int col0 = lo(a.x, b.x, c.x), col1 = hi(a.x, b.x, c.x);
    const int row0 = lo(a.y, b.y, c.y), row1 = hi(a.y, b.y, c.y);

    for (int row = row0; row <= row1; ++row) {
      const double y = row + 0.5;
      for (int col = col0; col <= col1; ++col) {
        const double x = col + 0.5;
        const double w0 = edge(b, c, x, y) / area;
        const double w1 = edge(c, a, x, y) / area;
        const double w2 = edge(a, b, x, y) / area;
        if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
        const double depth = w0 * a.depth + w1 * b.depth + w2 * c.depth;
        double& z = zbuf[static_cast<std::size_t>(row) * resolution + col];
        z = std::min(z, depth);
      }
    }
  }

  DepthImage img(resolution);
  for (std::size_t i = 0; i < zbuf.size(); ++i) {
    if (std::isfinite(zbuf[i])) img.pixels()[i] = depth_to_intensity(zbuf[i]);
  }
  return img;
}

BinaryImage to_binary(const DepthImage& img) {
  BinaryImage out(img.size());
  const auto& src = img.pixels();
  auto& dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > 0 ? 1 : 0;
  return out;
}

std::size_t foreground_count(const DepthImage& img) {
  return static_cast<std::size_t>(std::count_if(
      img.pixels().begin(), img.pixels().end(), [](std::uint8_t p) { return p > 0; }));
}

std::size_t eight_connected_count(const BinaryImage& b) {
  const int n = b.size();
  if (n < 3) {
    throw Error(Errc::kBadResolution,
                "8-connectivity needs at least 3x3, got " + std::to_string(n));
  }
  // Box filter with zero padding, as horizontal 3-sums over a rolling window
  // of three rows followed by the vertical sum. Border pixels always see a
  // padded zero, so only interior pixels can reach 9.
  const auto horizontal = [&](int row, std::vector<int>& out) {
    for (int col = 0; col < n; ++col) {
      int s = b.at(row, col);
      if (col > 0) s += b.at(row, col - 1);
      if (col + 1 < n) s += b.at(row, col + 1);
      out[col] = s;
    }
  };
  std::vector<int> above(n), here(n), below(n);
  horizontal(0, above);
  horizontal(1, here);
  std::size_t count = 0;
  for (int row = 1; row + 1 < n; ++row) {
    horizontal(row + 1, below);
    for (int col = 1; col + 1 < n; ++col) {
      if (above[col] + here[col] + below[col] == 9) ++count;
    }
    std::swap(above, here);
    std::swap(here, below);
  }
  return count;
}

double quantity(const DepthImage& img, std::size_t cloud_size) {
  if (cloud_size == 0) throw Error(Errc::kZeroCardinality, "empty cloud");
  return static_cast<double>(foreground_count(img)) /
         static_cast<double>(cloud_size);
}

double density(const DepthImage& img) {
  const std::size_t fg = foreground_count(img);
  if (fg == 0) throw Error(Errc::kNoForeground, "density of an empty image");
  return static_cast<double>(eight_connected_count(to_binary(img))) /
         static_cast<double>(fg);
}

}  // namespace viewret
