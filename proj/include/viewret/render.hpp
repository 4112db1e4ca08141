// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VIEWRET_RENDER_HPP
#define VIEWRET_RENDER_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "viewret/geometry.hpp"

namespace viewret {

/// Square 8-bit raster stored row-major. For depth images 0 is background
/// and larger values are closer to the camera.
template <typename Tag>
class Raster {
 public:
  Raster() = default;
  explicit Raster(int size) : size_(size), pixels_(static_cast<std::size_t>(size) * size, 0) {}
  Raster(int size, std::vector<std::uint8_t> pixels);

  int size() const { return size_; }
  std::uint8_t at(int row, int col) const { return pixels_[index(row, col)]; }
  std::uint8_t& at(int row, int col) { return pixels_[index(row, col)]; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::vector<std::uint8_t>& pixels() { return pixels_; }

  bool operator==(const Raster& other) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * size_ + col;
  }

  int size_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct DepthTag {};
struct BinaryTag {};
using DepthImage = Raster<DepthTag>;
using BinaryImage = Raster<BinaryTag>;

/// 255 - round(depth * 254) with depth clamped to [0, 1]; never 0.
std::uint8_t depth_to_intensity(double depth);

/// One pixel per point; the nearest point wins each pixel.
DepthImage render_point_cloud(const PointCloud& cloud, const Viewpoint& v,
                              int resolution);

/// Scanline rasterization with barycentric depth sampled at pixel centers and
/// a minimum-depth z-buffer.
DepthImage render_mesh(const TriangleMesh& mesh, const Viewpoint& v,
                       int resolution);

BinaryImage to_binary(const DepthImage& img);

std::size_t foreground_count(const DepthImage& img);

/// Pixels whose zero-padded 3x3 neighborhood is entirely foreground.
std::size_t eight_connected_count(const BinaryImage& b);

/// Foreground pixels per input point.
double quantity(const DepthImage& img, std::size_t cloud_size);

/// Fraction of foreground pixels that are 8-connected.
double density(const DepthImage& img);

}  // namespace viewret

#endif  // VIEWRET_RENDER_HPP
