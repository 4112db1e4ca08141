// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include "viewret/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "viewret/error.hpp"
#include "viewret/parallel.hpp"

namespace viewret {

namespace {

constexpr int kPatch = 16;
constexpr int kCells = 4;
constexpr int kBins = 8;
constexpr double kWindowSigma = 8.0;
constexpr double kClamp = 0.2;

DepthImage downsample(const DepthImage& src) {
  const int n = src.size() / 2;
  DepthImage out(n);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const int sum = src.at(2 * row, 2 * col) + src.at(2 * row, 2 * col + 1) +
                      src.at(2 * row + 1, 2 * col) +
                      src.at(2 * row + 1, 2 * col + 1);
      out.at(row, col) = static_cast<std::uint8_t>((sum + 2) / 4);
    }
  }
  return out;
}

}  // namespace

ImagePyramid build_pyramid(const DepthImage& img) {
  if (img.size() < kMinPyramidSize) {
    throw Error(Errc::kBadResolution,
                "pyramid needs at least " + std::to_string(kMinPyramidSize) +
                    " px, got " + std::to_string(img.size()));
  }
  ImagePyramid pyr;
  pyr.levels.push_back(img);
  while (pyr.levels.back().size() / 2 >= kMinPyramidSize) {
    pyr.levels.push_back(downsample(pyr.levels.back()));
  }
  return pyr;
}

std::vector<Keypoint> sample_keypoints(const ImagePyramid& pyramid,
                                       const SamplingParams& params,
                                       std::uint64_t seed) {
  if (params.keypoints < 1 || !(params.reduction >= 1.0)) {
    throw Error(Errc::kInvalidArgument, "need keypoints >= 1, reduction >= 1");
  }
  std::mt19937_64 rng(seed);
  std::vector<Keypoint> out;
  bool any_foreground = false;
  for (std::size_t l = 0; l < pyramid.levels.size(); ++l) {
    const DepthImage& img = pyramid.levels[l];
    std::vector<Keypoint> fg;
    for (int row = 0; row < img.size(); ++row) {
      for (int col = 0; col < img.size(); ++col) {
        if (img.at(row, col) > 0) fg.push_back({static_cast<int>(l), row, col});
      }
    }
    any_foreground = any_foreground || !fg.empty();
    const auto want = static_cast<std::size_t>(std::llround(
        params.keypoints / std::pow(params.reduction, static_cast<double>(l))));
    if (fg.size() <= want) {
      out.insert(out.end(), fg.begin(), fg.end());
      continue;
    }
    // Partial Fisher-Yates: the first `want` slots become the sample.
    for (std::size_t i = 0; i < want; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, fg.size() - 1);
      std::swap(fg[i], fg[pick(rng)]);
    }
    out.insert(out.end(), fg.begin(), fg.begin() + static_cast<std::ptrdiff_t>(want));
  }
  if (!any_foreground) {
    throw Error(Errc::kNoForeground, "no foreground pixel at any level");
  }
  return out;
}

FeatureVector sift_descriptor(const DepthImage& img, const Keypoint& kp) {
  const int n = img.size();
  const auto value = [&](int row, int col) -> double {
    if (row < 0 || col < 0 || row >= n || col >= n) return 0.0;
    return img.at(row, col);
  };

  std::array<double, kFeatureDim> hist{};
  const double half = kPatch / 2.0;
  const double cell = static_cast<double>(kPatch) / kCells;
  const double bin_width = 2.0 * std::numbers::pi / kBins;

  for (int i = 0; i < kPatch; ++i) {
    for (int j = 0; j < kPatch; ++j) {
      const int row = kp.row - kPatch / 2 + i;
      const int col = kp.col - kPatch / 2 + j;
      const double gx = value(row, col + 1) - value(row, col - 1);
      const double gy = value(row + 1, col) - value(row - 1, col);
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;

      const double dy = i + 0.5 - half;
      const double dx = j + 0.5 - half;
      const double weight =
          mag * std::exp(-(dx * dx + dy * dy) / (2.0 * kWindowSigma * kWindowSigma));

      // Bin centers sit at (b + 0.5) * 45 degrees.
      const double o = std::atan2(gy, gx) / bin_width - 0.5;
      const double o_floor = std::floor(o);
      const double fo = o - o_floor;
      const int b0 = ((static_cast<int>(o_floor) % kBins) + kBins) % kBins;
      const int b1 = (b0 + 1) % kBins;

      const double cy = (i + 0.5) / cell - 0.5;
      const double cx = (j + 0.5) / cell - 0.5;
      const int y0 = static_cast<int>(std::floor(cy));
      const int x0 = static_cast<int>(std::floor(cx));
      const double fy = cy - y0;
      const double fx = cx - x0;

      for (int ty = 0; ty < 2; ++ty) {
        const int yc = y0 + ty;
        if (yc < 0 || yc >= kCells) continue;
        const double wy = ty == 0 ? 1.0 - fy : fy;
        for (int tx = 0; tx < 2; ++tx) {
          const int xc = x0 + tx;
          if (xc < 0 || xc >= kCells) continue;
          const double wxy = wy * (tx == 0 ? 1.0 - fx : fx) * weight;
          const std::size_t base = static_cast<std::size_t>(yc * kCells + xc) * kBins;
          hist[base + b0] += wxy * (1.0 - fo);
          hist[base + b1] += wxy * fo;
        }
      }
    }
  }

  FeatureVector out{};
  double norm2 = 0.0;
  for (double h : hist) norm2 += h * h;
  if (norm2 == 0.0) return out;

  double inv = 1.0 / std::sqrt(norm2);
  norm2 = 0.0;
  for (double& h : hist) {
    h = std::min(h * inv, kClamp);
    norm2 += h * h;
  }
  inv = 1.0 / std::sqrt(norm2);
  for (std::size_t k = 0; k < kFeatureDim; ++k) {
    out[k] = static_cast<float>(hist[k] * inv);
  }
  return out;
}

std::vector<FeatureVector> extract_features(const DepthImage& img,
                                            const SamplingParams& params,
                                            std::uint64_t seed) {
  const ImagePyramid pyr = build_pyramid(img);
  const std::vector<Keypoint> kps = sample_keypoints(pyr, params, seed);
  std::vector<FeatureVector> out(kps.size());
  for (std::size_t i = 0; i < kps.size(); ++i) {
    out[i] = sift_descriptor(pyr.levels[kps[i].level], kps[i]);
  }
  return out;
}

}  // namespace viewret
