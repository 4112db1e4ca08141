// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VIEWRET_FEATURES_HPP
#define VIEWRET_FEATURES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "viewret/render.hpp"

namespace viewret {

inline constexpr std::size_t kFeatureDim = 128;
/// Pyramid levels stop before either side would drop below this.
inline constexpr int kMinPyramidSize = 32;

using FeatureVector = std::array<float, kFeatureDim>;

struct ImagePyramid {
  std::vector<DepthImage> levels;  // levels[0] is the input
};

struct Keypoint {
  int level;
  int row;
  int col;

  bool operator==(const Keypoint&) const = default;
};

struct SamplingParams {
  int keypoints = 1000;    // samples on the first level
  double reduction = 1.0;  // level l receives keypoints / reduction^l
};

/// Halves the image with a 2x2 box mean until the next level would be
/// smaller than kMinPyramidSize. Background pixels take part in the mean.
ImagePyramid build_pyramid(const DepthImage& img);

/// Uniform sampling without replacement from each level's foreground. A
/// level with fewer foreground pixels than requested contributes all of them.
std::vector<Keypoint> sample_keypoints(const ImagePyramid& pyramid,
                                       const SamplingParams& params,
                                       std::uint64_t seed);

/// Upright SIFT descriptor on the 16x16 patch centered at `kp`: 4x4 cells of
/// 8 orientation bins, trilinear binning, Gaussian window (sigma 8 px),
/// normalize / clamp at 0.2 / renormalize. Pixels outside the image read 0.
FeatureVector sift_descriptor(const DepthImage& level_img, const Keypoint& kp);

std::vector<FeatureVector> extract_features(const DepthImage& img,
                                            const SamplingParams& params,
                                            std::uint64_t seed);

}  // namespace viewret

#endif  // VIEWRET_FEATURES_HPP
