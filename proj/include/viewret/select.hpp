// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VIEWRET_SELECT_HPP
#define VIEWRET_SELECT_HPP

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "viewret/geometry.hpp"

namespace viewret {

/// Geometric resolution ladder 32 .. 4096 (eight entries).
std::vector<int> default_resolutions();

/// Quantity and density for every (viewpoint, resolution) cell.
/// Rows follow `viewpoints`, columns follow `resolutions`.
struct ScoreGrid {
  std::vector<Viewpoint> viewpoints;
  std::vector<int> resolutions;
  Eigen::MatrixXd quantity;
  Eigen::MatrixXd density;
};

ScoreGrid score_grid(const PointCloud& cloud,
                     const std::vector<Viewpoint>& viewpoints,
                     const std::vector<int>& resolutions);

/// Min-max normalization of Q within each resolution column. A constant
/// column maps to all zeros.
Eigen::MatrixXd normalize_quantity(const ScoreGrid& grid);

/// Row maximizing the sum of normalized quantity; lowest index wins ties.
std::size_t select_viewpoint_index(const ScoreGrid& grid);
Viewpoint select_viewpoint(const ScoreGrid& grid);

/// Resolution maximizing density in the row of `best`; the largest
/// resolution wins ties. `best` must be one of grid.viewpoints.
int select_resolution(const ScoreGrid& grid, const Viewpoint& best);

/// Density-maximizing resolution for an arbitrary viewpoint (used when the
/// viewpoint comes from ground truth or the plane fit rather than the grid).
int select_resolution_at(const PointCloud& cloud, const Viewpoint& v,
                         const std::vector<int>& resolutions);

struct Selection {
  std::size_t viewpoint_index;
  Viewpoint viewpoint;
  int resolution;
};

/// The full proposed method: grid, best viewpoint, best resolution.
Selection select_view(const ScoreGrid& grid);

struct RansacOptions {
  int iterations = 1000;
  double inlier_tolerance = 0.01;
  std::uint64_t seed = 42;
  /// Resolution at which Q(+n) and Q(-n) are compared to orient the normal.
  int sign_resolution = 256;
};

struct PlaneFit {
  Vec3 normal;  // unit, orientation as produced by the sampled triple
  Vec3 anchor;  // one of the three sampled points
  std::size_t inliers = 0;
  int iteration = -1;
};

/// Plane with the most inliers over all iterations; earliest iteration wins
/// ties. Iteration i draws its triple from its own seed stream, so the result
/// is independent of the thread count.
PlaneFit fit_plane_ransac(const PointCloud& cloud, const RansacOptions& opts);

/// Plane-normal viewpoint: the side (+n or -n) with the larger quantity at
/// opts.sign_resolution; exact ties keep +n.
Viewpoint ransac_viewpoint(const PointCloud& cloud, const RansacOptions& opts);

/// The center plus 12 views on the circle at `delta_deg` around it, spaced
/// every 30 degrees.
std::vector<Viewpoint> multiview_ring(const Viewpoint& center,
                                      double delta_deg = 40.0);

/// CSV with header `viewpoint_index,resolution,Q,D`.
void write_grid_csv(std::ostream& os, const ScoreGrid& grid);

}  // namespace viewret

#endif  // VIEWRET_SELECT_HPP
