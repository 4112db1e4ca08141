// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include "viewret/select.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "viewret/error.hpp"
#include "viewret/parallel.hpp"
#include "viewret/render.hpp"

namespace viewret {

std::vector<int> default_resolutions() {
  return {32, 64, 128, 256, 512, 1024, 2048, 4096};
}

ScoreGrid score_grid(const PointCloud& cloud,
                     const std::vector<Viewpoint>& viewpoints,
                     const std::vector<int>& resolutions) {
  if (cloud.empty()) throw Error(Errc::kEmptyCloud, "cannot score");
  if (viewpoints.empty() || resolutions.empty()) {
    throw Error(Errc::kInvalidArgument, "empty viewpoint or resolution set");
  }
  for (int r : resolutions) check_resolution(r);

  ScoreGrid grid;
  grid.viewpoints = viewpoints;
  grid.resolutions = resolutions;
  const auto nv = static_cast<Eigen::Index>(viewpoints.size());
  const auto nr = static_cast<Eigen::Index>(resolutions.size());
  grid.quantity = Eigen::MatrixXd::Zero(nv, nr);
  grid.density = Eigen::MatrixXd::Zero(nv, nr);

  parallel_for(static_cast<std::size_t>(nv * nr), [&](std::size_t cell) {
    const auto i = static_cast<Eigen::Index>(cell) / nr;
    const auto j = static_cast<Eigen::Index>(cell) % nr;
    const DepthImage img =
        render_point_cloud(cloud, viewpoints[i], resolutions[j]);
    grid.quantity(i, j) = quantity(img, cloud.size());
    grid.density(i, j) = foreground_count(img) > 0 ? density(img) : 0.0;
  });
  return grid;
}

Eigen::MatrixXd normalize_quantity(const ScoreGrid& grid) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(grid.quantity.rows(),
                                              grid.quantity.cols());
  for (Eigen::Index j = 0; j < grid.quantity.cols(); ++j) {
    const double lo = grid.quantity.col(j).minCoeff();
    const double hi = grid.quantity.col(j).maxCoeff();
    if (hi == lo) continue;
    for (Eigen::Index i = 0; i < grid.quantity.rows(); ++i) {
      out(i, j) = (grid.quantity(i, j) - lo) / (hi - lo);
    }
  }
  return out;
}

std::size_t select_viewpoint_index(const ScoreGrid& grid) {
  const Eigen::MatrixXd norm = normalize_quantity(grid);
  std::size_t best = 0;
  double best_sum = -1.0;
  for (Eigen::Index i = 0; i < norm.rows(); ++i) {
    const double s = norm.row(i).sum();
    if (s > best_sum) {
      best_sum = s;
      best = static_cast<std::size_t>(i);
    }
  }
  return best;
}

Viewpoint select_viewpoint(const ScoreGrid& grid) {
  return grid.viewpoints.at(select_viewpoint_index(grid));
}

namespace {

int argmax_resolution(const std::vector<int>& resolutions,
                      const std::vector<double>& density) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < density.size(); ++j) {
    const bool better = density[j] > density[best] ||
                        (density[j] == density[best] &&
                         resolutions[j] > resolutions[best]);
    if (better) best = j;
  }
  return resolutions[best];
}

}  // namespace

int select_resolution(const ScoreGrid& grid, const Viewpoint& best) {
  for (std::size_t i = 0; i < grid.viewpoints.size(); ++i) {
    if (grid.viewpoints[i] == best) {
      const auto row = grid.density.row(static_cast<Eigen::Index>(i));
      return argmax_resolution(grid.resolutions,
                               std::vector<double>(row.begin(), row.end()));
    }
  }
  throw Error(Errc::kInvalidArgument, "viewpoint is not part of the grid");
}

int select_resolution_at(const PointCloud& cloud, const Viewpoint& v,
                         const std::vector<int>& resolutions) {
  if (resolutions.empty()) {
    throw Error(Errc::kInvalidArgument, "empty resolution set");
  }
  return select_resolution(score_grid(cloud, {v}, resolutions), v);
}

Selection select_view(const ScoreGrid& grid) {
  const std::size_t index = select_viewpoint_index(grid);
  const Viewpoint& v = grid.viewpoints[index];
  return {index, v, select_resolution(grid, v)};
}

PlaneFit fit_plane_ransac(const PointCloud& cloud, const RansacOptions& opts) {
  const std::size_t n = cloud.size();
  if (n < 3) {
    throw Error(Errc::kTooFewPoints,
                "plane fit needs 3 points, got " + std::to_string(n));
  }
  if (opts.iterations < 1 || !(opts.inlier_tolerance > 0.0)) {
    throw Error(Errc::kInvalidArgument, "bad RANSAC options");
  }

  std::vector<PlaneFit> trials(static_cast<std::size_t>(opts.iterations));
  parallel_for(trials.size(), [&](std::size_t it) {
    std::mt19937_64 rng(mix_seed(opts.seed, it));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    while (b == a) b = pick(rng);
    std::size_t c = pick(rng);
    while (c == a || c == b) c = pick(rng);

    const Vec3& pa = cloud.points[a];
    const Vec3 cross =
        (cloud.points[b] - pa).cross(cloud.points[c] - pa);
    const double len = cross.norm();
    if (!(len > 1e-12)) return;  // collinear triple, iteration is void

    PlaneFit& fit = trials[it];
    fit.normal = cross / len;
    fit.anchor = pa;
    fit.iteration = static_cast<int>(it);
    for (const auto& p : cloud.points) {
      if (std::abs(fit.normal.dot(p - pa)) <= opts.inlier_tolerance) {
        ++fit.inliers;
      }
    }
  });

  const PlaneFit* best = nullptr;
  for (const auto& t : trials) {
    if (t.iteration < 0) continue;
    if (best == nullptr || t.inliers > best->inliers) best = &t;
  }
  if (best == nullptr) {
    throw Error(Errc::kAllCollinear, "no iteration produced a plane");
  }
  return *best;
}

Viewpoint ransac_viewpoint(const PointCloud& cloud, const RansacOptions& opts) {
  const PlaneFit fit = fit_plane_ransac(cloud, opts);
  const Viewpoint plus(fit.normal);
  const Viewpoint minus(-fit.normal);
  const double q_plus = quantity(
      render_point_cloud(cloud, plus, opts.sign_resolution), cloud.size());
  const double q_minus = quantity(
      render_point_cloud(cloud, minus, opts.sign_resolution), cloud.size());
  return q_minus > q_plus ? minus : plus;
}

std::vector<Viewpoint> multiview_ring(const Viewpoint& center,
                                      double delta_deg) {
  const CameraFrame frame = camera_frame(center);
  const double delta = delta_deg * std::numbers::pi / 180.0;
  std::vector<Viewpoint> out;
  out.reserve(13);
  out.push_back(center);
  for (int k = 0; k < 12; ++k) {
    const double phi = k * std::numbers::pi / 6.0;
    const Vec3 offset = std::cos(phi) * frame.right + std::sin(phi) * frame.up;
    out.emplace_back(std::cos(delta) * center.direction() +
                     std::sin(delta) * offset);
  }
  return out;
}

void write_grid_csv(std::ostream& os, const ScoreGrid& grid) {
  os << "viewpoint_index,resolution,Q,D\n";
  char buf[128];
  for (std::size_t i = 0; i < grid.viewpoints.size(); ++i) {
    for (std::size_t j = 0; j < grid.resolutions.size(); ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      std::snprintf(buf, sizeof(buf), "%zu,%d,%.17g,%.17g\n", i,
                    grid.resolutions[j], grid.quantity(ii, jj),
                    grid.density(ii, jj));
      os << buf;
    }
  }
}

}  // namespace viewret
