// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "viewret/encode.hpp"
#include "viewret/error.hpp"
#include "viewret/parallel.hpp"

namespace viewret {

namespace {

constexpr std::size_t kChunk = 1024;
constexpr double kMinComponentMass = 1e-10;

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

// Per-component constants of log(w_k N(x; mu_k, sigma_k^2)).
struct LogDensity {
  Eigen::VectorXd offset;     // log w_k - 0.5 sum_d log(2 pi sigma_kd^2)
  Eigen::MatrixXd inv_var;    // 1 / sigma_kd^2

  explicit LogDensity(const GmmParams& gmm) {
    const auto k = gmm.weights.size();
    const auto d = gmm.means.cols();
    offset.resize(k);
    inv_var.resize(k, d);
    for (Eigen::Index c = 0; c < k; ++c) {
      double log_det = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double var = gmm.sigmas(c, j) * gmm.sigmas(c, j);
        inv_var(c, j) = 1.0 / var;
        log_det += std::log(2.0 * std::numbers::pi * var);
      }
      offset(c) = std::log(gmm.weights(c)) - 0.5 * log_det;
    }
  }

  // Fills log_p with per-component joint log-densities and returns the
  // log of their sum.
  double eval(std::span<const float> x, const GmmParams& gmm,
              std::vector<double>& log_p) const {
    const auto k = gmm.weights.size();
    const auto d = gmm.means.cols();
    log_p.resize(static_cast<std::size_t>(k));
    double peak = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < k; ++c) {
      double mahal = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double diff = x[static_cast<std::size_t>(j)] - gmm.means(c, j);
        mahal += diff * diff * inv_var(c, j);
      }
      log_p[c] = offset(c) - 0.5 * mahal;
      peak = std::max(peak, log_p[c]);
    }
    double sum = 0.0;
    for (double lp : log_p) sum += std::exp(lp - peak);
    return peak + std::log(sum);
  }
};

struct Stats {
  double log_likelihood = 0.0;
  Eigen::VectorXd mass;
  Eigen::MatrixXd first;
  Eigen::MatrixXd second;

  Stats(Eigen::Index k, Eigen::Index d)
      : mass(Eigen::VectorXd::Zero(k)),
        first(Eigen::MatrixXd::Zero(k, d)),
        second(Eigen::MatrixXd::Zero(k, d)) {}

  void add(const Stats& o) {
    log_likelihood += o.log_likelihood;
    mass += o.mass;
    first += o.first;
    second += o.second;
  }
};

Stats e_step(std::span<const FeatureVector> x, const GmmParams& gmm) {
  const auto k = static_cast<Eigen::Index>(gmm.components());
  const auto d = static_cast<Eigen::Index>(gmm.dim());
  const LogDensity dens(gmm);
  std::vector<Stats> partial(chunk_count(x.size()), Stats(k, d));
  parallel_for(partial.size(), [&](std::size_t c) {
    Stats& s = partial[c];
    std::vector<double> log_p;
    const std::size_t end = std::min(x.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const double lse = dens.eval(x[i], gmm, log_p);
      s.log_likelihood += lse;
      for (Eigen::Index m = 0; m < k; ++m) {
        const double q = std::exp(log_p[m] - lse);
        if (q == 0.0) continue;
        s.mass(m) += q;
        for (Eigen::Index j = 0; j < d; ++j) {
          const double v = x[i][static_cast<std::size_t>(j)];
          s.first(m, j) += q * v;
          s.second(m, j) += q * v * v;
        }
      }
    }
  });
  Stats total(k, d);
  for (const auto& s : partial) total.add(s);
  return total;
}

Eigen::RowVectorXd pooled_variance(std::span<const FeatureVector> x) {
  const auto d = static_cast<Eigen::Index>(kFeatureDim);
  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(d);
  for (const auto& f : x)
    for (Eigen::Index j = 0; j < d; ++j) mean(j) += f[j];
  mean /= static_cast<double>(x.size());
  Eigen::RowVectorXd var = Eigen::RowVectorXd::Zero(d);
  for (const auto& f : x)
    for (Eigen::Index j = 0; j < d; ++j) {
      const double diff = f[j] - mean(j);
      var(j) += diff * diff;
    }
  return var / static_cast<double>(x.size());
}

double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < kFeatureDim; ++j) {
    const double diff = static_cast<double>(a[j]) - b[j];
    s += diff * diff;
  }
  return s;
}

// k-means++ seeding followed by one hard-assignment M-step.
GmmParams initialize(std::span<const FeatureVector> x, const GmmOptions& opts,
                     std::mt19937_64& rng) {
  const std::size_t n = x.size();
  const auto k = static_cast<std::size_t>(opts.components);
  std::vector<std::size_t> centers;
  centers.reserve(k);
  centers.push_back(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> owner(n, 0);
  const auto update = [&](std::size_t center_slot) {
    const FeatureVector& c = x[centers[center_slot]];
    parallel_for(chunk_count(n), [&](std::size_t ch) {
      const std::size_t end = std::min(n, (ch + 1) * kChunk);
      for (std::size_t i = ch * kChunk; i < end; ++i) {
        const double dist = squared_distance(x[i], c);
        if (dist < nearest[i]) {
          nearest[i] = dist;
          owner[i] = center_slot;
        }
      }
    });
  };
  update(0);
  while (centers.size() < k) {
    double total = 0.0;
    for (double v : nearest) total += v;
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (pick = 0; pick + 1 < n; ++pick) {
        target -= nearest[pick];
        if (target < 0.0) break;
      }
    } else {
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    centers.push_back(pick);
    update(centers.size() - 1);
  }

  const auto kk = static_cast<Eigen::Index>(k);
  const auto d = static_cast<Eigen::Index>(kFeatureDim);
  const Eigen::RowVectorXd global_var = pooled_variance(x);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(kk);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(kk, d);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(kk, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<Eigen::Index>(owner[i]);
    count(c) += 1.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      sum(c, j) += x[i][j];
      sum_sq(c, j) += static_cast<double>(x[i][j]) * x[i][j];
    }
  }
  GmmParams gmm;
  gmm.weights.resize(kk);
  gmm.means.resize(kk, d);
  gmm.sigmas.resize(kk, d);
  for (Eigen::Index c = 0; c < kk; ++c) {
    if (count(c) == 0.0) {  // duplicate data points can leave a seed unowned
      for (Eigen::Index j = 0; j < d; ++j) {
        gmm.means(c, j) = x[centers[c]][j];
        gmm.sigmas(c, j) = std::sqrt(std::max(global_var(j), opts.variance_floor));
      }
      gmm.weights(c) = 1.0 / static_cast<double>(n);
      continue;
    }
    gmm.weights(c) = count(c);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double mean = sum(c, j) / count(c);
      const double var = sum_sq(c, j) / count(c) - mean * mean;
      gmm.means(c, j) = mean;
      gmm.sigmas(c, j) = std::sqrt(std::max(var, opts.variance_floor));
    }
  }
  gmm.weights /= gmm.weights.sum();
  return gmm;
}

}  // namespace

GmmFit fit_gmm(std::span<const FeatureVector> features, const GmmOptions& opts) {
  if (opts.components < 1) {
    throw Error(Errc::kInvalidArgument, "need at least one component");
  }
  const std::size_t n = features.size();
  const auto k = static_cast<std::size_t>(opts.components);
  if (n < 10 * k) {
    throw Error(Errc::kTooFewFeatures,
                std::to_string(n) + " features for " + std::to_string(k) +
                    " components (need 10 per component)");
  }
  std::mt19937_64 rng(opts.seed);
  GmmFit fit;
  fit.params = initialize(features, opts, rng);
  GmmParams& gmm = fit.params;
  const auto kk = static_cast<Eigen::Index>(k);
  const auto d = static_cast<Eigen::Index>(gmm.dim());

  for (int iter = 0;; ++iter) {
    const Stats stats = e_step(features, gmm);
    fit.log_likelihood.push_back(stats.log_likelihood);
    const std::size_t t = fit.log_likelihood.size();
    if (t >= 2) {
      const double prev = fit.log_likelihood[t - 2];
      const double change = std::abs(stats.log_likelihood - prev);
      if (change < opts.relative_tolerance * std::abs(prev)) break;
    }
    if (iter == opts.max_iterations) break;

    std::vector<Eigen::Index> empty;
    for (Eigen::Index c = 0; c < kk; ++c) {
      if (stats.mass(c) < kMinComponentMass) {
        empty.push_back(c);
        continue;
      }
      gmm.weights(c) = stats.mass(c) / static_cast<double>(n);
      for (Eigen::Index j = 0; j < d; ++j) {
        const double mean = stats.first(c, j) / stats.mass(c);
        const double var = stats.second(c, j) / stats.mass(c) - mean * mean;
        gmm.means(c, j) = mean;
        gmm.sigmas(c, j) = std::sqrt(std::max(var, opts.variance_floor));
      }
    }
    if (!empty.empty()) {
      if (fit.reinitialized) {
        throw Error(Errc::kDegenerateComponent,
                    "component " + std::to_string(empty.front()) +
                        " lost all responsibility after reinitialization");
      }
      fit.reinitialized = true;
      const Eigen::RowVectorXd global_var = pooled_variance(features);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (Eigen::Index c : empty) {
        const FeatureVector& seed_point = features[pick(rng)];
        for (Eigen::Index j = 0; j < d; ++j) {
          gmm.means(c, j) = seed_point[j];
          gmm.sigmas(c, j) =
              std::sqrt(std::max(global_var(j), opts.variance_floor));
        }
        gmm.weights(c) = 1.0 / static_cast<double>(n);
      }
    }
    gmm.weights /= gmm.weights.sum();
    fit.iterations = iter + 1;
  }
  return fit;
}

void validate_gmm(const GmmParams& gmm) {
  const auto k = gmm.weights.size();
  if (k == 0 || gmm.means.rows() != k || gmm.sigmas.rows() != k ||
      gmm.means.cols() != gmm.sigmas.cols() || gmm.means.cols() == 0) {
    throw Error(Errc::kInvalidArgument, "inconsistent GMM dimensions");
  }
  if (std::abs(gmm.weights.sum() - 1.0) > 1e-6 || gmm.weights.minCoeff() <= 0.0) {
    throw Error(Errc::kInvalidArgument, "GMM weights must be positive and sum to 1");
  }
  if (!(gmm.sigmas.minCoeff() > 0.0)) {
    throw Error(Errc::kInvalidArgument, "GMM deviations must be positive");
  }
}

std::vector<double> gmm_posteriors(std::span<const float> x,
                                   const GmmParams& gmm) {
  if (x.size() != gmm.dim()) {
    throw Error(Errc::kDimensionMismatch, "feature size differs from GMM");
  }
  std::vector<double> q;
  PosteriorEvaluator(gmm).eval(x, q);
  return q;
}

PosteriorEvaluator::PosteriorEvaluator(const GmmParams& gmm) : gmm_(&gmm) {
  LogDensity dens(gmm);
  offset_ = std::move(dens.offset);
  inv_var_ = std::move(dens.inv_var);
}

void PosteriorEvaluator::eval(std::span<const float> x,
                              std::vector<double>& q) const {
  if (x.size() != gmm_->dim()) {
    throw Error(Errc::kDimensionMismatch, "feature size differs from GMM");
  }
  const auto k = gmm_->weights.size();
  const auto d = gmm_->means.cols();
  q.resize(static_cast<std::size_t>(k));
  double peak = -std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < k; ++c) {
    double mahal = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double diff = x[static_cast<std::size_t>(j)] - gmm_->means(c, j);
      mahal += diff * diff * inv_var_(c, j);
    }
    q[c] = offset_(c) - 0.5 * mahal;
    peak = std::max(peak, q[c]);
  }
  double sum = 0.0;
  for (double v : q) sum += std::exp(v - peak);
  const double lse = peak + std::log(sum);
  for (double& v : q) v = std::exp(v - lse);
}

}  // namespace viewret
