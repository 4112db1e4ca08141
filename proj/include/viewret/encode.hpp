// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VIEWRET_ENCODE_HPP
#define VIEWRET_ENCODE_HPP

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "viewret/features.hpp"

namespace viewret {

/// Diagonal-covariance Gaussian mixture. Row k of `means` / `sigmas` belongs
/// to component k; `sigmas` holds standard deviations.
struct GmmParams {
  Eigen::VectorXd weights;
  Eigen::MatrixXd means;
  Eigen::MatrixXd sigmas;

  std::size_t components() const { return static_cast<std::size_t>(weights.size()); }
  std::size_t dim() const { return static_cast<std::size_t>(means.cols()); }
};

struct GmmOptions {
  int components = 256;
  std::uint64_t seed = 42;
  int max_iterations = 25;
  double relative_tolerance = 1e-5;
  double variance_floor = 1e-6;
};

struct GmmFit {
  GmmParams params;
  /// Log-likelihood of the parameters entering each E-step, in order; the
  /// last entry scores the returned parameters.
  std::vector<double> log_likelihood;
  int iterations = 0;
  bool reinitialized = false;
};

/// EM from k-means++ seeding. Data are processed in fixed-size chunks whose
/// partial sums are combined in chunk order, so results do not depend on the
/// thread count. Throws TooFewFeatures when fewer than 10*K features are given
/// and DegenerateComponent when a component empties twice.
GmmFit fit_gmm(std::span<const FeatureVector> features, const GmmOptions& opts);

/// Soft assignments q_k(x), summing to 1.
std::vector<double> gmm_posteriors(std::span<const float> x,
                                   const GmmParams& gmm);

/// Reusable form of gmm_posteriors for encoding many features against one
/// mixture.
class PosteriorEvaluator {
 public:
  explicit PosteriorEvaluator(const GmmParams& gmm);
  void eval(std::span<const float> x, std::vector<double>& q) const;

 private:
  const GmmParams* gmm_;
  Eigen::VectorXd offset_;
  Eigen::MatrixXd inv_var_;
};

/// Throws InvalidArgument unless weights sum to 1 and sigmas are positive.
void validate_gmm(const GmmParams& gmm);

struct FisherDescriptor {
  /// [u_1, v_1, ..., u_K, v_K], each block dim() long.
  std::vector<double> values;
};

struct FisherOptions {
  /// Signed square root followed by L2 normalization. Off gives the raw
  /// mean/deviation gradients.
  bool postprocess = true;
};

FisherDescriptor fisher_vector(std::span<const FeatureVector> features,
                               const GmmParams& gmm,
                               const FisherOptions& opts = {});

/// 1 - cos(a, b), clamped to [0, 2].
double cosine_distance(std::span<const double> a, std::span<const double> b);
double cosine_distance(std::span<const double> a, std::span<const float> b);

struct DbEntry {
  std::string model_id;
  std::uint32_t class_id = 0;
  std::uint32_t viewpoint_id = 0;
  std::vector<float> descriptor;
};

struct DescriptorDb {
  std::uint32_t components = 0;
  std::uint32_t feature_dim = static_cast<std::uint32_t>(kFeatureDim);
  std::vector<DbEntry> entries;
};

struct Match {
  std::string model_id;
  std::uint32_t class_id = 0;
  double distance = 0.0;
};

/// Per model, the minimum cosine distance over all (query view, db view)
/// pairs; ascending, ties by model id. Models named in `exclude` are skipped
/// (leave-one-out). top_k == 0 returns the full ranking.
std::vector<Match> query_db(const DescriptorDb& db,
                            const std::vector<FisherDescriptor>& query,
                            std::size_t top_k,
                            const std::vector<std::string>& exclude = {});

}  // namespace viewret

#endif  // VIEWRET_ENCODE_HPP
