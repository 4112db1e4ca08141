// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numbers>

#include "viewret/encode.hpp"
#include "viewret/error.hpp"

namespace viewret {

FisherDescriptor fisher_vector(std::span<const FeatureVector> features,
                               const GmmParams& gmm,
                               const FisherOptions& opts) {
  if (features.empty()) {
    throw Error(Errc::kEmptyFeatureSet, "cannot encode zero features");
  }
  const std::size_t k = gmm.components();
  const std::size_t d = gmm.dim();
  if (d != kFeatureDim) {
    throw Error(Errc::kDimensionMismatch, "GMM dimension is not 128");
  }
  FisherDescriptor out;
  out.values.assign(2 * d * k, 0.0);

  const PosteriorEvaluator posterior(gmm);
  std::vector<double> q;
  for (const auto& x : features) {
    posterior.eval(x, q);
    for (std::size_t c = 0; c < k; ++c) {
      if (q[c] == 0.0) continue;
      double* u = out.values.data() + 2 * d * c;
      double* v = u + d;
      const auto ci = static_cast<Eigen::Index>(c);
      for (std::size_t j = 0; j < d; ++j) {
        const auto ji = static_cast<Eigen::Index>(j);
        const double z = (x[j] - gmm.means(ci, ji)) / gmm.sigmas(ci, ji);
        u[j] += q[c] * z;
        v[j] += q[c] * (z * z - 1.0);
      }
    }
  }

  const double n = static_cast<double>(features.size());
  for (std::size_t c = 0; c < k; ++c) {
    const double scale = 1.0 / (n * std::sqrt(gmm.weights(static_cast<Eigen::Index>(c))));
    double* u = out.values.data() + 2 * d * c;
    double* v = u + d;
    for (std::size_t j = 0; j < d; ++j) {
      u[j] *= scale;
      v[j] *= scale / std::numbers::sqrt2;
    }
  }

  if (opts.postprocess) {
    double norm2 = 0.0;
    for (double& val : out.values) {
      val = std::copysign(std::sqrt(std::abs(val)), val);
      norm2 += val * val;
    }
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (double& val : out.values) val *= inv;
    }
  }
  return out;
}

namespace {

template <typename T>
double cosine_impl(std::span<const double> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::kDimensionMismatch, "descriptor sizes differ");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double bi = b[i];
    dot += a[i] * bi;
    na += a[i] * a[i];
    nb += bi * bi;
  }
  if (na == 0.0 || nb == 0.0) {
    throw Error(Errc::kZeroVector, "cosine distance of a zero descriptor");
  }
  return std::clamp(1.0 - dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 2.0);
}

}  // namespace

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  return cosine_impl(a, b);
}

double cosine_distance(std::span<const double> a, std::span<const float> b) {
  return cosine_impl(a, b);
}

}  // namespace viewret
