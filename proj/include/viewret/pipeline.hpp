// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VIEWRET_PIPELINE_HPP
#define VIEWRET_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "viewret/encode.hpp"
#include "viewret/features.hpp"
#include "viewret/io.hpp"
#include "viewret/select.hpp"

namespace viewret {

/// Number of database views per model (the dodecahedron vertices).
inline constexpr std::size_t kViewCount = 20;

struct PipelineConfig {
  SamplingParams sampling{1000, 1.0};
  int gmm_components = 256;
  int gmm_iterations = 25;
  /// Cap on pooled features used for GMM fitting; 0 keeps all of them.
  std::size_t gmm_max_features = 0;
  std::vector<int> resolutions = default_resolutions();
  int ransac_iterations = 1000;
  double ransac_tolerance = 0.01;
  /// Resolution for mesh database views and the fixed-resolution cases.
  int fixed_resolution = 256;
  bool fisher_postprocess = true;
  std::uint64_t seed = 42;

  RansacOptions ransac() const;
  GmmOptions gmm() const;
};

/// Applies recognized keys (n_k, s, k, gmm_iterations, gmm_max_features,
/// resolutions, ransac_iterations, ransac_tolerance, fixed_resolution,
/// fisher_postprocess, seed) and returns the keys it did not recognize.
std::vector<std::string> apply_config(const KeyValues& kv, PipelineConfig& cfg);

/// "32,64,128" -> {32, 64, 128}; throws Parse on malformed input.
std::vector<int> parse_int_list(const std::string& text);
Vec3 parse_vec3(const std::string& text);

/// FNV-1a of a model id; keys per-model random streams.
std::uint64_t id_hash(const std::string& id);

struct ModelInput {
  std::string id;
  std::uint32_t class_id = 0;
  std::variant<PointCloud, TriangleMesh> geometry;
};

/// Manifest lines: `model_id class_id path`, paths relative to the manifest.
/// `.obj` files load as meshes, anything else as XYZ point clouds.
std::vector<ModelInput> read_manifest(const fs::path& path);

/// Features of the 20 database views of one model.
struct ModelViews {
  std::string id;
  std::uint32_t class_id = 0;
  int resolution = 0;
  std::vector<std::vector<FeatureVector>> view_features;
};

/// Normalizes the model and renders it from every dodecahedron viewpoint.
/// Meshes use cfg.fixed_resolution; point clouds use the resolution chosen
/// by the proposed method unless `resolution` overrides it.
ModelViews prepare_model_views(const ModelInput& model, const PipelineConfig& cfg,
                               std::optional<int> resolution = std::nullopt);

std::vector<ModelViews> prepare_all_views(const std::vector<ModelInput>& models,
                                          const PipelineConfig& cfg);

/// All view features in model/view order, uniformly subsampled (order
/// preserved) when more than cfg.gmm_max_features are available.
std::vector<FeatureVector> pool_features(const std::vector<ModelViews>& views,
                                         const PipelineConfig& cfg);

GmmFit fit_database_gmm(const std::vector<ModelViews>& views,
                        const PipelineConfig& cfg);

DescriptorDb encode_db(const std::vector<ModelViews>& views,
                       const GmmParams& gmm, const PipelineConfig& cfg);

/// prepare_all_views followed by encode_db.
DescriptorDb build_db(const std::vector<ModelInput>& models,
                      const GmmParams& gmm, const PipelineConfig& cfg);

/// One descriptor per viewpoint for an already normalized query cloud.
std::vector<FisherDescriptor> encode_query(const PointCloud& normalized,
                                           const std::vector<Viewpoint>& views,
                                           int resolution, const GmmParams& gmm,
                                           const PipelineConfig& cfg,
                                           std::uint64_t seed);

}  // namespace viewret

#endif  // VIEWRET_PIPELINE_HPP
