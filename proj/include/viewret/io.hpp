// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VIEWRET_IO_HPP
#define VIEWRET_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "viewret/encode.hpp"
#include "viewret/features.hpp"
#include "viewret/geometry.hpp"
#include "viewret/render.hpp"

namespace viewret {

namespace fs = std::filesystem;

// All readers throw Error(kIo) when the file cannot be opened (the message
// carries the path) and Error(kParse) for malformed content.

/// ASCII `x y z` per line; blank lines and lines starting with `#` are
/// skipped.
PointCloud read_xyz(std::istream& is);
PointCloud read_xyz(const fs::path& path);
void write_xyz(std::ostream& os, const PointCloud& cloud);
void write_xyz(const fs::path& path, const PointCloud& cloud);

/// OBJ subset: `v` and triangular `f` records. Face entries may carry
/// `/vt/vn` suffixes, which are dropped. Other records are ignored.
TriangleMesh read_obj(std::istream& is);
TriangleMesh read_obj(const fs::path& path);
void write_obj(std::ostream& os, const TriangleMesh& mesh);
void write_obj(const fs::path& path, const TriangleMesh& mesh);

/// Binary PGM (P5, maxval 255).
void write_pgm(std::ostream& os, const DepthImage& img);
void write_pgm(const fs::path& path, const DepthImage& img);
DepthImage read_pgm(std::istream& is);
DepthImage read_pgm(const fs::path& path);

/// Binary PBM (P4), 1 = foreground (black).
void write_pbm(std::ostream& os, const BinaryImage& img);
void write_pbm(const fs::path& path, const BinaryImage& img);

/// `SFT1`, u32 count, count x 128 float32, little-endian.
void write_features(std::ostream& os, const std::vector<FeatureVector>& features);
void write_features(const fs::path& path, const std::vector<FeatureVector>& features);
std::vector<FeatureVector> read_features(std::istream& is);
std::vector<FeatureVector> read_features(const fs::path& path);

/// `GMM1`, u32 K, u32 D, then weights, means, deviations as float32.
void write_gmm(std::ostream& os, const GmmParams& gmm);
void write_gmm(const fs::path& path, const GmmParams& gmm);
GmmParams read_gmm(std::istream& is);
GmmParams read_gmm(const fs::path& path);

/// `FVDB`, u32 version 1, u32 K, u32 D, u32 count, then per entry a u16
/// length-prefixed UTF-8 model id, u32 class, u32 viewpoint and 2*D*K
/// float32 values.
void write_db(std::ostream& os, const DescriptorDb& db);
void write_db(const fs::path& path, const DescriptorDb& db);
DescriptorDb read_db(std::istream& is);
DescriptorDb read_db(const fs::path& path);

using KeyValues = std::map<std::string, std::string>;

/// Plain `key=value` lines; `#` comments and blank lines skipped, whitespace
/// around keys and values trimmed.
KeyValues read_key_values(std::istream& is);
KeyValues read_key_values(const fs::path& path);
void write_key_values(std::ostream& os, const KeyValues& kv);
void write_key_values(const fs::path& path, const KeyValues& kv);

}  // namespace viewret

#endif  // VIEWRET_IO_HPP
