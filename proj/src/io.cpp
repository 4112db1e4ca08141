// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include "viewret/io.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "viewret/error.hpp"

namespace viewret {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

std::ifstream open_in(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::kIo, "cannot open " + path.string());
  return is;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::kIo, "cannot write " + path.string());
  return os;
}

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw Error(Errc::kParse, "truncated binary file");
  return value;
}

void expect_magic(std::istream& is, const char (&magic)[5]) {
  char buf[4];
  is.read(buf, 4);
  if (!is || std::memcmp(buf, magic, 4) != 0) {
    throw Error(Errc::kParse, std::string("missing magic ") + magic);
  }
}

void put_floats(std::ostream& os, const float* data, std::size_t n) {
  os.write(reinterpret_cast<const char*>(data),
           static_cast<std::streamsize>(n * sizeof(float)));
}

void get_floats(std::istream& is, float* data, std::size_t n) {
  is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(float)));
  if (!is) throw Error(Errc::kParse, "truncated float block");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(Errc::kParse, "line " + std::to_string(line) + ": bad number '" + tok + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Skips whitespace and `#` comments in a PNM header, then reads an integer.
int pnm_int(std::istream& is) {
  int c = is.peek();
  while (c != EOF) {
    if (c == '#') {
      std::string skip;
      std::getline(is, skip);
    } else if (std::isspace(c)) {
      is.get();
    } else {
      break;
    }
    c = is.peek();
  }
  int v = 0;
  if (!(is >> v)) throw Error(Errc::kParse, "bad PNM header");
  return v;
}

}  // namespace

PointCloud read_xyz(std::istream& is) {
  PointCloud cloud;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ss(t);
    std::string a, b, c, extra;
    if (!(ss >> a >> b >> c) || (ss >> extra)) {
      throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": expected 'x y z'");
    }
    Vec3 p(parse_double(a, lineno), parse_double(b, lineno), parse_double(c, lineno));
    if (!p.allFinite()) {
      throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": non-finite coordinate");
    }
    cloud.points.push_back(p);
  }
  return cloud;
}

PointCloud read_xyz(const fs::path& path) {
  auto is = open_in(path);
  return read_xyz(is);
}

void write_xyz(std::ostream& os, const PointCloud& cloud) {
  for (const auto& p : cloud.points) {
    os << format_double(p.x()) << ' ' << format_double(p.y()) << ' '
       << format_double(p.z()) << '\n';
  }
}

void write_xyz(const fs::path& path, const PointCloud& cloud) {
  auto os = open_out(path);
  write_xyz(os, cloud);
}

TriangleMesh read_obj(std::istream& is) {
  TriangleMesh mesh;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "v") {
      std::string a, b, c;
      if (!(ss >> a >> b >> c)) {
        throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": short vertex");
      }
      mesh.vertices.emplace_back(parse_double(a, lineno), parse_double(b, lineno),
                                 parse_double(c, lineno));
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        const std::string head = tok.substr(0, tok.find('/'));
        int v = 0;
        const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), v);
        if (ec != std::errc() || ptr != head.data() + head.size() || v == 0) {
          throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": bad face index");
        }
        // Negative indices are relative to the current vertex count.
        idx.push_back(v > 0 ? v - 1 : static_cast<int>(mesh.vertices.size()) + v);
      }
      if (idx.size() != 3) {
        throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": face is not a triangle");
      }
      mesh.triangles.push_back({idx[0], idx[1], idx[2]});
    }
  }
  validate_mesh(mesh);
  return mesh;
}

TriangleMesh read_obj(const fs::path& path) {
  auto is = open_in(path);
  return read_obj(is);
}

void write_obj(std::ostream& os, const TriangleMesh& mesh) {
  for (const auto& v : mesh.vertices) {
    os << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' '
       << format_double(v.z()) << '\n';
  }
  for (const auto& t : mesh.triangles) {
    os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

void write_obj(const fs::path& path, const TriangleMesh& mesh) {
  auto os = open_out(path);
  write_obj(os, mesh);
}

void write_pgm(std::ostream& os, const DepthImage& img) {
  os << "P5\n" << img.size() << ' ' << img.size() << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.pixels().data()),
           static_cast<std::streamsize>(img.pixels().size()));
}

void write_pgm(const fs::path& path, const DepthImage& img) {
  auto os = open_out(path);
  write_pgm(os, img);
}

DepthImage read_pgm(std::istream& is) {
  std::string magic;
  if (!(is >> magic) || magic != "P5") throw Error(Errc::kParse, "not a P5 PGM");
  const int w = pnm_int(is);
  const int h = pnm_int(is);
  const int maxval = pnm_int(is);
  if (w != h || w <= 0) throw Error(Errc::kParse, "depth images must be square");
  if (maxval != 255) throw Error(Errc::kParse, "only maxval 255 is supported");
  is.get();  // single whitespace before the raster
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
  is.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!is) throw Error(Errc::kParse, "truncated PGM raster");
  return DepthImage(w, std::move(px));
}

DepthImage read_pgm(const fs::path& path) {
  auto is = open_in(path);
  return read_pgm(is);
}

void write_pbm(std::ostream& os, const BinaryImage& img) {
  const int n = img.size();
  os << "P4\n" << n << ' ' << n << '\n';
  const int stride = (n + 7) / 8;
  std::vector<std::uint8_t> row(static_cast<std::size_t>(stride));
  for (int r = 0; r < n; ++r) {
    std::fill(row.begin(), row.end(), 0);
    for (int c = 0; c < n; ++c) {
      if (img.at(r, c)) row[c / 8] |= static_cast<std::uint8_t>(0x80 >> (c % 8));
    }
    os.write(reinterpret_cast<const char*>(row.data()), stride);
  }
}

void write_pbm(const fs::path& path, const BinaryImage& img) {
  auto os = open_out(path);
  write_pbm(os, img);
}

void write_features(std::ostream& os, const std::vector<FeatureVector>& features) {
  os.write("SFT1", 4);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(features.size()));
  for (const auto& f : features) put_floats(os, f.data(), f.size());
}

void write_features(const fs::path& path, const std::vector<FeatureVector>& features) {
  auto os = open_out(path);
  write_features(os, features);
}

std::vector<FeatureVector> read_features(std::istream& is) {
  expect_magic(is, "SFT1");
  const auto count = get<std::uint32_t>(is);
  std::vector<FeatureVector> out(count);
  for (auto& f : out) get_floats(is, f.data(), f.size());
  return out;
}

std::vector<FeatureVector> read_features(const fs::path& path) {
  auto is = open_in(path);
  return read_features(is);
}

void write_gmm(std::ostream& os, const GmmParams& gmm) {
  os.write("GMM1", 4);
  const auto k = gmm.components();
  const auto d = gmm.dim();
  put<std::uint32_t>(os, static_cast<std::uint32_t>(k));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(d));
  for (std::size_t c = 0; c < k; ++c) put<float>(os, static_cast<float>(gmm.weights(c)));
  for (const Eigen::MatrixXd* m : {&gmm.means, &gmm.sigmas}) {
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t j = 0; j < d; ++j)
        put<float>(os, static_cast<float>((*m)(c, j)));
  }
}

void write_gmm(const fs::path& path, const GmmParams& gmm) {
  auto os = open_out(path);
  write_gmm(os, gmm);
}

GmmParams read_gmm(std::istream& is) {
  expect_magic(is, "GMM1");
  const auto k = get<std::uint32_t>(is);
  const auto d = get<std::uint32_t>(is);
  if (k == 0 || d == 0) throw Error(Errc::kParse, "empty GMM");
  GmmParams gmm;
  gmm.weights.resize(k);
  gmm.means.resize(k, d);
  gmm.sigmas.resize(k, d);
  for (std::uint32_t c = 0; c < k; ++c) gmm.weights(c) = get<float>(is);
  for (Eigen::MatrixXd* m : {&gmm.means, &gmm.sigmas}) {
    for (std::uint32_t c = 0; c < k; ++c)
      for (std::uint32_t j = 0; j < d; ++j) (*m)(c, j) = get<float>(is);
  }
  // float32 storage perturbs the weight sum slightly.
  gmm.weights /= gmm.weights.sum();
  validate_gmm(gmm);
  return gmm;
}

GmmParams read_gmm(const fs::path& path) {
  auto is = open_in(path);
  return read_gmm(is);
}

void write_db(std::ostream& os, const DescriptorDb& db) {
  os.write("FVDB", 4);
  put<std::uint32_t>(os, 1);
  put<std::uint32_t>(os, db.components);
  put<std::uint32_t>(os, db.feature_dim);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(db.entries.size()));
  const std::size_t len = 2ull * db.components * db.feature_dim;
  for (const auto& e : db.entries) {
    if (e.model_id.size() > 0xffff) throw Error(Errc::kInvalidArgument, "model id too long");
    if (e.descriptor.size() != len) {
      throw Error(Errc::kDimensionMismatch, "descriptor length does not match header");
    }
    put<std::uint16_t>(os, static_cast<std::uint16_t>(e.model_id.size()));
    os.write(e.model_id.data(), static_cast<std::streamsize>(e.model_id.size()));
    put<std::uint32_t>(os, e.class_id);
    put<std::uint32_t>(os, e.viewpoint_id);
    put_floats(os, e.descriptor.data(), e.descriptor.size());
  }
}

void write_db(const fs::path& path, const DescriptorDb& db) {
  auto os = open_out(path);
  write_db(os, db);
}

DescriptorDb read_db(std::istream& is) {
  expect_magic(is, "FVDB");
  if (get<std::uint32_t>(is) != 1) throw Error(Errc::kParse, "unsupported FVDB version");
  DescriptorDb db;
  db.components = get<std::uint32_t>(is);
  db.feature_dim = get<std::uint32_t>(is);
  const auto count = get<std::uint32_t>(is);
  const std::size_t len = 2ull * db.components * db.feature_dim;
  db.entries.resize(count);
  for (auto& e : db.entries) {
    const auto n = get<std::uint16_t>(is);
    e.model_id.resize(n);
    is.read(e.model_id.data(), n);
    if (!is) throw Error(Errc::kParse, "truncated model id");
    e.class_id = get<std::uint32_t>(is);
    e.viewpoint_id = get<std::uint32_t>(is);
    e.descriptor.resize(len);
    get_floats(is, e.descriptor.data(), len);
  }
  return db;
}

DescriptorDb read_db(const fs::path& path) {
  auto is = open_in(path);
  return read_db(is);
}

KeyValues read_key_values(std::istream& is) {
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": expected key=value");
    }
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_values(const fs::path& path) {
  auto is = open_in(path);
  return read_key_values(is);
}

void write_key_values(std::ostream& os, const KeyValues& kv) {
  for (const auto& [k, v] : kv) os << k << '=' << v << '\n';
}

void write_key_values(const fs::path& path, const KeyValues& kv) {
  auto os = open_out(path);
  write_key_values(os, kv);
}

}  // namespace viewret
