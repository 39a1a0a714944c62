// Copyright 2026 The subsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subsel/graph_cache.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <vector>

namespace subsel {
namespace {

constexpr char kMagic[11] = {'S', 'U', 'B', 'S', 'E', 'L',
                             '-', 'G', 'R', 'F', '\0'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  template <typename T>
  void Put(const T& v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void PutBytes(const char* p, std::size_t n) {
    bytes_.insert(bytes_.end(), p, p + n);
  }
  const std::vector<char>& bytes() const { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class Reader {
 public:
  Reader(const std::vector<char>& bytes, const std::string& path)
      : bytes_(bytes), path_(path) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string GetString(std::size_t n) {
    Need(n);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::kFormat, "graph cache " + path_ + " is truncated");
    }
  }

  const std::vector<char>& bytes_;
  const std::string& path_;
  std::size_t pos_ = 0;
};

void PutKey(Writer& w, const GraphCacheKey& key) {
  std::string digest = key.embeddings_sha256;
  digest.resize(64, ' ');
  w.PutBytes(digest.data(), digest.size());
  w.Put(static_cast<std::uint64_t>(key.knn.k));
  w.Put(static_cast<std::uint8_t>(key.knn.method));
  const bool approximate = key.knn.method == KnnMethod::kRandomProjection;
  w.Put(approximate ? key.knn.seed : std::uint64_t{0});
  w.Put(static_cast<std::uint32_t>(approximate ? key.knn.num_trees : 0));
  w.Put(static_cast<std::uint64_t>(approximate ? key.knn.leaf_size : 0));
  w.Put(static_cast<std::uint8_t>(key.threshold.kind));
  w.Put(key.threshold.value);
}

}  // namespace

void SaveGraphCache(const std::string& path, const GraphCacheKey& key,
                    const NeighborGraph& graph, const CliqueSet& cliques) {
  Writer w;
  w.PutBytes(kMagic, sizeof(kMagic));
  w.Put(kVersion);
  PutKey(w, key);
  w.Put(static_cast<std::uint64_t>(graph.size()));
  w.Put(cliques.area_threshold());
  w.Put(static_cast<std::uint64_t>(graph.adjacency().size()));
  for (std::size_t off : graph.offsets()) w.Put(static_cast<std::uint64_t>(off));
  for (const auto& nb : graph.adjacency()) {
    w.Put(static_cast<std::int32_t>(nb.node));
    w.Put(nb.weight);
  }
  w.Put(static_cast<std::uint64_t>(cliques.triples().size()));
  for (const auto& t : cliques.triples()) {
    for (Index v : t) w.Put(static_cast<std::int32_t>(v));
  }
  for (std::uint8_t f : cliques.thin_flags()) w.Put(f);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp);
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::optional<CachedGraph> LoadGraphCache(const std::string& path,
                                          const GraphCacheKey& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  const std::vector<char> bytes{std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>()};
  Reader r(bytes, path);
  if (r.GetString(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) {
    throw Error(ErrorCode::kFormat, path + " is not a graph cache file");
  }
  if (r.Get<std::uint32_t>() != kVersion) {
    throw Error(ErrorCode::kFormat, path + ": unsupported cache version");
  }
  Writer expected;
  PutKey(expected, key);
  const std::string stored_key = r.GetString(expected.bytes().size());
  if (stored_key != std::string(expected.bytes().begin(), expected.bytes().end())) {
    return std::nullopt;
  }
  const auto n = r.Get<std::uint64_t>();
  const double area_threshold = r.Get<double>();
  const auto nnz = r.Get<std::uint64_t>();
  if (n > (1ull << 31) || nnz > bytes.size()) {
    throw Error(ErrorCode::kFormat, path + ": implausible sizes");
  }
  std::vector<std::size_t> offsets(n + 1);
  for (auto& off : offsets) off = r.Get<std::uint64_t>();
  std::vector<Neighbor> adjacency(nnz);
  for (auto& nb : adjacency) {
    nb.node = r.Get<std::int32_t>();
    nb.weight = r.Get<double>();
  }
  const auto num_triples = r.Get<std::uint64_t>();
  if (num_triples > bytes.size()) {
    throw Error(ErrorCode::kFormat, path + ": implausible triple count");
  }
  std::vector<Triple> triples(num_triples);
  for (auto& t : triples) {
    for (auto& v : t) v = r.Get<std::int32_t>();
  }
  std::vector<std::uint8_t> thin(num_triples);
  for (auto& f : thin) f = r.Get<std::uint8_t>();
  if (!r.AtEnd()) throw Error(ErrorCode::kFormat, path + ": trailing bytes");

  const auto nodes = static_cast<Index>(n);
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
    if (offsets[i] > offsets[i + 1]) {
      throw Error(ErrorCode::kFormat, path + ": corrupt offsets");
    }
  }
  for (const auto& nb : adjacency) {
    if (nb.node < 0 || nb.node >= nodes) {
      throw Error(ErrorCode::kFormat, path + ": neighbour out of range");
    }
  }
  CachedGraph out{
      NeighborGraph::FromCsr(nodes, key.knn.k, std::move(offsets),
                             std::move(adjacency)),
      CliqueSet(nodes, std::move(triples), std::move(thin), area_threshold)};
  return out;
}

}  // namespace subsel
