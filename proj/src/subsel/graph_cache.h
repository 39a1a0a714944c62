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

#ifndef SUBSEL_GRAPH_CACHE_H_
#define SUBSEL_GRAPH_CACHE_H_

#include <optional>
#include <string>

#include "subsel/graph.h"

namespace subsel {

// A cache entry is valid only for the same embeddings content and the same
// construction parameters.
struct GraphCacheKey {
  std::string embeddings_sha256;
  KnnOptions knn;
  ThresholdSpec threshold;
};

struct CachedGraph {
  NeighborGraph graph;
  CliqueSet cliques;
};

// Binary file, magic "SUBSEL-GRF\0".
void SaveGraphCache(const std::string& path, const GraphCacheKey& key,
                    const NeighborGraph& graph, const CliqueSet& cliques);

// nullopt when the file is absent or was built for a different key; throws
// Error(kFormat) on a corrupt file.
std::optional<CachedGraph> LoadGraphCache(const std::string& path,
                                          const GraphCacheKey& key);

}  // namespace subsel

#endif  // SUBSEL_GRAPH_CACHE_H_
