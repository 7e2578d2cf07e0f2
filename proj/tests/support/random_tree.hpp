// Copyright 2026 The cvetriage Authors
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

#ifndef CVETRIAGE_TESTS_RANDOM_TREE_HPP_
#define CVETRIAGE_TESTS_RANDOM_TREE_HPP_

#include <algorithm>
#include <random>
#include <vector>

#include "cvetriage/cwe_hier.hpp"

namespace cvetriage::testing {

// A valid leveled tree with up to `max_levels` levels and `max_nodes` nodes.
// Non-roots get one parent, sometimes two, from the level above.
inline std::vector<cwe::TreeEdge> random_tree_edges(std::mt19937_64& rng, int max_levels,
                                                    int max_nodes) {
  std::uniform_int_distribution<int> level_count(1, max_levels);
  const int levels = level_count(rng);
  std::uniform_int_distribution<int> total(levels, max_nodes);
  const int nodes = total(rng);

  // At least one node per level, the rest spread at random.
  std::vector<int> per_level(levels, 1);
  std::uniform_int_distribution<int> pick_level(0, levels - 1);
  for (int i = levels; i < nodes; ++i) ++per_level[pick_level(rng)];

  std::vector<cwe::TreeEdge> edges;
  std::vector<int> previous;
  int next_id = 1;
  std::bernoulli_distribution second_parent(0.2);
  for (int l = 0; l < levels; ++l) {
    std::vector<int> current;
    for (int i = 0; i < per_level[l]; ++i) {
      const int id = next_id++ * 7;
      current.push_back(id);
      if (l == 0) {
        edges.push_back({id, std::nullopt, 1});
        continue;
      }
      std::uniform_int_distribution<std::size_t> pick(0, previous.size() - 1);
      const int first = previous[pick(rng)];
      edges.push_back({id, first, l + 1});
      if (previous.size() > 1 && second_parent(rng)) {
        int other = previous[pick(rng)];
        if (other != first) edges.push_back({id, other, l + 1});
      }
    }
    previous = current;
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  return edges;
}

}  // namespace cvetriage::testing

#endif  // CVETRIAGE_TESTS_RANDOM_TREE_HPP_
