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

#ifndef CVETRIAGE_CWE_HIER_HPP_
#define CVETRIAGE_CWE_HIER_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvetriage/classifier.hpp"
#include "json.hpp"

namespace cvetriage::cwe {

// One row of the tree file: child, optional parent, level of the child.
struct TreeEdge {
  int child = 0;
  std::optional<int> parent;
  int child_level = 1;
};

// Leveled CWE graph. Nodes of level L are indexed 0..N(L)-1 in ascending
// CWE number; every edge joins level L to level L+1. A node may have several
// parents.
class CweTree {
 public:
  CweTree() = default;

  // Throws InputError on a cross-level edge, cycle, orphan non-root, unknown
  // parent or a node given two levels.
  static CweTree from_edges(std::span<const TreeEdge> edges);

  // CSV with header "child_id,parent_id,child_level". Ids may be written as
  // "89" or "CWE-89"; an empty parent marks a root.
  static CweTree from_csv(std::string_view content);

  int depth() const { return static_cast<int>(levels_.size()); }
  bool contains(int cwe) const { return level_of_.contains(cwe); }
  int level_of(int cwe) const;  // throws InputError for unknown ids

  const std::vector<int>& nodes_at(int level) const;  // 1-based level
  std::size_t index_in_level(int cwe) const;

  const std::set<int>& children(int cwe) const;
  const std::set<int>& parents(int cwe) const;

  // The ids plus every ancestor, restricted to known nodes.
  std::set<int> closure(std::span<const int> cwes) const;

  std::size_t size() const { return level_of_.size(); }

 private:
  std::vector<std::vector<int>> levels_;
  std::map<int, int> level_of_;
  std::map<int, std::set<int>> children_;
  std::map<int, std::set<int>> parents_;
};

struct MaskVector {
  int level = 1;
  std::vector<std::uint8_t> bits;  // one per node of `level`
};

// Mask over `level`: all ones for level 1, otherwise the union of the
// children of the accepted parents (which must sit at level - 1).
MaskVector build_mask(const CweTree& tree, int level, std::span<const int> accepted_parents);

// Element-wise product. Throws DimensionError on an arity mismatch.
std::vector<double> apply_mask(std::span<const double> logits, const MaskVector& mask);

// Mean over samples of the summed binary cross-entropy with logits across
// unmasked positions. Masked positions add neither loss nor gradient.
struct MaskedTarget {
  std::span<const double> x;
  std::span<const std::uint8_t> targets;
  std::span<const std::uint8_t> mask;
};
double masked_bce(const classifier::LinearHead& head, std::span<const MaskedTarget> samples,
                  std::span<const std::size_t> batch, classifier::Gradient* grad);

// A document with its features and CWE labels (any level).
struct HierSample {
  std::vector<double> features;
  std::vector<int> cwes;
};

using LevelHead = classifier::LinearHead;  // sigmoid outputs over one level

// Teacher-forced: each sample's mask comes from its true level - 1 labels.
// Throws InputError when a sample has no label at level - 1 (level > 1).
LevelHead train_level(std::span<const HierSample> train, const CweTree& tree, int level,
                      const classifier::FeatureConfig& features,
                      const classifier::TrainConfig& config);

struct CweModel {
  CweTree tree;
  std::vector<LevelHead> heads;  // heads[L - 1] serves level L
};

// One head per level; samples without a parent label at L-1 are left out of
// level L.
CweModel train_hierarchy(std::span<const HierSample> train, const CweTree& tree,
                         const classifier::FeatureConfig& features,
                         const classifier::TrainConfig& config);

struct LevelDecision {
  int level = 0;
  std::vector<std::pair<int, double>> accepted;  // (cwe, min-max score), best first
};

struct HierPrediction {
  std::vector<LevelDecision> levels;
  std::vector<std::vector<int>> paths;  // root-to-deepest chains of accepted nodes

  std::set<int> accepted_at(int level) const;
  nlohmann::json to_json() const;
};

// Min-max normalise the unmasked (masked-product) logits; a level with all
// unmasked logits equal scores zero everywhere.
std::vector<double> min_max_scores(std::span<const double> masked_logits,
                                   const MaskVector& mask);

// Top-down decoding: at each level accept nodes scoring >= tau, keep at most
// top_k, then mask the next level with their children. Stops on an empty
// acceptance or after the deepest head.
HierPrediction predict_hierarchical(std::span<const double> features,
                                    std::span<const LevelHead> heads, const CweTree& tree,
                                    double tau, std::size_t top_k);

}  // namespace cvetriage::cwe

#endif  // CVETRIAGE_CWE_HIER_HPP_
