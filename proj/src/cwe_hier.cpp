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

#include "cvetriage/cwe_hier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <functional>

#include "cvetriage/corpus.hpp"
#include "cvetriage/error.hpp"

namespace cvetriage::cwe {

using classifier::Gradient;
using classifier::LinearHead;
using nlohmann::json;

namespace {

std::string name(int cwe) { return "CWE-" + std::to_string(cwe); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<int> parse_node(std::string_view s) {
  if (s.starts_with("CWE-")) return corpus::parse_cwe_id(s);
  return parse_int(s);
}

const std::set<int>& empty_set() {
  static const std::set<int> none;
  return none;
}

}  // namespace

CweTree CweTree::from_edges(std::span<const TreeEdge> edges) {
  CweTree tree;
  for (const auto& e : edges) {
    if (e.child_level < 1) {
      throw InputError(name(e.child) + ": level must be >= 1");
    }
    const auto [it, inserted] = tree.level_of_.emplace(e.child, e.child_level);
    if (!inserted && it->second != e.child_level) {
      throw InputError(name(e.child) + " is given two levels (" +
                       std::to_string(it->second) + " and " +
                       std::to_string(e.child_level) + ")");
    }
  }
  for (const auto& e : edges) {
    if (!e.parent) continue;
    if (*e.parent == e.child) throw InputError("cycle: " + name(e.child) + " is its own parent");
    if (!tree.level_of_.contains(*e.parent)) {
      throw InputError("unknown parent " + name(*e.parent) + " of " + name(e.child));
    }
    tree.children_[*e.parent].insert(e.child);
    tree.parents_[e.child].insert(*e.parent);
  }

  // Kahn's algorithm over parent -> child edges.
  std::map<int, std::size_t> pending;
  std::deque<int> ready;
  for (const auto& [node, level] : tree.level_of_) {
    pending[node] = tree.parents(node).size();
    if (pending[node] == 0) ready.push_back(node);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const int node = ready.front();
    ready.pop_front();
    ++visited;
    for (int child : tree.children(node)) {
      if (--pending[child] == 0) ready.push_back(child);
    }
  }
  if (visited != tree.level_of_.size()) throw InputError("cycle in CWE tree");

  for (const auto& [node, level] : tree.level_of_) {
    for (int parent : tree.parents(node)) {
      if (tree.level_of_.at(parent) != level - 1) {
        throw InputError("cross-level edge " + name(parent) + " (level " +
                         std::to_string(tree.level_of_.at(parent)) + ") -> " +
                         name(node) + " (level " + std::to_string(level) + ")");
      }
    }
    if (level > 1 && tree.parents(node).empty()) {
      throw InputError("orphan " + name(node) + " at level " + std::to_string(level));
    }
    if (static_cast<std::size_t>(level) > tree.levels_.size()) tree.levels_.resize(level);
    tree.levels_[level - 1].push_back(node);  // map order keeps ids ascending
  }
  return tree;
}

CweTree CweTree::from_csv(std::string_view content) {
  std::vector<TreeEdge> edges;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!content.empty()) {
    const auto newline = content.find('\n');
    const auto line = trim(content.substr(0, newline));
    content = newline == std::string_view::npos ? std::string_view{}
                                                : content.substr(newline + 1);
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "child_id,parent_id,child_level") {
        throw SchemaError("tree CSV line " + std::to_string(line_no) +
                          ": expected header 'child_id,parent_id,child_level'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> cells;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const std::string where = "tree CSV line " + std::to_string(line_no);
    if (cells.size() != 3) throw SchemaError(where + ": expected 3 columns");
    TreeEdge edge;
    const auto child = parse_node(cells[0]);
    const auto level = parse_int(cells[2]);
    if (!child) throw SchemaError(where + ": bad child id '" + std::string(cells[0]) + "'");
    if (!level) throw SchemaError(where + ": bad level '" + std::string(cells[2]) + "'");
    edge.child = *child;
    edge.child_level = *level;
    if (!cells[1].empty()) {
      const auto parent = parse_node(cells[1]);
      if (!parent) {
        throw SchemaError(where + ": bad parent id '" + std::string(cells[1]) + "'");
      }
      edge.parent = *parent;
    }
    edges.push_back(edge);
  }
  if (!header_seen) throw SchemaError("tree CSV is missing its header");
  return from_edges(edges);
}

int CweTree::level_of(int cwe) const {
  const auto it = level_of_.find(cwe);
  if (it == level_of_.end()) throw InputError(name(cwe) + " is not in the tree");
  return it->second;
}

const std::vector<int>& CweTree::nodes_at(int level) const {
  if (level < 1 || level > depth()) {
    throw InputError("level " + std::to_string(level) + " outside 1.." +
                     std::to_string(depth()));
  }
  return levels_[level - 1];
}

std::size_t CweTree::index_in_level(int cwe) const {
  const auto& nodes = nodes_at(level_of(cwe));
  return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), cwe) -
                                  nodes.begin());
}

const std::set<int>& CweTree::children(int cwe) const {
  const auto it = children_.find(cwe);
  return it == children_.end() ? empty_set() : it->second;
}

const std::set<int>& CweTree::parents(int cwe) const {
  const auto it = parents_.find(cwe);
  return it == parents_.end() ? empty_set() : it->second;
}

std::set<int> CweTree::closure(std::span<const int> cwes) const {
  std::set<int> out;
  std::vector<int> stack;
  for (int c : cwes) {
    if (contains(c)) stack.push_back(c);
  }
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    if (!out.insert(node).second) continue;
    for (int p : parents(node)) stack.push_back(p);
  }
  return out;
}

MaskVector build_mask(const CweTree& tree, int level, std::span<const int> accepted_parents) {
  MaskVector mask;
  mask.level = level;
  const auto& nodes = tree.nodes_at(level);
  if (level == 1) {
    mask.bits.assign(nodes.size(), 1);
    return mask;
  }
  mask.bits.assign(nodes.size(), 0);
  for (int parent : accepted_parents) {
    if (tree.level_of(parent) != level - 1) {
      throw InputError("parent " + name(parent) + " is not at level " +
                       std::to_string(level - 1));
    }
    for (int child : tree.children(parent)) mask.bits[tree.index_in_level(child)] = 1;
  }
  return mask;
}

std::vector<double> apply_mask(std::span<const double> logits, const MaskVector& mask) {
  if (logits.size() != mask.bits.size()) {
    throw DimensionError("mask has " + std::to_string(mask.bits.size()) +
                         " entries for " + std::to_string(logits.size()) + " logits");
  }
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = logits[i] * mask.bits[i];
  return out;
}

double masked_bce(const LinearHead& head, std::span<const MaskedTarget> samples,
                  std::span<const std::size_t> batch, Gradient* grad) {
  if (batch.empty()) return 0.0;
  const double scale = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  std::vector<double> delta(head.classes());
  for (std::size_t index : batch) {
    const MaskedTarget& s = samples[index];
    const auto z = head.logits(s.x);
    for (std::size_t c = 0; c < z.size(); ++c) {
      delta[c] = 0.0;
      if (!s.mask[c]) continue;
      const double y = s.targets[c];
      loss += std::max(z[c], 0.0) - y * z[c] + std::log1p(std::exp(-std::abs(z[c])));
      delta[c] = classifier::sigmoid(z[c]) - y;
    }
    if (grad == nullptr) continue;
    for (std::size_t c = 0; c < delta.size(); ++c) grad->bias[c] += scale * delta[c];
    for (std::size_t d = 0; d < head.dim; ++d) {
      const double xd = s.x[d];
      if (xd == 0.0) continue;
      for (std::size_t c = 0; c < delta.size(); ++c) {
        if (delta[c] != 0.0) grad->weights[c * head.dim + d] += scale * delta[c] * xd;
      }
    }
  }
  return loss * scale;
}

namespace {

classifier::TaskSpec level_task(const CweTree& tree, int level) {
  classifier::TaskSpec task;
  task.name = "CWE-L" + std::to_string(level);
  for (int node : tree.nodes_at(level)) task.classes.push_back(name(node));
  task.minority.assign(task.classes.size(), false);
  return task;
}

std::vector<int> at_level(const CweTree& tree, const std::set<int>& nodes, int level) {
  std::vector<int> out;
  for (int n : nodes) {
    if (tree.level_of(n) == level) out.push_back(n);
  }
  return out;
}

}  // namespace

LevelHead train_level(std::span<const HierSample> train, const CweTree& tree, int level,
                      const classifier::FeatureConfig& features,
                      const classifier::TrainConfig& config) {
  if (train.empty()) throw InputError("level " + std::to_string(level) + ": empty training set");
  const std::size_t width = tree.nodes_at(level).size();
  const std::size_t dim = train.front().features.size();

  std::vector<std::vector<std::uint8_t>> targets(train.size(),
                                                 std::vector<std::uint8_t>(width, 0));
  std::vector<MaskVector> masks;
  masks.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].features.size() != dim) {
      throw DimensionError("level " + std::to_string(level) + ": inconsistent feature sizes");
    }
    const auto known = tree.closure(train[i].cwes);
    for (int node : at_level(tree, known, level)) targets[i][tree.index_in_level(node)] = 1;
    std::vector<int> parents;
    if (level > 1) {
      parents = at_level(tree, known, level - 1);
      if (parents.empty()) {
        throw InputError("level " + std::to_string(level) + ": sample " +
                         std::to_string(i) + " has no level-" +
                         std::to_string(level - 1) + " label");
      }
    }
    masks.push_back(build_mask(tree, level, parents));
  }

  std::vector<MaskedTarget> rows;
  rows.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    rows.push_back({train[i].features, targets[i], masks[i].bits});
  }

  auto head = LinearHead::zeros(level_task(tree, level), features,
                                classifier::Output::Sigmoid, dim);
  classifier::fit(
      head, rows.size(),
      [&rows](const LinearHead& h, std::span<const std::size_t> batch, Gradient& grad) {
        return masked_bce(h, rows, batch, &grad);
      },
      config);
  return head;
}

CweModel train_hierarchy(std::span<const HierSample> train, const CweTree& tree,
                         const classifier::FeatureConfig& features,
                         const classifier::TrainConfig& config) {
  if (train.empty()) throw InputError("empty CWE training set");
  const std::size_t dim = train.front().features.size();
  CweModel model{tree, {}};
  for (int level = 1; level <= tree.depth(); ++level) {
    std::vector<HierSample> eligible;
    for (const auto& s : train) {
      if (level == 1 || !at_level(tree, tree.closure(s.cwes), level - 1).empty()) {
        eligible.push_back(s);
      }
    }
    if (eligible.empty()) {
      model.heads.push_back(LinearHead::zeros(level_task(tree, level), features,
                                              classifier::Output::Sigmoid, dim));
      continue;
    }
    auto level_config = config;
    level_config.seed = config.seed + static_cast<std::uint64_t>(level);
    model.heads.push_back(train_level(eligible, tree, level, features, level_config));
  }
  return model;
}

std::vector<double> min_max_scores(std::span<const double> masked_logits,
                                   const MaskVector& mask) {
  std::vector<double> scores(masked_logits.size(), 0.0);
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t i = 0; i < masked_logits.size(); ++i) {
    if (!mask.bits[i]) continue;
    lo = std::min(lo, masked_logits[i]);
    hi = std::max(hi, masked_logits[i]);
  }
  if (!(hi > lo)) return scores;
  for (std::size_t i = 0; i < masked_logits.size(); ++i) {
    if (mask.bits[i]) scores[i] = (masked_logits[i] - lo) / (hi - lo);
  }
  return scores;
}

std::set<int> HierPrediction::accepted_at(int level) const {
  std::set<int> out;
  for (const auto& d : levels) {
    if (d.level != level) continue;
    for (const auto& [cwe, score] : d.accepted) out.insert(cwe);
  }
  return out;
}

json HierPrediction::to_json() const {
  json out{{"levels", json::array()}, {"paths", json::array()}};
  for (const auto& d : levels) {
    json accepted = json::array();
    for (const auto& [cwe, score] : d.accepted) {
      accepted.push_back({{"cwe", name(cwe)}, {"score", score}});
    }
    out["levels"].push_back({{"level", d.level}, {"accepted", accepted}});
  }
  for (const auto& path : paths) {
    json chain = json::array();
    for (int cwe : path) chain.push_back(name(cwe));
    out["paths"].push_back(chain);
  }
  return out;
}

HierPrediction predict_hierarchical(std::span<const double> features,
                                    std::span<const LevelHead> heads, const CweTree& tree,
                                    double tau, std::size_t top_k) {
  HierPrediction prediction;
  std::vector<int> accepted;
  const int deepest = std::min<int>(static_cast<int>(heads.size()), tree.depth());
  for (int level = 1; level <= deepest; ++level) {
    const auto mask = build_mask(tree, level, accepted);
    if (std::find(mask.bits.begin(), mask.bits.end(), 1) == mask.bits.end()) break;
    const auto masked = apply_mask(heads[level - 1].logits(features), mask);
    const auto scores = min_max_scores(masked, mask);

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (mask.bits[i] && scores[i] >= tau) candidates.push_back(i);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    if (candidates.size() > top_k) candidates.resize(top_k);
    if (candidates.empty()) break;

    LevelDecision decision{level, {}};
    accepted.clear();
    const auto& nodes = tree.nodes_at(level);
    for (std::size_t i : candidates) {
      decision.accepted.emplace_back(nodes[i], scores[i]);
      accepted.push_back(nodes[i]);
    }
    prediction.levels.push_back(std::move(decision));
  }

  // Chains follow accepted children only.
  std::function<void(std::vector<int>&)> extend = [&](std::vector<int>& path) {
    const int level = static_cast<int>(path.size());
    const auto next = prediction.accepted_at(level + 1);
    bool extended = false;
    for (int child : tree.children(path.back())) {
      if (!next.contains(child)) continue;
      extended = true;
      path.push_back(child);
      extend(path);
      path.pop_back();
    }
    if (!extended) prediction.paths.push_back(path);
  };
  if (!prediction.levels.empty()) {
    for (const auto& [root, score] : prediction.levels.front().accepted) {
      std::vector<int> path{root};
      extend(path);
    }
  }
  return prediction;
}

}  // namespace cvetriage::cwe
