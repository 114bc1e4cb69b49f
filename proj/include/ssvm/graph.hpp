#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ssvm {

// A labeling assigns one label in 0..|L|-1 to every node of a sample.
using Labeling = std::vector<int>;

// Set of class labels 0..count-1.
struct LabelSet {
  int count = 2;

  LabelSet() = default;
  explicit LabelSet(int c);
};

struct Edge {
  int i = 0;
  int j = 0;  // i < j, undirected
  std::vector<double> features;
};

// One instance: per-node feature vectors, undirected edges with their own
// feature vectors, and (for training data) a ground-truth labeling.
struct FactorGraphSample {
  std::vector<std::vector<double>> node_features;
  std::vector<Edge> edges;
  std::optional<Labeling> ground_truth;

  int node_count() const { return static_cast<int>(node_features.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
};

enum class EdgeStateMode { full, symmetric };

const char* edge_mode_name(EdgeStateMode m);
EdgeStateMode edge_mode_from_name(const std::string& name);

// Bijection from a pair of incident labels to a pairwise state slot.
// full mode keeps all |L|^2 ordered pairs; symmetric mode identifies (m,n)
// with (n,m) and has |L|(|L|+1)/2 slots.
struct EdgeStateIndex {
  EdgeStateMode mode = EdgeStateMode::full;
  int num_labels = 2;

  EdgeStateIndex() = default;
  EdgeStateIndex(EdgeStateMode m, int label_count)
      : mode(m), num_labels(label_count) {}
  EdgeStateIndex(EdgeStateMode m, const LabelSet& labels)
      : mode(m), num_labels(labels.count) {}

  int dim() const {
    return mode == EdgeStateMode::full ? num_labels * num_labels
                                       : num_labels * (num_labels + 1) / 2;
  }

  int state(int m, int n) const {
    if (mode == EdgeStateMode::full) return m * num_labels + n;
    if (m > n) std::swap(m, n);
    // row-major upper triangle, diagonal included
    return m * num_labels - m * (m - 1) / 2 + (n - m);
  }
};

// Sum over nodes of the label-indexed unary feature blocks: block y_i of the
// result accumulates node i's features, all other blocks untouched.
// Length d_u * |L|.
std::vector<double> joint_feature_unary(const FactorGraphSample& sample,
                                        const Labeling& y,
                                        const LabelSet& labels);

// Sum over edges of the pair-indexed interaction feature blocks: block
// state(y_i, y_j) accumulates the edge's features. Length d_i * idx.dim().
// d_i is normally a dataset-level constant; pass -1 to infer it from the
// first edge (an edgeless sample then yields an empty vector).
std::vector<double> joint_feature_interaction(const FactorGraphSample& sample,
                                              const Labeling& y,
                                              const LabelSet& labels,
                                              const EdgeStateIndex& idx,
                                              int d_i = -1);

// Diagnostic check of every structural invariant (endpoint indices,
// self-loops, duplicate edges, ragged feature rows, ground-truth length and
// label range). Returns one message per violation; empty means well formed.
// expect_du / expect_di pin the dataset-level feature dimensions; pass -1 to
// infer them from the sample itself.
std::vector<std::string> validate_sample(const FactorGraphSample& sample,
                                         const LabelSet& labels,
                                         int expect_du = -1, int expect_di = -1);

}  // namespace ssvm
