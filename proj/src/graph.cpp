#include "ssvm/graph.hpp"

#include <set>
#include <stdexcept>
#include <utility>

namespace ssvm {

LabelSet::LabelSet(int c) : count(c) {
  if (c < 2) throw std::invalid_argument("label set needs at least 2 labels");
}

namespace {

void check_labeling(const FactorGraphSample& sample, const Labeling& y,
                    const LabelSet& labels) {
  if (static_cast<int>(y.size()) != sample.node_count())
    throw std::invalid_argument("labeling length does not match node count");
  for (int v : y)
    if (v < 0 || v >= labels.count)
      throw std::invalid_argument("label out of range");
}

}  // namespace

std::vector<double> joint_feature_unary(const FactorGraphSample& sample,
                                        const Labeling& y,
                                        const LabelSet& labels) {
  check_labeling(sample, y, labels);
  const int d_u = sample.node_count() > 0
                      ? static_cast<int>(sample.node_features[0].size())
                      : 0;
  std::vector<double> phi(static_cast<size_t>(d_u) * labels.count, 0.0);
  for (int i = 0; i < sample.node_count(); ++i) {
    const auto& feat = sample.node_features[i];
    if (static_cast<int>(feat.size()) != d_u)
      throw std::invalid_argument("ragged node feature rows");
    double* block = phi.data() + static_cast<size_t>(y[i]) * d_u;
    for (int k = 0; k < d_u; ++k) block[k] += feat[k];
  }
  return phi;
}

std::vector<double> joint_feature_interaction(const FactorGraphSample& sample,
                                              const Labeling& y,
                                              const LabelSet& labels,
                                              const EdgeStateIndex& idx,
                                              int d_i) {
  check_labeling(sample, y, labels);
  if (idx.num_labels != labels.count)
    throw std::invalid_argument("edge state index inconsistent with label set");
  if (d_i < 0)
    d_i = sample.edge_count() > 0
              ? static_cast<int>(sample.edges[0].features.size())
              : 0;
  std::vector<double> phi(static_cast<size_t>(d_i) * idx.dim(), 0.0);
  for (const Edge& e : sample.edges) {
    if (static_cast<int>(e.features.size()) != d_i)
      throw std::invalid_argument("ragged edge feature rows");
    double* block =
        phi.data() + static_cast<size_t>(idx.state(y[e.i], y[e.j])) * d_i;
    for (int k = 0; k < d_i; ++k) block[k] += e.features[k];
  }
  return phi;
}

std::vector<std::string> validate_sample(const FactorGraphSample& sample,
                                         const LabelSet& labels, int expect_du,
                                         int expect_di) {
  std::vector<std::string> violations;
  const int n = sample.node_count();

  int d_u = expect_du;
  if (d_u < 0 && n > 0) d_u = static_cast<int>(sample.node_features[0].size());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(sample.node_features[i].size()) != d_u)
      violations.push_back("node " + std::to_string(i) +
                           ": feature length " +
                           std::to_string(sample.node_features[i].size()) +
                           " != " + std::to_string(d_u));
  }

  int d_i = expect_di;
  if (d_i < 0 && sample.edge_count() > 0)
    d_i = static_cast<int>(sample.edges[0].features.size());
  std::set<std::pair<int, int>> seen;
  for (int e = 0; e < sample.edge_count(); ++e) {
    const Edge& edge = sample.edges[e];
    if (edge.i < 0 || edge.i >= n || edge.j < 0 || edge.j >= n) {
      violations.push_back("edge " + std::to_string(e) + ": endpoint out of range");
      continue;
    }
    if (edge.i == edge.j)
      violations.push_back("edge " + std::to_string(e) + ": self-loop");
    if (edge.i > edge.j)
      violations.push_back("edge " + std::to_string(e) + ": endpoints not ordered i < j");
    if (!seen.insert({edge.i, edge.j}).second)
      violations.push_back("edge " + std::to_string(e) + ": duplicate pair (" +
                           std::to_string(edge.i) + "," +
                           std::to_string(edge.j) + ")");
    if (static_cast<int>(edge.features.size()) != d_i)
      violations.push_back("edge " + std::to_string(e) + ": feature length " +
                           std::to_string(edge.features.size()) +
                           " != " + std::to_string(d_i));
  }

  if (sample.ground_truth) {
    const Labeling& y = *sample.ground_truth;
    if (static_cast<int>(y.size()) != n) {
      violations.push_back("labeling length " + std::to_string(y.size()) +
                           " != node count " + std::to_string(n));
    } else {
      for (int i = 0; i < n; ++i)
        if (y[i] < 0 || y[i] >= labels.count)
          violations.push_back("node " + std::to_string(i) +
                               ": ground-truth label out of range");
    }
  }
  return violations;
}

const char* edge_mode_name(EdgeStateMode m) {
  return m == EdgeStateMode::full ? "full" : "symmetric";
}

EdgeStateMode edge_mode_from_name(const std::string& name) {
  if (name == "full") return EdgeStateMode::full;
  if (name == "symmetric") return EdgeStateMode::symmetric;
  throw std::invalid_argument("unknown edge state mode: " + name);
}

}  // namespace ssvm
