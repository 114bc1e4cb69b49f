#pragma once

#include <vector>

#include "ssvm/graph.hpp"

namespace ssvm {

// Multiclass logistic regression over single-node features. Used by the
// bifurcated training regimes, which fit this upfront and feed its output
// probabilities to the structured model as replacement unary features.
struct UnaryClassifier {
  int d_u = 0;
  int num_labels = 0;
  // (d_u + 1) rows per label laid out label-major: weights then bias.
  std::vector<double> weights;

  double& weight(int label, int k) {
    return weights[static_cast<size_t>(label) * (d_u + 1) + k];
  }
  double weight(int label, int k) const {
    return weights[static_cast<size_t>(label) * (d_u + 1) + k];
  }

  std::vector<double> logits(const std::vector<double>& features) const;
  std::vector<double> probs(const std::vector<double>& features) const;
};

// Full-batch softmax cross-entropy gradient descent over all labeled nodes,
// zero-initialized (hence deterministic). If ce_trace is given it receives
// the mean cross-entropy after each epoch.
UnaryClassifier train_unary_classifier(
    const std::vector<FactorGraphSample>& samples, int num_labels, int epochs,
    double rate, std::vector<double>* ce_trace = nullptr);

// Mean cross-entropy of the classifier over all labeled nodes.
double classifier_cross_entropy(const UnaryClassifier& clf,
                                const std::vector<FactorGraphSample>& samples);

// Node-level accuracy of the classifier's argmax prediction.
double classifier_accuracy(const UnaryClassifier& clf,
                           const std::vector<FactorGraphSample>& samples);

// Copies of the samples with node features replaced by the classifier's
// |L| output probabilities (edge features untouched).
std::vector<FactorGraphSample> apply_classifier(
    const UnaryClassifier& clf, const std::vector<FactorGraphSample>& samples);

}  // namespace ssvm
