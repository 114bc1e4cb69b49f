#include "ssvm/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssvm {

std::vector<double> UnaryClassifier::logits(
    const std::vector<double>& features) const {
  if (static_cast<int>(features.size()) != d_u)
    throw std::invalid_argument("feature length does not match classifier");
  std::vector<double> out(num_labels);
  for (int c = 0; c < num_labels; ++c) {
    double s = weight(c, d_u);  // bias
    for (int k = 0; k < d_u; ++k) s += weight(c, k) * features[k];
    out[c] = s;
  }
  return out;
}

std::vector<double> UnaryClassifier::probs(
    const std::vector<double>& features) const {
  std::vector<double> p = logits(features);
  const double m = *std::max_element(p.begin(), p.end());
  double z = 0.0;
  for (double& v : p) {
    v = std::exp(v - m);
    z += v;
  }
  for (double& v : p) v /= z;
  return p;
}

namespace {

long long count_nodes(const std::vector<FactorGraphSample>& samples) {
  long long t = 0;
  for (const FactorGraphSample& s : samples) {
    if (!s.ground_truth)
      throw std::invalid_argument("classifier training needs ground truths");
    t += s.node_count();
  }
  return t;
}

}  // namespace

UnaryClassifier train_unary_classifier(
    const std::vector<FactorGraphSample>& samples, int num_labels, int epochs,
    double rate, std::vector<double>* ce_trace) {
  if (samples.empty() || count_nodes(samples) == 0)
    throw std::invalid_argument("empty dataset");
  const int d_u = static_cast<int>(samples[0].node_features.at(0).size());

  UnaryClassifier clf;
  clf.d_u = d_u;
  clf.num_labels = num_labels;
  clf.weights.assign(static_cast<size_t>(num_labels) * (d_u + 1), 0.0);

  const double n_total = static_cast<double>(count_nodes(samples));
  std::vector<double> grad(clf.weights.size());

  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (const FactorGraphSample& s : samples) {
      for (int i = 0; i < s.node_count(); ++i) {
        const std::vector<double>& x = s.node_features[i];
        const int truth = (*s.ground_truth)[i];
        std::vector<double> p = clf.probs(x);
        for (int c = 0; c < num_labels; ++c) {
          const double err = p[c] - (c == truth ? 1.0 : 0.0);
          double* row = grad.data() + static_cast<size_t>(c) * (d_u + 1);
          for (int k = 0; k < d_u; ++k) row[k] += err * x[k];
          row[d_u] += err;
        }
      }
    }
    for (size_t k = 0; k < clf.weights.size(); ++k)
      clf.weights[k] -= rate * grad[k] / n_total;
    if (ce_trace) ce_trace->push_back(classifier_cross_entropy(clf, samples));
  }
  return clf;
}

double classifier_cross_entropy(const UnaryClassifier& clf,
                                const std::vector<FactorGraphSample>& samples) {
  double ce = 0.0;
  long long n = 0;
  for (const FactorGraphSample& s : samples)
    for (int i = 0; i < s.node_count(); ++i) {
      std::vector<double> p = clf.probs(s.node_features[i]);
      ce -= std::log(std::max(p[(*s.ground_truth)[i]], 1e-300));
      ++n;
    }
  return ce / static_cast<double>(n);
}

double classifier_accuracy(const UnaryClassifier& clf,
                           const std::vector<FactorGraphSample>& samples) {
  long long hit = 0, n = 0;
  for (const FactorGraphSample& s : samples)
    for (int i = 0; i < s.node_count(); ++i) {
      std::vector<double> p = clf.probs(s.node_features[i]);
      int arg = static_cast<int>(std::max_element(p.begin(), p.end()) -
                                 p.begin());
      hit += arg == (*s.ground_truth)[i];
      ++n;
    }
  return static_cast<double>(hit) / static_cast<double>(n);
}

std::vector<FactorGraphSample> apply_classifier(
    const UnaryClassifier& clf, const std::vector<FactorGraphSample>& samples) {
  std::vector<FactorGraphSample> out = samples;
  for (FactorGraphSample& s : out)
    for (auto& f : s.node_features) f = clf.probs(f);
  return out;
}

}  // namespace ssvm
