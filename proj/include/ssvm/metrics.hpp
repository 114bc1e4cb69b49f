#pragma once

#include <string>
#include <vector>

#include "ssvm/graph.hpp"

namespace ssvm {

// Node-level evaluation of predicted labelings against ground truth.
// per_class holds each class's recall; classes with no ground-truth nodes
// carry NaN and are excluded from the class-mean.
struct MetricsReport {
  long long total_nodes = 0;
  double pixel_accuracy = 0.0;
  double class_mean_accuracy = 0.0;
  std::vector<double> per_class;
  std::vector<std::vector<long long>> confusion;  // [true label][predicted]
};

MetricsReport compute_metrics(const std::vector<Labeling>& truth,
                              const std::vector<Labeling>& predicted,
                              int num_labels);

// Aligned text table: summary metrics, per-class recall, confusion matrix.
std::string format_metrics(const MetricsReport& report,
                           const std::vector<std::string>& class_names = {});

// CSV with one row per class plus summary rows, for downstream plotting.
std::string metrics_csv(const MetricsReport& report,
                        const std::vector<std::string>& class_names = {});

}  // namespace ssvm
