#include "ssvm/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace ssvm {

namespace {

std::string class_label(const std::vector<std::string>& names, int c) {
  if (c < static_cast<int>(names.size())) return names[c];
  return "class" + std::to_string(c);
}

std::string pct(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

}  // namespace

MetricsReport compute_metrics(const std::vector<Labeling>& truth,
                              const std::vector<Labeling>& predicted,
                              int num_labels) {
  if (truth.size() != predicted.size())
    throw std::invalid_argument("metrics: sample count mismatch");
  MetricsReport rep;
  rep.confusion.assign(num_labels, std::vector<long long>(num_labels, 0));
  for (size_t n = 0; n < truth.size(); ++n) {
    if (truth[n].size() != predicted[n].size())
      throw std::invalid_argument("metrics: labeling length mismatch at sample " +
                                  std::to_string(n));
    for (size_t i = 0; i < truth[n].size(); ++i) {
      int t = truth[n][i], p = predicted[n][i];
      if (t < 0 || t >= num_labels || p < 0 || p >= num_labels)
        throw std::invalid_argument("metrics: label out of range at sample " +
                                    std::to_string(n));
      ++rep.confusion[t][p];
      ++rep.total_nodes;
    }
  }
  if (rep.total_nodes == 0)
    throw std::invalid_argument("metrics: no nodes to score");

  long long correct = 0;
  double recall_sum = 0.0;
  int present = 0;
  rep.per_class.assign(num_labels,
                       std::numeric_limits<double>::quiet_NaN());
  for (int c = 0; c < num_labels; ++c) {
    long long row = 0;
    for (long long v : rep.confusion[c]) row += v;
    correct += rep.confusion[c][c];
    if (row > 0) {
      rep.per_class[c] = static_cast<double>(rep.confusion[c][c]) / row;
      recall_sum += rep.per_class[c];
      ++present;
    }
  }
  rep.pixel_accuracy = static_cast<double>(correct) / rep.total_nodes;
  rep.class_mean_accuracy = present > 0 ? recall_sum / present : 0.0;
  return rep;
}

std::string format_metrics(const MetricsReport& report,
                           const std::vector<std::string>& class_names) {
  const int L = static_cast<int>(report.per_class.size());
  size_t name_w = 10;
  for (int c = 0; c < L; ++c)
    name_w = std::max(name_w, class_label(class_names, c).size());

  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "nodes            %lld\n",
                report.total_nodes);
  out += line;
  out += "pixel accuracy   " + pct(report.pixel_accuracy) + "\n";
  out += "class-mean       " + pct(report.class_mean_accuracy) + "\n\n";

  out += "per-class recall\n";
  for (int c = 0; c < L; ++c) {
    std::string name = class_label(class_names, c);
    name.resize(name_w, ' ');
    out += "  " + name + "  " + pct(report.per_class[c]) + "\n";
  }

  out += "\nconfusion (rows = truth)\n";
  for (int c = 0; c < L; ++c) {
    std::string name = class_label(class_names, c);
    name.resize(name_w, ' ');
    out += "  " + name;
    for (int p = 0; p < L; ++p) {
      std::snprintf(line, sizeof line, " %8lld", report.confusion[c][p]);
      out += line;
    }
    out += "\n";
  }
  return out;
}

std::string metrics_csv(const MetricsReport& report,
                        const std::vector<std::string>& class_names) {
  char line[160];
  std::string out = "metric,class,value\n";
  std::snprintf(line, sizeof line, "pixel_accuracy,,%.17g\n",
                report.pixel_accuracy);
  out += line;
  std::snprintf(line, sizeof line, "class_mean_accuracy,,%.17g\n",
                report.class_mean_accuracy);
  out += line;
  for (size_t c = 0; c < report.per_class.size(); ++c) {
    if (std::isnan(report.per_class[c])) continue;
    std::snprintf(line, sizeof line, "class_recall,%s,%.17g\n",
                  class_label(class_names, static_cast<int>(c)).c_str(),
                  report.per_class[c]);
    out += line;
  }
  return out;
}

}  // namespace ssvm
