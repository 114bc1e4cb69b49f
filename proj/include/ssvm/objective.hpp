#pragma once

#include <vector>

#include "ssvm/factors.hpp"
#include "ssvm/graph.hpp"
#include "ssvm/inference.hpp"
#include "ssvm/parallel.hpp"

namespace ssvm {

// ---------------------------------------------------------------------------
// Class-weighted Hamming loss.
// ---------------------------------------------------------------------------

enum class ClassWeightMode { uniform, class_balanced, explicit_weights };

const char* weight_mode_name(ClassWeightMode m);
ClassWeightMode weight_mode_from_name(const std::string& name);

struct ClassWeights {
  ClassWeightMode mode = ClassWeightMode::uniform;
  std::vector<double> eta;  // one weight per label

  static ClassWeights uniform_for(int num_labels);

  // eta(c) proportional to the inverse frequency of class c in the ground
  // truths, scaled so sum_c eta(c) * count(c) equals the total node count
  // (a uniform weighting of a balanced set stays at 1). Classes that never
  // occur get weight 0; they can never be a ground-truth label anyway.
  static ClassWeights balanced(const std::vector<FactorGraphSample>& samples,
                               int num_labels);

  static ClassWeights explicit_eta(std::vector<double> eta);
};

// Delta(y_true, y) = sum_i eta[y_true_i] * [y_true_i != y_i].
double structured_loss(const Labeling& y_true, const Labeling& y,
                       const ClassWeights& weights);

// ---------------------------------------------------------------------------
// Structured hinge and full objective.
// ---------------------------------------------------------------------------

struct HingeResult {
  double value = 0.0;  // Delta(y, z) - g(y) + g(z); can dip below 0 only
                       // when the backend is approximate
  Labeling z;          // loss-augmented prediction that attains it
};

HingeResult hinge_term(const FactorGraphSample& sample,
                       const FactorTables& tables, const Labeling& ground_truth,
                       const ClassWeights& weights, const EdgeStateIndex& idx,
                       const InferOptions& opts);

struct ObjectiveReport {
  double total = 0.0;        // regularizer + lambda * mean_hinge
  double regularizer = 0.0;  // 0.5 * squared norm of all parameter blocks
  double mean_hinge = 0.0;   // mean over samples of max(hinge, 0)
  std::vector<double> per_sample_hinge;  // clamped at 0
  std::vector<int> active_set;           // samples with raw hinge > 0
  InferBackend backend = InferBackend::exact;
};

// Assembling the total from parts is shared with the trainer so a best-model
// snapshot re-evaluates to exactly the recorded objective.
double assemble_objective(double regularizer, double hinge_sum, int num_samples,
                          double lambda);

ObjectiveReport objective_value(const std::vector<FactorGraphSample>& samples,
                                const FactorModel& model, double lambda,
                                const ClassWeights& weights,
                                const InferOptions& opts,
                                const ExecPolicy& exec = ExecPolicy::serial());

// ---------------------------------------------------------------------------
// Per-sample (sub)gradients.
// ---------------------------------------------------------------------------

// Contribution of one sample to d(objective)/d(parameters), for the two
// blocks laid out like unary_param_block / inter_param_block. When the hinge
// is active this is params + lambda * (feature-or-backprop difference
// between z and the truth); otherwise the regularizer term alone.
struct SampleGradient {
  std::vector<double> unary;
  std::vector<double> inter;
};

SampleGradient sample_gradient(const FactorModel& model,
                               const FactorGraphSample& sample,
                               const Labeling& z, const Labeling& ground_truth,
                               bool hinge_active, double lambda);

// Same quantity for a fully linear model, concatenated as [unary; inter].
// Kept separate because the convexity/subgradient property tests speak the
// single-vector language.
std::vector<double> subgradient_linear(const FactorModel& model,
                                       const FactorGraphSample& sample,
                                       const Labeling& z,
                                       const Labeling& ground_truth,
                                       bool hinge_active, double lambda);

}  // namespace ssvm
