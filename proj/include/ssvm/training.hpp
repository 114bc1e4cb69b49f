#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssvm/classifier.hpp"
#include "ssvm/factors.hpp"
#include "ssvm/objective.hpp"
#include "ssvm/parallel.hpp"

namespace ssvm {

// Training regimes:
//   unary    pretrained node classifier alone, no structured training
//   bif_lin  classifier probabilities as unary features, linear SSVM on top
//   bif_nrl  classifier probabilities in, neural unary + neural interactions
//   int_lin  integrated: neural unary on raw features, linear interactions
//   int_nrl  integrated: neural unary and neural interaction factors
enum class TrainRegime { unary, bif_lin, bif_nrl, int_lin, int_nrl };

const char* regime_name(TrainRegime r);
TrainRegime regime_from_name(const std::string& name);

enum class BatchMode { full, per_sample };

struct TrainConfig {
  int iterations = 150;
  double lambda = 1.0;  // hinge weight relative to the regularizer
  double mu = 0.1;      // learning rate at iteration t is mu / (t0 + t)
  double t0 = 20.0;
  double momentum = 0.9;
  double unary_rate_scale = 1.0;  // optional per-block rate multipliers
  double inter_rate_scale = 1.0;

  ClassWeightMode weight_mode = ClassWeightMode::class_balanced;
  std::vector<double> explicit_eta;  // used when weight_mode is explicit

  EdgeStateMode edge_mode = EdgeStateMode::symmetric;
  std::vector<int> unary_hidden = {32};
  std::vector<int> inter_hidden = {16};
  Activation hidden_act = Activation::tanh;

  InferOptions infer;  // backend for loss-augmented inference during training
  BatchMode batch = BatchMode::full;
  std::uint64_t seed = 0;

  // Pretraining of the node classifier (bifurcated regimes and unary).
  int clf_epochs = 300;
  double clf_rate = 0.5;

  void validate() const;  // throws on T < 1, lambda <= 0, mu <= 0, t0 < 0
};

struct TraceRow {
  int iteration = 0;
  double objective = 0.0;
  double best_objective = 0.0;
  double mean_hinge = 0.0;
  double seconds = 0.0;  // wall time since training started
};

struct TrainState {
  FactorModel model;       // parameters after the last iteration
  FactorModel best_model;  // snapshot attaining best_objective
  double best_objective = 0.0;
  std::vector<TraceRow> trace;
  int iterations_run = 0;
};

ClassWeights make_class_weights(const TrainConfig& cfg,
                                const std::vector<FactorGraphSample>& samples,
                                int num_labels);

// Core subgradient-descent engine shared by every structured regime: rate
// decay, momentum, best-so-far memoization. The objective recorded each
// iteration is for the parameters BEFORE that iteration's update, computed
// from the same loss-augmented predictions that feed the gradient.
TrainState train_ssvm(const std::vector<FactorGraphSample>& samples,
                      FactorModel init, const TrainConfig& cfg,
                      const ClassWeights& weights, const ExecPolicy& exec);

// A trained regime bundles the optional upfront classifier with the factor
// model. For bifurcated regimes the model runs on classifier probabilities,
// so prediction must transform features first (predict_trained does).
struct TrainedModel {
  TrainRegime regime = TrainRegime::unary;
  std::optional<UnaryClassifier> classifier;
  FactorModel model;
  ClassWeights weights;
  std::optional<TrainState> state;  // absent for the unary regime
};

TrainedModel train_regime(const std::vector<FactorGraphSample>& samples,
                          int num_labels, TrainRegime regime,
                          const TrainConfig& cfg, const ExecPolicy& exec);

// ---------------------------------------------------------------------------
// Prediction.
// ---------------------------------------------------------------------------

enum class AblateKeep { both, unary_only, interaction_only };

const char* ablate_name(AblateKeep k);
AblateKeep ablate_from_name(const std::string& name);

std::vector<Labeling> predict(const std::vector<FactorGraphSample>& samples,
                              const FactorModel& model, const InferOptions& opts,
                              const ExecPolicy& exec);

// Zeroes the excluded factor tables before inference.
std::vector<Labeling> ablate_predict(
    const std::vector<FactorGraphSample>& samples, const FactorModel& model,
    AblateKeep keep, const InferOptions& opts, const ExecPolicy& exec);

std::vector<Labeling> predict_trained(const TrainedModel& trained,
                                      const std::vector<FactorGraphSample>& samples,
                                      const InferOptions& opts,
                                      const ExecPolicy& exec,
                                      AblateKeep keep = AblateKeep::both);

}  // namespace ssvm
