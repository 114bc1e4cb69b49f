#include "ssvm/training.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

#include "ssvm/rng.hpp"

namespace ssvm {

const char* regime_name(TrainRegime r) {
  switch (r) {
    case TrainRegime::unary: return "unary";
    case TrainRegime::bif_lin: return "bif_lin";
    case TrainRegime::bif_nrl: return "bif_nrl";
    case TrainRegime::int_lin: return "int_lin";
    case TrainRegime::int_nrl: return "int_nrl";
  }
  throw std::logic_error("unknown regime");
}

TrainRegime regime_from_name(const std::string& name) {
  if (name == "unary") return TrainRegime::unary;
  if (name == "bif_lin") return TrainRegime::bif_lin;
  if (name == "bif_nrl") return TrainRegime::bif_nrl;
  if (name == "int_lin") return TrainRegime::int_lin;
  if (name == "int_nrl") return TrainRegime::int_nrl;
  throw std::invalid_argument("unknown training regime '" + name + "'");
}

const char* ablate_name(AblateKeep k) {
  switch (k) {
    case AblateKeep::both: return "both";
    case AblateKeep::unary_only: return "unary_only";
    case AblateKeep::interaction_only: return "interaction_only";
  }
  throw std::logic_error("unknown ablation");
}

AblateKeep ablate_from_name(const std::string& name) {
  if (name == "both") return AblateKeep::both;
  if (name == "unary_only") return AblateKeep::unary_only;
  if (name == "interaction_only") return AblateKeep::interaction_only;
  throw std::invalid_argument("unknown ablation mode '" + name + "'");
}

void TrainConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (lambda <= 0.0) throw std::invalid_argument("lambda must be > 0");
  if (mu <= 0.0) throw std::invalid_argument("mu must be > 0");
  if (t0 < 0.0) throw std::invalid_argument("t0 must be >= 0");
  if (momentum < 0.0 || momentum >= 1.0)
    throw std::invalid_argument("momentum must lie in [0, 1)");
  if (unary_rate_scale <= 0.0 || inter_rate_scale <= 0.0)
    throw std::invalid_argument("rate scales must be > 0");
  for (int w : unary_hidden)
    if (w < 1) throw std::invalid_argument("unary hidden widths must be >= 1");
  for (int w : inter_hidden)
    if (w < 1) throw std::invalid_argument("inter hidden widths must be >= 1");
  if (clf_epochs < 0) throw std::invalid_argument("clf_epochs must be >= 0");
  if (clf_rate <= 0.0) throw std::invalid_argument("clf_rate must be > 0");
}

ClassWeights make_class_weights(const TrainConfig& cfg,
                                const std::vector<FactorGraphSample>& samples,
                                int num_labels) {
  switch (cfg.weight_mode) {
    case ClassWeightMode::uniform:
      return ClassWeights::uniform_for(num_labels);
    case ClassWeightMode::class_balanced:
      return ClassWeights::balanced(samples, num_labels);
    case ClassWeightMode::explicit_weights:
      if (static_cast<int>(cfg.explicit_eta.size()) != num_labels)
        throw std::invalid_argument("explicit eta length must equal label count");
      return ClassWeights::explicit_eta(cfg.explicit_eta);
  }
  throw std::logic_error("unknown class weight mode");
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void momentum_step(std::vector<double>& params, std::vector<double>& velocity,
                   const std::vector<double>& grad, double rate,
                   double momentum) {
  for (size_t k = 0; k < params.size(); ++k) {
    velocity[k] = momentum * velocity[k] - rate * grad[k];
    params[k] += velocity[k];
  }
}

}  // namespace

TrainState train_ssvm(const std::vector<FactorGraphSample>& samples,
                      FactorModel init, const TrainConfig& cfg,
                      const ClassWeights& weights, const ExecPolicy& exec) {
  cfg.validate();
  if (samples.empty()) throw std::invalid_argument("empty training set");
  const int N = static_cast<int>(samples.size());
  for (const FactorGraphSample& s : samples)
    if (!s.ground_truth)
      throw std::invalid_argument("training needs ground truths");

  TrainState state;
  state.model = std::move(init);
  state.model.check_consistent();
  state.best_objective = std::numeric_limits<double>::infinity();
  state.best_model = state.model;

  std::vector<double> vel_u(unary_param_block(state.model).size(), 0.0);
  std::vector<double> vel_i(inter_param_block(state.model).size(), 0.0);

  std::vector<double> raw_hinge(N);
  std::vector<SampleGradient> grads(N);

  const auto start = std::chrono::steady_clock::now();

  for (int t = 1; t <= cfg.iterations; ++t) {
    const double rate = cfg.mu / (cfg.t0 + t);

    if (cfg.batch == BatchMode::full) {
      // Per-sample loss-augmented inference and gradients run in parallel
      // against the read-only model; each index writes only its own slot.
      parallel_for(N, exec, [&](int n) {
        const FactorGraphSample& s = samples[n];
        FactorTables tables = build_factor_tables(state.model, s);
        HingeResult h = hinge_term(s, tables, *s.ground_truth, weights,
                                   state.model.idx, cfg.infer);
        raw_hinge[n] = h.value;
        grads[n] = sample_gradient(state.model, s, h.z, *s.ground_truth,
                                   h.value > 0.0, cfg.lambda);
      });

      // Fixed-order serial reduction keeps results identical across thread
      // counts.
      double hinge_sum = 0.0;
      std::vector<double> grad_u(vel_u.size(), 0.0);
      std::vector<double> grad_i(vel_i.size(), 0.0);
      for (int n = 0; n < N; ++n) {
        hinge_sum += std::max(raw_hinge[n], 0.0);
        for (size_t k = 0; k < grad_u.size(); ++k) grad_u[k] += grads[n].unary[k];
        for (size_t k = 0; k < grad_i.size(); ++k) grad_i[k] += grads[n].inter[k];
      }
      for (double& v : grad_u) v /= N;
      for (double& v : grad_i) v /= N;

      // Objective of the CURRENT parameters, from the same predictions that
      // feed the update; snapshot before stepping.
      const double objective = assemble_objective(
          0.5 * state.model.param_norm_sq(), hinge_sum, N, cfg.lambda);
      if (objective < state.best_objective) {
        state.best_objective = objective;
        state.best_model = state.model;
      }
      state.trace.push_back({t, objective, state.best_objective, hinge_sum / N,
                             seconds_since(start)});

      momentum_step(unary_param_block(state.model), vel_u, grad_u,
                    rate * cfg.unary_rate_scale, cfg.momentum);
      momentum_step(inter_param_block(state.model), vel_i, grad_i,
                    rate * cfg.inter_rate_scale, cfg.momentum);
    } else {
      // Online variant: the same update moved inside the sample loop, one
      // full-size step per sample. Necessarily serial.
      for (int n = 0; n < N; ++n) {
        const FactorGraphSample& s = samples[n];
        FactorTables tables = build_factor_tables(state.model, s);
        HingeResult h = hinge_term(s, tables, *s.ground_truth, weights,
                                   state.model.idx, cfg.infer);
        SampleGradient g = sample_gradient(state.model, s, h.z,
                                           *s.ground_truth, h.value > 0.0,
                                           cfg.lambda);
        momentum_step(unary_param_block(state.model), vel_u, g.unary,
                      rate * cfg.unary_rate_scale, cfg.momentum);
        momentum_step(inter_param_block(state.model), vel_i, g.inter,
                      rate * cfg.inter_rate_scale, cfg.momentum);
      }
      // Online updates invalidate the in-loop hinges as an objective
      // estimate, so the trace costs one extra evaluation pass per sweep.
      ObjectiveReport rep = objective_value(samples, state.model, cfg.lambda,
                                            weights, cfg.infer, exec);
      if (rep.total < state.best_objective) {
        state.best_objective = rep.total;
        state.best_model = state.model;
      }
      state.trace.push_back({t, rep.total, state.best_objective, rep.mean_hinge,
                             seconds_since(start)});
    }
    state.iterations_run = t;
  }
  return state;
}

namespace {

int infer_d_u(const std::vector<FactorGraphSample>& samples) {
  for (const FactorGraphSample& s : samples)
    if (s.node_count() > 0) return static_cast<int>(s.node_features[0].size());
  throw std::invalid_argument("dataset has no nodes");
}

int infer_d_i(const std::vector<FactorGraphSample>& samples) {
  for (const FactorGraphSample& s : samples)
    if (s.edge_count() > 0) return static_cast<int>(s.edges[0].features.size());
  return 0;
}

// The unary regime has no structured parameters; realize it as a fixed
// linear model over the classifier probabilities (identity unary weights,
// zero interactions) so prediction shares the standard path.
FactorModel identity_over_probs(int num_labels, int d_i, EdgeStateMode mode) {
  ModelArch arch;
  arch.labels = LabelSet(num_labels);
  arch.edge_mode = mode;
  arch.d_u = num_labels;
  arch.d_i = std::max(d_i, 1);
  FactorModel m = init_model(arch, 0);
  for (int c = 0; c < num_labels; ++c)
    (*m.w_unary)[static_cast<size_t>(c) * num_labels + c] = 1.0;
  return m;
}

}  // namespace

TrainedModel train_regime(const std::vector<FactorGraphSample>& samples,
                          int num_labels, TrainRegime regime,
                          const TrainConfig& cfg, const ExecPolicy& exec) {
  cfg.validate();
  if (samples.empty()) throw std::invalid_argument("empty training set");
  const int d_u = infer_d_u(samples);
  const int d_i = std::max(infer_d_i(samples), 1);

  TrainedModel out;
  out.regime = regime;
  out.weights = make_class_weights(cfg, samples, num_labels);

  const bool bifurcated = regime == TrainRegime::unary ||
                          regime == TrainRegime::bif_lin ||
                          regime == TrainRegime::bif_nrl;
  if (bifurcated) {
    out.classifier = train_unary_classifier(samples, num_labels,
                                            cfg.clf_epochs, cfg.clf_rate);
  }

  switch (regime) {
    case TrainRegime::unary:
      out.model = identity_over_probs(num_labels, d_i, cfg.edge_mode);
      return out;

    case TrainRegime::bif_lin: {
      std::vector<FactorGraphSample> probs =
          apply_classifier(*out.classifier, samples);
      ModelArch arch;
      arch.labels = LabelSet(num_labels);
      arch.edge_mode = cfg.edge_mode;
      arch.d_u = num_labels;
      arch.d_i = d_i;
      TrainState st = train_ssvm(probs, init_model(arch, mix_seed(cfg.seed, 10)),
                                 cfg, out.weights, exec);
      out.model = st.best_model;
      out.state = std::move(st);
      return out;
    }

    case TrainRegime::bif_nrl: {
      std::vector<FactorGraphSample> probs =
          apply_classifier(*out.classifier, samples);
      ModelArch arch;
      arch.labels = LabelSet(num_labels);
      arch.edge_mode = cfg.edge_mode;
      arch.d_u = num_labels;
      arch.d_i = d_i;
      arch.unary = {SideKind::neural, cfg.unary_hidden, cfg.hidden_act};
      arch.inter = {SideKind::neural, cfg.inter_hidden, cfg.hidden_act};
      TrainState st = train_ssvm(probs, init_model(arch, mix_seed(cfg.seed, 10)),
                                 cfg, out.weights, exec);
      out.model = st.best_model;
      out.state = std::move(st);
      return out;
    }

    case TrainRegime::int_lin: {
      ModelArch arch;
      arch.labels = LabelSet(num_labels);
      arch.edge_mode = cfg.edge_mode;
      arch.d_u = d_u;
      arch.d_i = d_i;
      arch.unary = {SideKind::neural, cfg.unary_hidden, cfg.hidden_act};
      TrainState st = train_ssvm(samples,
                                 init_model(arch, mix_seed(cfg.seed, 10)), cfg,
                                 out.weights, exec);
      out.model = st.best_model;
      out.state = std::move(st);
      return out;
    }

    case TrainRegime::int_nrl: {
      ModelArch arch;
      arch.labels = LabelSet(num_labels);
      arch.edge_mode = cfg.edge_mode;
      arch.d_u = d_u;
      arch.d_i = d_i;
      arch.unary = {SideKind::neural, cfg.unary_hidden, cfg.hidden_act};
      arch.inter = {SideKind::neural, cfg.inter_hidden, cfg.hidden_act};
      TrainState st = train_ssvm(samples,
                                 init_model(arch, mix_seed(cfg.seed, 10)), cfg,
                                 out.weights, exec);
      out.model = st.best_model;
      out.state = std::move(st);
      return out;
    }
  }
  throw std::logic_error("unknown regime");
}

std::vector<Labeling> predict(const std::vector<FactorGraphSample>& samples,
                              const FactorModel& model, const InferOptions& opts,
                              const ExecPolicy& exec) {
  return ablate_predict(samples, model, AblateKeep::both, opts, exec);
}

std::vector<Labeling> ablate_predict(
    const std::vector<FactorGraphSample>& samples, const FactorModel& model,
    AblateKeep keep, const InferOptions& opts, const ExecPolicy& exec) {
  std::vector<Labeling> out(samples.size());
  parallel_for(static_cast<int>(samples.size()), exec, [&](int n) {
    FactorTables tables = build_factor_tables(model, samples[n]);
    if (keep == AblateKeep::unary_only)
      std::fill(tables.pairwise.begin(), tables.pairwise.end(), 0.0);
    if (keep == AblateKeep::interaction_only)
      std::fill(tables.unary.begin(), tables.unary.end(), 0.0);
    out[n] = infer_map(samples[n], tables, model.idx, opts);
  });
  return out;
}

std::vector<Labeling> predict_trained(const TrainedModel& trained,
                                      const std::vector<FactorGraphSample>& samples,
                                      const InferOptions& opts,
                                      const ExecPolicy& exec, AblateKeep keep) {
  if (trained.classifier) {
    return ablate_predict(apply_classifier(*trained.classifier, samples),
                          trained.model, keep, opts, exec);
  }
  return ablate_predict(samples, trained.model, keep, opts, exec);
}

}  // namespace ssvm
