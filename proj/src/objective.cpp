#include "ssvm/objective.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssvm {

const char* weight_mode_name(ClassWeightMode m) {
  switch (m) {
    case ClassWeightMode::uniform: return "uniform";
    case ClassWeightMode::class_balanced: return "class_balanced";
    case ClassWeightMode::explicit_weights: return "explicit";
  }
  throw std::logic_error("unreachable weight mode name");
}

ClassWeightMode weight_mode_from_name(const std::string& name) {
  if (name == "uniform") return ClassWeightMode::uniform;
  if (name == "class_balanced") return ClassWeightMode::class_balanced;
  if (name == "explicit") return ClassWeightMode::explicit_weights;
  throw std::invalid_argument("unknown class weight mode: " + name);
}

ClassWeights ClassWeights::uniform_for(int num_labels) {
  ClassWeights w;
  w.mode = ClassWeightMode::uniform;
  w.eta.assign(num_labels, 1.0);
  return w;
}

ClassWeights ClassWeights::balanced(
    const std::vector<FactorGraphSample>& samples, int num_labels) {
  std::vector<long long> count(num_labels, 0);
  long long total = 0;
  for (const FactorGraphSample& s : samples) {
    if (!s.ground_truth)
      throw std::invalid_argument("balanced weights need ground truths");
    for (int c : *s.ground_truth) {
      ++count[c];
      ++total;
    }
  }
  if (total == 0) throw std::invalid_argument("no labeled nodes in dataset");
  int present = 0;
  for (long long c : count) present += c > 0;

  ClassWeights w;
  w.mode = ClassWeightMode::class_balanced;
  w.eta.assign(num_labels, 0.0);
  for (int c = 0; c < num_labels; ++c)
    if (count[c] > 0)
      w.eta[c] = static_cast<double>(total) /
                 (static_cast<double>(present) * static_cast<double>(count[c]));
  return w;
}

ClassWeights ClassWeights::explicit_eta(std::vector<double> eta) {
  for (double v : eta)
    if (v < 0.0) throw std::invalid_argument("class weights must be >= 0");
  ClassWeights w;
  w.mode = ClassWeightMode::explicit_weights;
  w.eta = std::move(eta);
  return w;
}

double structured_loss(const Labeling& y_true, const Labeling& y,
                       const ClassWeights& weights) {
  if (y_true.size() != y.size())
    throw std::invalid_argument("labelings differ in length");
  double d = 0.0;
  for (size_t i = 0; i < y.size(); ++i)
    if (y_true[i] != y[i]) d += weights.eta[y_true[i]];
  return d;
}

HingeResult hinge_term(const FactorGraphSample& sample,
                       const FactorTables& tables, const Labeling& ground_truth,
                       const ClassWeights& weights, const EdgeStateIndex& idx,
                       const InferOptions& opts) {
  HingeResult r;
  r.z = loss_augmented_infer(sample, tables, ground_truth, weights.eta, idx,
                             opts);
  r.value = structured_loss(ground_truth, r.z, weights) -
            compatibility(tables, sample, ground_truth, idx) +
            compatibility(tables, sample, r.z, idx);
  return r;
}

double assemble_objective(double regularizer, double hinge_sum, int num_samples,
                          double lambda) {
  return regularizer + lambda * (hinge_sum / num_samples);
}

ObjectiveReport objective_value(const std::vector<FactorGraphSample>& samples,
                                const FactorModel& model, double lambda,
                                const ClassWeights& weights,
                                const InferOptions& opts,
                                const ExecPolicy& exec) {
  if (samples.empty()) throw std::invalid_argument("empty dataset");
  const int N = static_cast<int>(samples.size());

  ObjectiveReport rep;
  rep.backend = opts.backend;
  rep.regularizer = 0.5 * model.param_norm_sq();
  rep.per_sample_hinge.assign(N, 0.0);

  std::vector<double> raw(N, 0.0);
  parallel_for(N, exec, [&](int n) {
    FactorTables tables = build_factor_tables(model, samples[n]);
    raw[n] = hinge_term(samples[n], tables, *samples[n].ground_truth, weights,
                        model.idx, opts)
                 .value;
  });

  double hinge_sum = 0.0;  // fixed-order reduction: bit-stable across threads
  for (int n = 0; n < N; ++n) {
    if (raw[n] > 0.0) rep.active_set.push_back(n);
    rep.per_sample_hinge[n] = std::max(raw[n], 0.0);
    hinge_sum += rep.per_sample_hinge[n];
  }
  rep.mean_hinge = hinge_sum / N;
  rep.total = assemble_objective(rep.regularizer, hinge_sum, N, lambda);
  return rep;
}

namespace {

// Adds scale * (phi_block(z) - phi_block(truth)) for a linear unary block.
void add_unary_feature_diff(const FactorGraphSample& sample, const Labeling& z,
                            const Labeling& truth, int d_u, double scale,
                            std::vector<double>& grad) {
  for (int i = 0; i < sample.node_count(); ++i) {
    if (z[i] == truth[i]) continue;
    const std::vector<double>& f = sample.node_features[i];
    double* pos = grad.data() + static_cast<size_t>(z[i]) * d_u;
    double* neg = grad.data() + static_cast<size_t>(truth[i]) * d_u;
    for (int k = 0; k < d_u; ++k) {
      pos[k] += scale * f[k];
      neg[k] -= scale * f[k];
    }
  }
}

void add_inter_feature_diff(const FactorGraphSample& sample, const Labeling& z,
                            const Labeling& truth, const EdgeStateIndex& idx,
                            int d_i, double scale, std::vector<double>& grad) {
  for (const Edge& e : sample.edges) {
    const int s_pos = idx.state(z[e.i], z[e.j]);
    const int s_neg = idx.state(truth[e.i], truth[e.j]);
    if (s_pos == s_neg) continue;
    double* pos = grad.data() + static_cast<size_t>(s_pos) * d_i;
    double* neg = grad.data() + static_cast<size_t>(s_neg) * d_i;
    for (int k = 0; k < d_i; ++k) {
      pos[k] += scale * e.features[k];
      neg[k] -= scale * e.features[k];
    }
  }
}

}  // namespace

SampleGradient sample_gradient(const FactorModel& model,
                               const FactorGraphSample& sample,
                               const Labeling& z, const Labeling& ground_truth,
                               bool hinge_active, double lambda) {
  SampleGradient g;
  g.unary = unary_param_block(model);  // regularizer gradient = the parameters
  g.inter = inter_param_block(model);
  if (!hinge_active) return g;

  if (model.unary_net) {
    accumulate_net_param_gradient(*model.unary_net, sample, z, ground_truth,
                                  FactorSide::unary, model.idx, lambda,
                                  g.unary);
  } else {
    add_unary_feature_diff(sample, z, ground_truth, model.d_u, lambda, g.unary);
  }
  if (model.inter_net) {
    accumulate_net_param_gradient(*model.inter_net, sample, z, ground_truth,
                                  FactorSide::interaction, model.idx, lambda,
                                  g.inter);
  } else {
    add_inter_feature_diff(sample, z, ground_truth, model.idx, model.d_i,
                           lambda, g.inter);
  }
  return g;
}

std::vector<double> subgradient_linear(const FactorModel& model,
                                       const FactorGraphSample& sample,
                                       const Labeling& z,
                                       const Labeling& ground_truth,
                                       bool hinge_active, double lambda) {
  if (model.unary_is_neural() || model.inter_is_neural())
    throw std::invalid_argument("subgradient_linear needs a fully linear model");
  SampleGradient g =
      sample_gradient(model, sample, z, ground_truth, hinge_active, lambda);
  std::vector<double> out = std::move(g.unary);
  out.insert(out.end(), g.inter.begin(), g.inter.end());
  return out;
}

}  // namespace ssvm
