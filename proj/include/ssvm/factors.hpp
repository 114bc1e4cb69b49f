#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssvm/graph.hpp"

namespace ssvm {

// ---------------------------------------------------------------------------
// Factor parameterizations.
//
// Each side of the model (unary, interaction) is either a linear weight block
// over joint features or a small shared network evaluated per node / per edge.
// In both cases the side produces a table of factor values, and the total
// compatibility of a labeling is the sum of the selected entries.
// ---------------------------------------------------------------------------

enum class Activation { identity, tanh, relu };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct Layer {
  int in = 0;
  int out = 0;
  Activation act = Activation::identity;
};

// Shared feed-forward network used as a factor template. One instance is
// evaluated at every node (or every edge) of a sample; weights are tied.
// Parameters are stored flat, per layer: weight matrix row-major (out x in),
// then bias (out). The output layer is always identity so the raw table
// values are unbounded factor scores, not probabilities.
class NeuralFactorNet {
 public:
  std::vector<Layer> layers;
  std::vector<double> params;

  int input_dim() const { return layers.empty() ? 0 : layers.front().in; }
  int output_dim() const { return layers.empty() ? 0 : layers.back().out; }
  int param_count() const;

  // Flat offsets of layer l's weight matrix and bias vector.
  int weight_offset(int l) const;
  int bias_offset(int l) const { return weight_offset(l) + layers[l].in * layers[l].out; }

  std::vector<double> forward(const std::vector<double>& x) const;

  // Per-layer intermediates kept for reverse-mode accumulation. acts[0] is
  // the input; pre[l] holds layer l's preactivation and acts[l+1] its output.
  struct Trace {
    std::vector<std::vector<double>> acts;
    std::vector<std::vector<double>> pre;
  };

  const std::vector<double>& forward_trace(const std::vector<double>& x, Trace& trace) const;

  // Accumulates d(out_err . output)/d(params) into grad, which must already
  // have param_count() entries. trace must come from forward_trace on this net.
  void backward(const Trace& trace, const std::vector<double>& out_err,
                std::vector<double>& grad) const;

  void check_consistent() const;
};

// Architecture descriptor for one network: hidden widths between the input
// and output dims, one activation shared by all hidden layers.
struct NetArch {
  int input_dim = 0;
  std::vector<int> hidden;
  Activation hidden_act = Activation::tanh;
  int output_dim = 0;
};

// Glorot-uniform hidden weights (+-sqrt(6/(fan_in+fan_out))), zero biases,
// zero output layer, so a fresh net scores every labeling identically at 0.
// Deterministic in the seed.
NeuralFactorNet init_net(const NetArch& arch, std::uint64_t seed);

// Linear weight blocks: w_unary has d_u * |L| entries (label-major blocks),
// w_inter has d_i * dim(idx) entries (edge-state-major blocks).
struct LinearParams {
  std::vector<double> w_unary;
  std::vector<double> w_inter;
};

// Full factor model. Exactly one of {linear block, net} is set per side.
struct FactorModel {
  LabelSet labels;
  EdgeStateIndex idx;
  int d_u = 0;
  int d_i = 0;

  std::optional<std::vector<double>> w_unary;
  std::optional<NeuralFactorNet> unary_net;
  std::optional<std::vector<double>> w_inter;
  std::optional<NeuralFactorNet> inter_net;

  bool unary_is_neural() const { return unary_net.has_value(); }
  bool inter_is_neural() const { return inter_net.has_value(); }

  // Squared Euclidean norm over every parameter in the model, the quantity
  // the objective's regularizer is built from.
  double param_norm_sq() const;

  void check_consistent() const;
};

// Mutable access to the two parameter blocks (for the optimizer). The unary
// block is either *w_unary or unary_net->params, likewise for interaction.
std::vector<double>& unary_param_block(FactorModel& model);
std::vector<double>& inter_param_block(FactorModel& model);
const std::vector<double>& unary_param_block(const FactorModel& model);
const std::vector<double>& inter_param_block(const FactorModel& model);

enum class SideKind { linear, neural };

struct SideArch {
  SideKind kind = SideKind::linear;
  std::vector<int> hidden;  // neural only; empty means a single affine layer
  Activation hidden_act = Activation::tanh;
};

struct ModelArch {
  LabelSet labels;
  EdgeStateMode edge_mode = EdgeStateMode::symmetric;
  int d_u = 0;
  int d_i = 0;
  SideArch unary;
  SideArch inter;
};

// Builds the initial model: linear sides all zero, neural sides via init_net
// (each side drawing from its own seed stream).
FactorModel init_model(const ModelArch& arch, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Factor tables: materialized factor values for one sample under one model.
// ---------------------------------------------------------------------------

struct FactorTables {
  int num_labels = 0;  // width of each unary row
  int state_dim = 0;   // width of each pairwise row (= idx.dim())
  std::vector<double> unary;     // node_count * num_labels, row-major
  std::vector<double> pairwise;  // edge_count * state_dim, row-major

  double unary_at(int node, int label) const {
    return unary[static_cast<size_t>(node) * num_labels + label];
  }
  double pairwise_at(int edge, int state) const {
    return pairwise[static_cast<size_t>(edge) * state_dim + state];
  }
};

// Evaluates the model on one sample. Throws on dimension mismatch.
FactorTables build_factor_tables(const FactorModel& model,
                                 const FactorGraphSample& sample);

// g(x, y) = sum_i unary[i][y_i] + sum_e pairwise[e][index(y_i, y_j)].
double compatibility(const FactorTables& tables, const FactorGraphSample& sample,
                     const Labeling& y, const EdgeStateIndex& idx);

// ---------------------------------------------------------------------------
// Gradients of factor sums.
// ---------------------------------------------------------------------------

enum class FactorSide { unary, interaction };

// Gradient of [sum-of-selected-net-outputs under y_pos] minus the same under
// y_neg, w.r.t. the net's parameters. Selections that agree on a node (or
// edge) cancel and are skipped. scale multiplies the whole contribution.
void accumulate_net_param_gradient(const NeuralFactorNet& net,
                                   const FactorGraphSample& sample,
                                   const Labeling& y_pos, const Labeling& y_neg,
                                   FactorSide side, const EdgeStateIndex& idx,
                                   double scale, std::vector<double>& grad);

std::vector<double> net_param_gradient(const NeuralFactorNet& net,
                                       const FactorGraphSample& sample,
                                       const Labeling& y_pos,
                                       const Labeling& y_neg, FactorSide side,
                                       const EdgeStateIndex& idx);

}  // namespace ssvm
