#include "ssvm/factors.hpp"

#include <cmath>
#include <stdexcept>

#include "ssvm/rng.hpp"

namespace ssvm {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::tanh: return "tanh";
    case Activation::relu: return "relu";
  }
  throw std::logic_error("unknown activation");
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

namespace {

inline double apply_act(Activation a, double v) {
  switch (a) {
    case Activation::identity: return v;
    case Activation::tanh: return std::tanh(v);
    case Activation::relu: return v > 0.0 ? v : 0.0;
  }
  return v;
}

// Derivative in terms of preactivation p and activation value a. relu'(0)
// is taken as 0 so the subgradient choice is fixed.
inline double act_derivative(Activation act, double p, double a) {
  switch (act) {
    case Activation::identity: return 1.0;
    case Activation::tanh: return 1.0 - a * a;
    case Activation::relu: return p > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

}  // namespace

int NeuralFactorNet::param_count() const {
  int n = 0;
  for (const Layer& l : layers) n += l.in * l.out + l.out;
  return n;
}

int NeuralFactorNet::weight_offset(int l) const {
  int off = 0;
  for (int k = 0; k < l; ++k) off += layers[k].in * layers[k].out + layers[k].out;
  return off;
}

void NeuralFactorNet::check_consistent() const {
  if (layers.empty()) throw std::invalid_argument("net has no layers");
  for (size_t l = 0; l + 1 < layers.size(); ++l)
    if (layers[l].out != layers[l + 1].in)
      throw std::invalid_argument("layer dimensions do not chain");
  if (layers.back().act != Activation::identity)
    throw std::invalid_argument("output layer must be identity");
  for (const Layer& l : layers)
    if (l.in <= 0 || l.out <= 0)
      throw std::invalid_argument("layer dimensions must be positive");
  if (static_cast<int>(params.size()) != param_count())
    throw std::invalid_argument("parameter vector length does not match layers");
}

std::vector<double> NeuralFactorNet::forward(const std::vector<double>& x) const {
  Trace trace;
  return forward_trace(x, trace);
}

const std::vector<double>& NeuralFactorNet::forward_trace(
    const std::vector<double>& x, Trace& trace) const {
  if (static_cast<int>(x.size()) != input_dim())
    throw std::invalid_argument("net input length mismatch");
  const int L = static_cast<int>(layers.size());
  trace.acts.assign(L + 1, {});
  trace.pre.assign(L, {});
  trace.acts[0] = x;
  for (int l = 0; l < L; ++l) {
    const Layer& layer = layers[l];
    const double* W = params.data() + weight_offset(l);
    const double* b = params.data() + bias_offset(l);
    const std::vector<double>& in = trace.acts[l];
    std::vector<double>& pre = trace.pre[l];
    pre.resize(layer.out);
    for (int o = 0; o < layer.out; ++o) {
      double s = b[o];
      const double* row = W + static_cast<size_t>(o) * layer.in;
      for (int k = 0; k < layer.in; ++k) s += row[k] * in[k];
      pre[o] = s;
    }
    std::vector<double>& out = trace.acts[l + 1];
    out.resize(layer.out);
    for (int o = 0; o < layer.out; ++o) out[o] = apply_act(layer.act, pre[o]);
  }
  return trace.acts.back();
}

void NeuralFactorNet::backward(const Trace& trace,
                               const std::vector<double>& out_err,
                               std::vector<double>& grad) const {
  const int L = static_cast<int>(layers.size());
  if (static_cast<int>(out_err.size()) != output_dim())
    throw std::invalid_argument("output error length mismatch");
  if (grad.size() != params.size())
    throw std::invalid_argument("gradient accumulator length mismatch");

  // Output layer is identity, so the initial delta is the error itself.
  std::vector<double> delta = out_err;
  std::vector<double> prev;
  for (int l = L - 1; l >= 0; --l) {
    const Layer& layer = layers[l];
    const std::vector<double>& in = trace.acts[l];
    double* gW = grad.data() + weight_offset(l);
    double* gb = grad.data() + bias_offset(l);
    for (int o = 0; o < layer.out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      double* row = gW + static_cast<size_t>(o) * layer.in;
      for (int k = 0; k < layer.in; ++k) row[k] += d * in[k];
      gb[o] += d;
    }
    if (l == 0) break;
    const Layer& below = layers[l - 1];
    prev.assign(layer.in, 0.0);
    const double* W = params.data() + weight_offset(l);
    for (int o = 0; o < layer.out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const double* row = W + static_cast<size_t>(o) * layer.in;
      for (int k = 0; k < layer.in; ++k) prev[k] += d * row[k];
    }
    for (int k = 0; k < below.out; ++k)
      prev[k] *= act_derivative(below.act, trace.pre[l - 1][k], trace.acts[l][k]);
    delta.swap(prev);
  }
}

NeuralFactorNet init_net(const NetArch& arch, std::uint64_t seed) {
  if (arch.input_dim <= 0 || arch.output_dim <= 0)
    throw std::invalid_argument("net input/output dims must be positive");
  NeuralFactorNet net;
  int in = arch.input_dim;
  for (int h : arch.hidden) {
    if (h <= 0) throw std::invalid_argument("hidden width must be positive");
    net.layers.push_back({in, h, arch.hidden_act});
    in = h;
  }
  net.layers.push_back({in, arch.output_dim, Activation::identity});
  net.params.assign(net.param_count(), 0.0);

  // Hidden layers get Glorot-uniform weights; the output layer stays zero so
  // the untrained model is exactly neutral.
  Rng rng(seed);
  const int hidden_layers = static_cast<int>(net.layers.size()) - 1;
  for (int l = 0; l < hidden_layers; ++l) {
    const Layer& layer = net.layers[l];
    const double bound = std::sqrt(6.0 / (layer.in + layer.out));
    double* W = net.params.data() + net.weight_offset(l);
    for (int k = 0; k < layer.in * layer.out; ++k)
      W[k] = rng.uniform(-bound, bound);
    // biases stay zero
  }
  return net;
}

double FactorModel::param_norm_sq() const {
  double s = 0.0;
  auto add = [&s](const std::vector<double>& v) {
    for (double x : v) s += x * x;
  };
  add(unary_param_block(*this));
  add(inter_param_block(*this));
  return s;
}

void FactorModel::check_consistent() const {
  if (labels.count != idx.num_labels)
    throw std::invalid_argument("label set and edge state index disagree");
  if (w_unary.has_value() == unary_net.has_value())
    throw std::invalid_argument("unary side must be exactly one of linear or neural");
  if (w_inter.has_value() == inter_net.has_value())
    throw std::invalid_argument("interaction side must be exactly one of linear or neural");
  if (w_unary && static_cast<int>(w_unary->size()) != d_u * labels.count)
    throw std::invalid_argument("linear unary block has wrong length");
  if (w_inter && static_cast<int>(w_inter->size()) != d_i * idx.dim())
    throw std::invalid_argument("linear interaction block has wrong length");
  if (unary_net) {
    unary_net->check_consistent();
    if (unary_net->input_dim() != d_u || unary_net->output_dim() != labels.count)
      throw std::invalid_argument("unary net dims do not match d_u x |L|");
  }
  if (inter_net) {
    inter_net->check_consistent();
    if (inter_net->input_dim() != d_i || inter_net->output_dim() != idx.dim())
      throw std::invalid_argument("interaction net dims do not match d_i x dim(idx)");
  }
}

std::vector<double>& unary_param_block(FactorModel& model) {
  return model.unary_net ? model.unary_net->params : *model.w_unary;
}

std::vector<double>& inter_param_block(FactorModel& model) {
  return model.inter_net ? model.inter_net->params : *model.w_inter;
}

const std::vector<double>& unary_param_block(const FactorModel& model) {
  return model.unary_net ? model.unary_net->params : *model.w_unary;
}

const std::vector<double>& inter_param_block(const FactorModel& model) {
  return model.inter_net ? model.inter_net->params : *model.w_inter;
}

FactorModel init_model(const ModelArch& arch, std::uint64_t seed) {
  FactorModel model;
  model.labels = arch.labels;
  model.idx = EdgeStateIndex{arch.edge_mode, arch.labels.count};
  model.d_u = arch.d_u;
  model.d_i = arch.d_i;

  if (arch.unary.kind == SideKind::linear) {
    model.w_unary.emplace(static_cast<size_t>(arch.d_u) * arch.labels.count, 0.0);
  } else {
    model.unary_net = init_net(
        {arch.d_u, arch.unary.hidden, arch.unary.hidden_act, arch.labels.count},
        mix_seed(seed, 1));
  }
  if (arch.inter.kind == SideKind::linear) {
    model.w_inter.emplace(static_cast<size_t>(arch.d_i) * model.idx.dim(), 0.0);
  } else {
    model.inter_net = init_net(
        {arch.d_i, arch.inter.hidden, arch.inter.hidden_act, model.idx.dim()},
        mix_seed(seed, 2));
  }
  model.check_consistent();
  return model;
}

FactorTables build_factor_tables(const FactorModel& model,
                                 const FactorGraphSample& sample) {
  const int L = model.labels.count;
  const int dim = model.idx.dim();
  FactorTables tables;
  tables.num_labels = L;
  tables.state_dim = dim;
  tables.unary.resize(static_cast<size_t>(sample.node_count()) * L);
  tables.pairwise.resize(static_cast<size_t>(sample.edge_count()) * dim);

  if (model.unary_net) {
    NeuralFactorNet::Trace trace;
    for (int i = 0; i < sample.node_count(); ++i) {
      const std::vector<double>& out =
          model.unary_net->forward_trace(sample.node_features[i], trace);
      for (int m = 0; m < L; ++m)
        tables.unary[static_cast<size_t>(i) * L + m] = out[m];
    }
  } else {
    const std::vector<double>& w = *model.w_unary;
    for (int i = 0; i < sample.node_count(); ++i) {
      const std::vector<double>& feat = sample.node_features[i];
      if (static_cast<int>(feat.size()) != model.d_u)
        throw std::invalid_argument("node feature length does not match model");
      for (int m = 0; m < L; ++m) {
        const double* block = w.data() + static_cast<size_t>(m) * model.d_u;
        double s = 0.0;
        for (int k = 0; k < model.d_u; ++k) s += block[k] * feat[k];
        tables.unary[static_cast<size_t>(i) * L + m] = s;
      }
    }
  }

  if (model.inter_net) {
    NeuralFactorNet::Trace trace;
    for (int e = 0; e < sample.edge_count(); ++e) {
      const std::vector<double>& out =
          model.inter_net->forward_trace(sample.edges[e].features, trace);
      for (int s = 0; s < dim; ++s)
        tables.pairwise[static_cast<size_t>(e) * dim + s] = out[s];
    }
  } else {
    const std::vector<double>& w = *model.w_inter;
    for (int e = 0; e < sample.edge_count(); ++e) {
      const std::vector<double>& feat = sample.edges[e].features;
      if (static_cast<int>(feat.size()) != model.d_i)
        throw std::invalid_argument("edge feature length does not match model");
      for (int s = 0; s < dim; ++s) {
        const double* block = w.data() + static_cast<size_t>(s) * model.d_i;
        double v = 0.0;
        for (int k = 0; k < model.d_i; ++k) v += block[k] * feat[k];
        tables.pairwise[static_cast<size_t>(e) * dim + s] = v;
      }
    }
  }
  return tables;
}

double compatibility(const FactorTables& tables, const FactorGraphSample& sample,
                     const Labeling& y, const EdgeStateIndex& idx) {
  if (static_cast<int>(y.size()) != sample.node_count())
    throw std::invalid_argument("labeling length does not match sample");
  double g = 0.0;
  for (int i = 0; i < sample.node_count(); ++i) g += tables.unary_at(i, y[i]);
  for (int e = 0; e < sample.edge_count(); ++e) {
    const Edge& edge = sample.edges[e];
    g += tables.pairwise_at(e, idx.state(y[edge.i], y[edge.j]));
  }
  return g;
}

void accumulate_net_param_gradient(const NeuralFactorNet& net,
                                   const FactorGraphSample& sample,
                                   const Labeling& y_pos, const Labeling& y_neg,
                                   FactorSide side, const EdgeStateIndex& idx,
                                   double scale, std::vector<double>& grad) {
  if (y_pos.size() != y_neg.size() ||
      static_cast<int>(y_pos.size()) != sample.node_count())
    throw std::invalid_argument("labeling length mismatch");
  if (grad.size() != net.params.size())
    throw std::invalid_argument("gradient accumulator length mismatch");

  NeuralFactorNet::Trace trace;
  std::vector<double> err(net.output_dim());

  if (side == FactorSide::unary) {
    for (int i = 0; i < sample.node_count(); ++i) {
      if (y_pos[i] == y_neg[i]) continue;  // selections cancel exactly
      net.forward_trace(sample.node_features[i], trace);
      std::fill(err.begin(), err.end(), 0.0);
      err[y_pos[i]] = scale;
      err[y_neg[i]] = -scale;
      net.backward(trace, err, grad);
    }
  } else {
    for (const Edge& e : sample.edges) {
      const int s_pos = idx.state(y_pos[e.i], y_pos[e.j]);
      const int s_neg = idx.state(y_neg[e.i], y_neg[e.j]);
      if (s_pos == s_neg) continue;
      net.forward_trace(e.features, trace);
      std::fill(err.begin(), err.end(), 0.0);
      err[s_pos] = scale;
      err[s_neg] = -scale;
      net.backward(trace, err, grad);
    }
  }
}

std::vector<double> net_param_gradient(const NeuralFactorNet& net,
                                       const FactorGraphSample& sample,
                                       const Labeling& y_pos,
                                       const Labeling& y_neg, FactorSide side,
                                       const EdgeStateIndex& idx) {
  std::vector<double> grad(net.params.size(), 0.0);
  accumulate_net_param_gradient(net, sample, y_pos, y_neg, side, idx, 1.0, grad);
  return grad;
}

}  // namespace ssvm
