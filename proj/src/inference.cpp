#include "ssvm/inference.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace ssvm {

const char* backend_name(InferBackend b) {
  switch (b) {
    case InferBackend::exact: return "exact";
    case InferBackend::alpha: return "alpha";
    case InferBackend::icm: return "icm";
    case InferBackend::auto_select: return "auto";
  }
  throw std::logic_error("unreachable backend name");
}

InferBackend backend_from_name(const std::string& name) {
  if (name == "exact") return InferBackend::exact;
  if (name == "alpha") return InferBackend::alpha;
  if (name == "icm") return InferBackend::icm;
  if (name == "auto") return InferBackend::auto_select;
  throw std::invalid_argument("unknown inference backend: " + name);
}

double EnergyInstance::energy(const Labeling& y) const {
  if (static_cast<int>(y.size()) != node_count())
    throw std::invalid_argument("labeling length does not match instance");
  double e = 0.0;
  for (int i = 0; i < node_count(); ++i) e += unary_cost(i, y[i]);
  for (int k = 0; k < edge_count(); ++k)
    e += pairwise_cost(k, y[edges[k].first], y[edges[k].second]);
  return e;
}

EnergyInstance make_energy_instance(const FactorTables& tables,
                                    const FactorGraphSample& sample,
                                    const EdgeStateIndex& idx) {
  const int L = tables.num_labels;
  if (idx.num_labels != L)
    throw std::invalid_argument("edge state index does not match tables");
  EnergyInstance inst;
  inst.num_labels = L;
  inst.unary.resize(tables.unary.size());
  for (size_t k = 0; k < tables.unary.size(); ++k)
    inst.unary[k] = -tables.unary[k];
  inst.edges.reserve(sample.edge_count());
  inst.pairwise.reserve(sample.edge_count());
  for (int e = 0; e < sample.edge_count(); ++e) {
    inst.edges.emplace_back(sample.edges[e].i, sample.edges[e].j);
    std::vector<double> mat(static_cast<size_t>(L) * L);
    for (int m = 0; m < L; ++m)
      for (int n = 0; n < L; ++n)
        mat[static_cast<size_t>(m) * L + n] =
            -tables.pairwise_at(e, idx.state(m, n));
    inst.pairwise.push_back(std::move(mat));
  }
  return inst;
}

void add_loss_augmentation(EnergyInstance& instance, const Labeling& truth,
                           const std::vector<double>& eta) {
  const int L = instance.num_labels;
  if (static_cast<int>(truth.size()) != instance.node_count())
    throw std::invalid_argument("ground truth length does not match instance");
  if (static_cast<int>(eta.size()) != L)
    throw std::invalid_argument("class weight vector length does not match labels");
  for (int i = 0; i < instance.node_count(); ++i) {
    const double w = eta[truth[i]];
    for (int m = 0; m < L; ++m)
      if (m != truth[i])
        instance.unary[static_cast<size_t>(i) * L + m] -= w;
  }
}

Labeling infer_exact(const EnergyInstance& instance, long long cap) {
  const int n = instance.node_count();
  const int L = instance.num_labels;
  long long states = 1;
  for (int i = 0; i < n; ++i) {
    states *= L;
    if (states > cap)
      throw std::runtime_error(
          "exact inference refused: state space exceeds enumeration cap");
  }

  // Lexicographic enumeration with the last node cycling fastest; keeping
  // the first strict improvement makes ties resolve to the smallest labeling.
  Labeling y(n, 0), best(n, 0);
  double best_e = instance.energy(best);
  while (true) {
    int k = n - 1;
    while (k >= 0 && y[k] == L - 1) y[k--] = 0;
    if (k < 0) break;
    ++y[k];
    double e = instance.energy(y);
    if (e < best_e) {
      best_e = e;
      best = y;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Dinic max-flow.
// ---------------------------------------------------------------------------

namespace {

constexpr double kFlowEps = 1e-12;

struct DinicGraph {
  struct E {
    int to;
    double cap;
    int rev;
  };
  std::vector<std::vector<E>> adj;

  explicit DinicGraph(int n) : adj(n) {}

  void add(int from, int to, double cap) {
    adj[from].push_back({to, cap, static_cast<int>(adj[to].size())});
    adj[to].push_back({from, 0.0, static_cast<int>(adj[from].size()) - 1});
  }

  bool bfs(int s, int t, std::vector<int>& level) const {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const E& e : adj[v])
        if (e.cap > kFlowEps && level[e.to] < 0) {
          level[e.to] = level[v] + 1;
          q.push(e.to);
        }
    }
    return level[t] >= 0;
  }

  double dfs(int v, int t, double pushed, const std::vector<int>& level,
             std::vector<size_t>& iter) {
    if (v == t) return pushed;
    for (size_t& i = iter[v]; i < adj[v].size(); ++i) {
      E& e = adj[v][i];
      if (e.cap > kFlowEps && level[e.to] == level[v] + 1) {
        double d = dfs(e.to, t, std::min(pushed, e.cap), level, iter);
        if (d > kFlowEps) {
          e.cap -= d;
          adj[e.to][e.rev].cap += d;
          return d;
        }
      }
    }
    return 0.0;
  }
};

}  // namespace

MaxFlowResult max_flow(const FlowNetwork& net) {
  if (net.source == net.sink)
    throw std::invalid_argument("flow network source equals sink");
  DinicGraph g(net.node_count);
  for (const FlowNetwork::Arc& a : net.arcs) {
    if (a.cap < 0.0) throw std::invalid_argument("negative arc capacity");
    g.add(a.from, a.to, a.cap);
  }

  MaxFlowResult res;
  std::vector<int> level(net.node_count);
  std::vector<size_t> iter(net.node_count);
  while (g.bfs(net.source, net.sink, level)) {
    std::fill(iter.begin(), iter.end(), 0);
    while (true) {
      double f = g.dfs(net.source, net.sink,
                       std::numeric_limits<double>::infinity(), level, iter);
      if (f <= kFlowEps) break;
      res.value += f;
    }
  }

  // Min cut: everything still reachable from the source in the residual
  // network is on the source side.
  res.source_side.assign(net.node_count, false);
  std::queue<int> q;
  res.source_side[net.source] = true;
  q.push(net.source);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const DinicGraph::E& e : g.adj[v])
      if (e.cap > kFlowEps && !res.source_side[e.to]) {
        res.source_side[e.to] = true;
        q.push(e.to);
      }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Expansion moves.
// ---------------------------------------------------------------------------

ExpansionMove expansion_move(const EnergyInstance& instance,
                             const Labeling& current, int alpha) {
  const int n = instance.node_count();
  if (static_cast<int>(current.size()) != n)
    throw std::invalid_argument("labeling length does not match instance");
  if (alpha < 0 || alpha >= instance.num_labels)
    throw std::invalid_argument("expansion label out of range");

  // Binary variable per node: 0 = keep current label, 1 = take alpha.
  // theta0/theta1 accumulate the unary part of each choice; pairwise terms
  // are reduced to one nonnegative arc per edge plus unary shifts using
  //   E(x1,x2) = A + (C-A) x1 + (D-C) x2 + (B+C-A-D)(1-x1)x2
  // with A=V(0,0), B=V(0,1), C=V(1,0), D=V(1,1).
  std::vector<double> theta0(n), theta1(n);
  for (int i = 0; i < n; ++i) {
    theta0[i] = instance.unary_cost(i, current[i]);
    theta1[i] = instance.unary_cost(i, alpha);
  }

  FlowNetwork net;
  net.node_count = n + 2;
  net.source = n;
  net.sink = n + 1;
  double constant = 0.0;
  bool truncated = false;

  for (int k = 0; k < instance.edge_count(); ++k) {
    const int i = instance.edges[k].first;
    const int j = instance.edges[k].second;
    const double A = instance.pairwise_cost(k, current[i], current[j]);
    double B = instance.pairwise_cost(k, current[i], alpha);
    double C = instance.pairwise_cost(k, alpha, current[j]);
    const double D = instance.pairwise_cost(k, alpha, alpha);

    const double gap = (B + C) - (A + D);
    if (gap < 0.0) {
      // Non-submodular binary term: raise the disagreeing states just enough,
      // split evenly, and remember that the surrogate is now an upper bound.
      B += -gap / 2;
      C += -gap / 2;
      truncated = true;
    }

    constant += A;
    theta1[i] += C - A;
    theta1[j] += D - C;
    const double w = (B + C) - (A + D);
    if (w > 0.0) net.add_arc(i, j, w);
  }

  for (int i = 0; i < n; ++i) {
    const double m = std::min(theta0[i], theta1[i]);
    constant += m;
    if (theta1[i] - m > 0.0) net.add_arc(net.source, i, theta1[i] - m);
    if (theta0[i] - m > 0.0) net.add_arc(i, net.sink, theta0[i] - m);
  }

  MaxFlowResult cut = max_flow(net);

  ExpansionMove move;
  move.truncated = truncated;
  move.move_energy = constant + cut.value;
  move.labeling = current;
  for (int i = 0; i < n; ++i)
    if (!cut.source_side[i]) move.labeling[i] = alpha;  // x_i = 1: take alpha
  return move;
}

AlphaExpansionResult alpha_expansion(const EnergyInstance& instance,
                                     const Labeling& init, int max_sweeps) {
  AlphaExpansionResult res;
  res.labeling = init;
  res.energy = instance.energy(init);
  res.energy_trace.push_back(res.energy);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool improved = false;
    for (int alpha = 0; alpha < instance.num_labels; ++alpha) {
      ExpansionMove move = expansion_move(instance, res.labeling, alpha);
      res.any_truncated = res.any_truncated || move.truncated;
      // Truncation makes the surrogate an upper bound, so acceptance is
      // always gated on the true energy, and strictly.
      const double e = instance.energy(move.labeling);
      if (e < res.energy) {
        res.labeling = std::move(move.labeling);
        res.energy = e;
        res.energy_trace.push_back(e);
        improved = true;
      }
    }
    res.sweeps = sweep + 1;
    if (!improved) break;
  }
  return res;
}

Labeling infer_icm(const EnergyInstance& instance, const Labeling& init,
                   int max_sweeps) {
  const int n = instance.node_count();
  const int L = instance.num_labels;
  Labeling y = init;

  // Incidence lists so a node's conditional cost is a local sum.
  std::vector<std::vector<int>> incident(n);
  for (int k = 0; k < instance.edge_count(); ++k) {
    incident[instance.edges[k].first].push_back(k);
    incident[instance.edges[k].second].push_back(k);
  }

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = y[i];
      double best_cost = std::numeric_limits<double>::infinity();
      for (int m = 0; m < L; ++m) {
        double c = instance.unary_cost(i, m);
        for (int k : incident[i]) {
          const auto [a, b] = instance.edges[k];
          c += a == i ? instance.pairwise_cost(k, m, y[b])
                      : instance.pairwise_cost(k, y[a], m);
        }
        if (c < best_cost) {
          best_cost = c;
          best = m;
        }
      }
      if (best != y[i]) {
        // Strict improvement only: recompute the incumbent's conditional
        // cost and keep it on ties so sweeps terminate.
        double cur = instance.unary_cost(i, y[i]);
        for (int k : incident[i]) {
          const auto [a, b] = instance.edges[k];
          cur += a == i ? instance.pairwise_cost(k, y[i], y[b])
                        : instance.pairwise_cost(k, y[a], y[i]);
        }
        if (best_cost < cur) {
          y[i] = best;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return y;
}

Labeling unary_argmin_init(const EnergyInstance& instance) {
  const int n = instance.node_count();
  const int L = instance.num_labels;
  Labeling y(n, 0);
  for (int i = 0; i < n; ++i) {
    double best = instance.unary_cost(i, 0);
    for (int m = 1; m < L; ++m)
      if (instance.unary_cost(i, m) < best) {
        best = instance.unary_cost(i, m);
        y[i] = m;
      }
  }
  return y;
}

Labeling minimize_energy(const EnergyInstance& instance,
                         const InferOptions& opts) {
  InferBackend backend = opts.backend;
  if (backend == InferBackend::auto_select) {
    long long states = 1;
    bool small = true;
    for (int i = 0; i < instance.node_count() && small; ++i) {
      states *= instance.num_labels;
      small = states <= opts.enum_cap;
    }
    backend = small ? InferBackend::exact : InferBackend::alpha;
  }
  switch (backend) {
    case InferBackend::exact:
      return infer_exact(instance, opts.enum_cap);
    case InferBackend::alpha:
      return alpha_expansion(instance, unary_argmin_init(instance),
                             opts.max_sweeps)
          .labeling;
    case InferBackend::icm:
      return infer_icm(instance, unary_argmin_init(instance), opts.max_sweeps);
    case InferBackend::auto_select:
      break;
  }
  throw std::logic_error("unreachable inference backend");
}

Labeling infer_map(const FactorGraphSample& sample, const FactorTables& tables,
                   const EdgeStateIndex& idx, const InferOptions& opts) {
  return minimize_energy(make_energy_instance(tables, sample, idx), opts);
}

Labeling loss_augmented_infer(const FactorGraphSample& sample,
                              const FactorTables& tables,
                              const Labeling& ground_truth,
                              const std::vector<double>& eta,
                              const EdgeStateIndex& idx,
                              const InferOptions& opts) {
  EnergyInstance inst = make_energy_instance(tables, sample, idx);
  add_loss_augmentation(inst, ground_truth, eta);
  return minimize_energy(inst, opts);
}

}  // namespace ssvm
