#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ssvm/factors.hpp"
#include "ssvm/graph.hpp"

namespace ssvm {

// ---------------------------------------------------------------------------
// Energy view. Maximizing compatibility g equals minimizing energy, so the
// solvers below all speak cost = -factor value. Pairwise tables are expanded
// to full |L| x |L| matrices per edge (symmetric-mode tables expand
// symmetrically).
// ---------------------------------------------------------------------------

struct EnergyInstance {
  int num_labels = 0;
  std::vector<double> unary;                   // node_count * L, row-major
  std::vector<std::pair<int, int>> edges;      // endpoints, i < j
  std::vector<std::vector<double>> pairwise;   // per edge, L*L row-major

  int node_count() const {
    return num_labels == 0 ? 0 : static_cast<int>(unary.size()) / num_labels;
  }
  int edge_count() const { return static_cast<int>(edges.size()); }

  double unary_cost(int node, int label) const {
    return unary[static_cast<size_t>(node) * num_labels + label];
  }
  double pairwise_cost(int edge, int m, int n) const {
    return pairwise[edge][static_cast<size_t>(m) * num_labels + n];
  }

  double energy(const Labeling& y) const;
};

EnergyInstance make_energy_instance(const FactorTables& tables,
                                    const FactorGraphSample& sample,
                                    const EdgeStateIndex& idx);

// Adds the per-node disagreement reward to the costs: label m != truth[i]
// has its cost reduced by eta[truth[i]], so minimizing energy maximizes
// (class-weighted disagreement + compatibility).
void add_loss_augmentation(EnergyInstance& instance, const Labeling& truth,
                           const std::vector<double>& eta);

// ---------------------------------------------------------------------------
// Exact inference by enumeration (small graphs only).
// ---------------------------------------------------------------------------

// Globally minimal labeling; ties break to the lexicographically smallest.
// Throws if |L|^V exceeds cap (never silently approximates).
Labeling infer_exact(const EnergyInstance& instance,
                     long long cap = 2'000'000);

// ---------------------------------------------------------------------------
// Max-flow / min-cut core.
// ---------------------------------------------------------------------------

struct FlowNetwork {
  struct Arc {
    int from = 0;
    int to = 0;
    double cap = 0.0;
  };
  int node_count = 0;
  int source = 0;
  int sink = 0;
  std::vector<Arc> arcs;

  int add_node() { return node_count++; }
  void add_arc(int from, int to, double cap) { arcs.push_back({from, to, cap}); }
};

struct MaxFlowResult {
  double value = 0.0;
  // Min-cut partition: true for nodes reachable from the source in the
  // residual network. Unreachable nodes (including isolated ones) land on
  // the sink side.
  std::vector<bool> source_side;
};

// Dinic's algorithm; deterministic for a fixed arc order.
MaxFlowResult max_flow(const FlowNetwork& net);

// ---------------------------------------------------------------------------
// Move-making solvers.
// ---------------------------------------------------------------------------

struct ExpansionMove {
  Labeling labeling;    // candidate after the move
  double move_energy;   // surrogate minimum (const + flow), for diagnostics
  bool truncated = false;  // some binary term needed submodular truncation
};

// Single expansion subproblem: per node keep current label or switch to
// alpha, solved as a binary min-cut. Non-submodular binary terms are raised
// minimally (split evenly across the two disagreeing states) to restore
// submodularity, so the returned candidate must be re-scored with the true
// energy before acceptance.
ExpansionMove expansion_move(const EnergyInstance& instance,
                             const Labeling& current, int alpha);

struct AlphaExpansionResult {
  Labeling labeling;
  double energy = 0.0;
  std::vector<double> energy_trace;  // energy after init and each accepted move
  int sweeps = 0;
  bool any_truncated = false;
};

// Sweeps alpha over ascending labels, accepting a move only when the true
// energy strictly decreases; stops after a sweep with no accepted move or
// after max_sweeps.
AlphaExpansionResult alpha_expansion(const EnergyInstance& instance,
                                     const Labeling& init, int max_sweeps = 20);

// Iterated conditional modes: per-node argmin sweeps (ascending node order,
// lowest label wins ties) until fixpoint or max_sweeps.
Labeling infer_icm(const EnergyInstance& instance, const Labeling& init,
                   int max_sweeps = 50);

// ---------------------------------------------------------------------------
// Front end used by training and evaluation.
// ---------------------------------------------------------------------------

enum class InferBackend { exact, alpha, icm, auto_select };

const char* backend_name(InferBackend b);
InferBackend backend_from_name(const std::string& name);

struct InferOptions {
  InferBackend backend = InferBackend::auto_select;
  long long enum_cap = 2'000'000;  // auto_select: exact at or under, alpha above
  int max_sweeps = 20;
};

// Per-node argmin of the unary costs, lowest label on ties. Used as the
// deterministic warm start for move-making.
Labeling unary_argmin_init(const EnergyInstance& instance);

// argmin energy under the chosen backend.
Labeling minimize_energy(const EnergyInstance& instance,
                         const InferOptions& opts);

// argmax_y g(x, y) from materialized tables.
Labeling infer_map(const FactorGraphSample& sample, const FactorTables& tables,
                   const EdgeStateIndex& idx, const InferOptions& opts);

// argmax_y [sum_i eta[truth_i]*[y_i != truth_i] + g(x, y)].
Labeling loss_augmented_infer(const FactorGraphSample& sample,
                              const FactorTables& tables,
                              const Labeling& ground_truth,
                              const std::vector<double>& eta,
                              const EdgeStateIndex& idx,
                              const InferOptions& opts);

}  // namespace ssvm
