#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ssvm/inference.hpp"
#include "test_util.hpp"

using namespace ssvm;

namespace {

// Independent enumeration oracle: walks state indices 0..L^n-1 (last node
// fastest) and sums costs straight off the instance fields.
Labeling enumerate_argmin(const EnergyInstance& inst, double* best_energy = nullptr) {
  const int n = inst.node_count();
  const int L = inst.num_labels;
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= L;

  Labeling best;
  double best_e = 0.0;
  for (long long s = 0; s < total; ++s) {
    Labeling y(n);
    long long v = s;
    for (int i = n - 1; i >= 0; --i) {
      y[i] = static_cast<int>(v % L);
      v /= L;
    }
    double e = 0.0;
    for (int i = 0; i < n; ++i) e += inst.unary[i * L + y[i]];
    for (int k = 0; k < inst.edge_count(); ++k)
      e += inst.pairwise[k][y[inst.edges[k].first] * L + y[inst.edges[k].second]];
    if (s == 0 || e < best_e) {
      best_e = e;
      best = y;
    }
  }
  if (best_energy) *best_energy = best_e;
  return best;
}

// Random instance with a path backbone plus chords. integer_costs makes
// energy comparisons exact; submodular_binary forces L=2 pairwise terms to
// satisfy cost(0,0)+cost(1,1) <= cost(0,1)+cost(1,0).
EnergyInstance random_instance(Rng& rng, int n, int L, bool integer_costs,
                               bool submodular_binary = false) {
  EnergyInstance inst;
  inst.num_labels = L;
  inst.unary.resize(static_cast<size_t>(n) * L);
  for (double& c : inst.unary)
    c = integer_costs ? static_cast<double>(rng.uniform_int(21)) - 10
                      : 3.0 * rng.gaussian();
  auto cost = [&]() {
    return integer_costs ? static_cast<double>(rng.uniform_int(11))
                         : 2.0 * std::abs(rng.gaussian());
  };
  auto add_edge = [&](int i, int j) {
    inst.edges.emplace_back(i, j);
    std::vector<double> mat(static_cast<size_t>(L) * L);
    for (double& c : mat) c = cost();
    if (submodular_binary && L == 2 && mat[0] + mat[3] > mat[1] + mat[2]) {
      std::swap(mat[0], mat[1]);
      std::swap(mat[3], mat[2]);
    }
    inst.pairwise.push_back(std::move(mat));
  };
  for (int i = 0; i + 1 < n; ++i) add_edge(i, i + 1);
  for (int t = 0; t < n / 2; ++t) {
    int i = static_cast<int>(rng.uniform_int(n));
    int j = static_cast<int>(rng.uniform_int(n));
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    bool dup = false;
    for (auto& e : inst.edges) dup = dup || (e.first == i && e.second == j);
    if (!dup) add_edge(i, j);
  }
  return inst;
}

double cut_capacity(const FlowNetwork& net, const std::vector<bool>& source_side) {
  double cap = 0.0;
  for (const auto& a : net.arcs)
    if (source_side[a.from] && !source_side[a.to]) cap += a.cap;
  return cap;
}

}  // namespace

TEST_CASE("exact inference basics") {
  EnergyInstance one;
  one.num_labels = 3;
  one.unary = {2.0, 1.0, 5.0};
  CHECK(infer_exact(one) == Labeling{1});

  EnergyInstance pair;
  pair.num_labels = 2;
  pair.unary = {0.0, 0.0, 0.0, 0.0};
  pair.edges = {{0, 1}};
  pair.pairwise = {{-3.0, 1.0, 1.0, 0.0}};  // (0,0) preferred
  CHECK(infer_exact(pair) == Labeling{0, 0});

  // All-equal costs: ties break to the lexicographically smallest labeling.
  EnergyInstance flat;
  flat.num_labels = 2;
  flat.unary = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK(infer_exact(flat) == Labeling{0, 0, 0});

  EnergyInstance big;
  big.num_labels = 4;
  big.unary.assign(12 * 4, 0.0);
  CHECK_THROWS(infer_exact(big, 1000));
}

TEST_CASE("exact inference matches an independent enumerator") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int L = 2 + static_cast<int>(rng.uniform_int(2));
    EnergyInstance inst = random_instance(rng, 5, L, trial % 2 == 0);
    double oracle_e = 0.0;
    Labeling oracle = enumerate_argmin(inst, &oracle_e);
    Labeling got = infer_exact(inst);
    CHECK(got == oracle);
    CHECK(inst.energy(got) == doctest::Approx(oracle_e).epsilon(1e-12));
  }
}

TEST_CASE("max flow basics") {
  FlowNetwork net;
  net.node_count = 2;
  net.source = 0;
  net.sink = 1;
  net.add_arc(0, 1, 3.0);
  MaxFlowResult r = max_flow(net);
  CHECK(r.value == doctest::Approx(3.0));
  CHECK(r.source_side[0]);
  CHECK(!r.source_side[1]);

  FlowNetwork disc;
  disc.node_count = 4;
  disc.source = 0;
  disc.sink = 3;
  disc.add_arc(1, 2, 5.0);  // island, untouched by s or t
  r = max_flow(disc);
  CHECK(r.value == 0.0);
  CHECK(r.source_side[0]);
  CHECK(!r.source_side[1]);
  CHECK(!r.source_side[2]);
  CHECK(!r.source_side[3]);
}

TEST_CASE("max flow equals brute-force min cut on random networks") {
  Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_int(5));  // up to 8 nodes
    FlowNetwork net;
    net.node_count = n;
    net.source = 0;
    net.sink = n - 1;
    const int arcs = 2 * n;
    for (int a = 0; a < arcs; ++a) {
      int u = static_cast<int>(rng.uniform_int(n));
      int v = static_cast<int>(rng.uniform_int(n));
      if (u == v) continue;
      net.add_arc(u, v, static_cast<double>(rng.uniform_int(10)));
    }

    MaxFlowResult r = max_flow(net);

    // Oracle: enumerate every s-t cut over the internal nodes.
    const int internal = n - 2;
    double best = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < (1 << internal); ++mask) {
      std::vector<bool> side(n, false);
      side[net.source] = true;
      for (int b = 0; b < internal; ++b) side[1 + b] = (mask >> b) & 1;
      best = std::min(best, cut_capacity(net, side));
    }
    CHECK(r.value == doctest::Approx(best).epsilon(1e-9));
    // Duality: the returned partition is itself a cut of the same capacity.
    CHECK(r.source_side[net.source]);
    CHECK(!r.source_side[net.sink]);
    CHECK(cut_capacity(net, r.source_side) == doctest::Approx(r.value).epsilon(1e-9));
  }
}

TEST_CASE("expansion move on a separable instance takes per-node argmin") {
  Rng rng(44);
  EnergyInstance inst = random_instance(rng, 6, 3, true);
  for (auto& mat : inst.pairwise) std::fill(mat.begin(), mat.end(), 0.0);

  Labeling cur(6, 2);
  ExpansionMove mv = expansion_move(inst, cur, 0);
  for (int i = 0; i < 6; ++i) {
    // Each node independently keeps label 2 or takes 0, whichever is cheaper;
    // the cut prefers the switch on exact ties (rejection happens upstream).
    double keep = inst.unary_cost(i, 2), take = inst.unary_cost(i, 0);
    if (take < keep) CHECK(mv.labeling[i] == 0);
    if (keep < take) CHECK(mv.labeling[i] == 2);
  }
  CHECK(inst.energy(mv.labeling) == doctest::Approx(mv.move_energy).epsilon(1e-9));
}

TEST_CASE("alpha-expansion solves separable instances exactly") {
  Rng rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    EnergyInstance inst = random_instance(rng, 7, 3, false);
    for (auto& mat : inst.pairwise) std::fill(mat.begin(), mat.end(), 0.0);
    Labeling init(7, 0);
    AlphaExpansionResult r = alpha_expansion(inst, init);
    CHECK(inst.energy(r.labeling) ==
          doctest::Approx(inst.energy(infer_exact(inst))).epsilon(1e-12));
  }
}

TEST_CASE("alpha-expansion is exact for binary submodular instances") {
  Rng rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_int(7));  // up to 10
    EnergyInstance inst = random_instance(rng, n, 2, true, true);
    Labeling init(n);
    for (int& v : init) v = static_cast<int>(rng.uniform_int(2));

    AlphaExpansionResult r = alpha_expansion(inst, init);
    CHECK(!r.any_truncated);
    // Integer costs make the optimal energies exactly representable, so the
    // comparison is equality, not approximate.
    CHECK(r.energy == inst.energy(infer_exact(inst)));
    CHECK(r.energy == inst.energy(r.labeling));
  }
}

TEST_CASE("alpha-expansion on 3-label Potts grids: monotone, stable, near-exact") {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    // 2x4 grid, Potts pairwise with per-edge strength.
    const int rows = 2, cols = 4, n = rows * cols, L = 3;
    EnergyInstance inst;
    inst.num_labels = L;
    inst.unary.resize(static_cast<size_t>(n) * L);
    for (double& c : inst.unary)
      c = static_cast<double>(rng.uniform_int(13)) - 6;
    auto add_potts = [&](int i, int j) {
      inst.edges.emplace_back(i, j);
      double lam = static_cast<double>(1 + rng.uniform_int(5));
      std::vector<double> mat(L * L, lam);
      for (int m = 0; m < L; ++m) mat[m * L + m] = 0.0;
      inst.pairwise.push_back(std::move(mat));
    };
    for (int r0 = 0; r0 < rows; ++r0)
      for (int c0 = 0; c0 < cols; ++c0) {
        int i = r0 * cols + c0;
        if (c0 + 1 < cols) add_potts(i, i + 1);
        if (r0 + 1 < rows) add_potts(i, i + cols);
      }

    AlphaExpansionResult r = alpha_expansion(inst, unary_argmin_init(inst));
    CHECK(!r.any_truncated);  // Potts moves are always submodular

    for (size_t k = 1; k < r.energy_trace.size(); ++k)
      CHECK(r.energy_trace[k] < r.energy_trace[k - 1]);

    // No single expansion move may improve the final labeling.
    for (int alpha = 0; alpha < L; ++alpha) {
      ExpansionMove mv = expansion_move(inst, r.labeling, alpha);
      CHECK(inst.energy(mv.labeling) >= r.energy);
    }

    double exact_e = inst.energy(infer_exact(inst));
    CHECK(r.energy >= exact_e);
    CHECK(r.energy - exact_e <= 0.05 * std::abs(exact_e) + 1e-9);
  }
}

TEST_CASE("alpha-expansion never increases energy, truncation included") {
  Rng rng(48);
  for (int trial = 0; trial < 25; ++trial) {
    // Arbitrary pairwise matrices: expansion subproblems may be
    // non-submodular, exercising the truncation path.
    EnergyInstance inst = random_instance(rng, 8, 3, false);
    Labeling init(8);
    for (int& v : init) v = static_cast<int>(rng.uniform_int(3));
    AlphaExpansionResult r = alpha_expansion(inst, init);
    CHECK(r.energy <= inst.energy(init));
    for (size_t k = 1; k < r.energy_trace.size(); ++k)
      CHECK(r.energy_trace[k] < r.energy_trace[k - 1]);
    CHECK(r.energy == inst.energy(r.labeling));
  }
}

TEST_CASE("icm basics") {
  Rng rng(49);
  EnergyInstance inst = random_instance(rng, 6, 3, true);
  for (auto& mat : inst.pairwise) std::fill(mat.begin(), mat.end(), 0.0);
  Labeling icm = infer_icm(inst, Labeling(6, 1), 50);
  CHECK(icm == unary_argmin_init(inst));

  EnergyInstance full = random_instance(rng, 6, 3, false);
  Labeling opt = infer_exact(full);
  CHECK(infer_icm(full, opt, 50) == opt);

  for (int trial = 0; trial < 10; ++trial) {
    EnergyInstance e = random_instance(rng, 7, 3, false);
    Labeling init(7);
    for (int& v : init) v = static_cast<int>(rng.uniform_int(3));
    CHECK(e.energy(infer_icm(e, init, 50)) <= e.energy(init));
  }
}

TEST_CASE("energy instance negates factor tables, symmetric mode expands") {
  Rng rng(50);
  FactorGraphSample s = test_util::random_sample(rng, 4, 3, 2, 2);
  FactorModel model = test_util::random_model(rng, 3, 2, 2,
                                              EdgeStateMode::symmetric, false,
                                              true);
  FactorTables t = build_factor_tables(model, s);
  EnergyInstance inst = make_energy_instance(t, s, model.idx);

  for (const auto& y : test_util::all_labelings(4, 3))
    CHECK(inst.energy(y) ==
          doctest::Approx(-compatibility(t, s, y, model.idx)).epsilon(1e-12));
  for (int e = 0; e < inst.edge_count(); ++e)
    for (int m = 0; m < 3; ++m)
      for (int n = 0; n < 3; ++n)
        CHECK(inst.pairwise_cost(e, m, n) == inst.pairwise_cost(e, n, m));
}

TEST_CASE("loss-augmented inference") {
  Rng rng(51);
  const int n = 5, L = 2;
  FactorGraphSample s = test_util::random_sample(rng, n, L, 2, 2);
  const Labeling truth = *s.ground_truth;
  EdgeStateIndex idx{EdgeStateMode::full, L};
  InferOptions exact_opts{InferBackend::exact, 2'000'000, 20};

  SUBCASE("zero tables, unit weights: complement of the truth") {
    FactorTables zero;
    zero.num_labels = L;
    zero.state_dim = idx.dim();
    zero.unary.assign(n * L, 0.0);
    zero.pairwise.assign(s.edge_count() * idx.dim(), 0.0);
    Labeling z = loss_augmented_infer(s, zero, truth, {1.0, 1.0}, idx, exact_opts);
    for (int i = 0; i < n; ++i) CHECK(z[i] == 1 - truth[i]);
  }

  SUBCASE("zero weights: identical to plain inference") {
    FactorModel model =
        test_util::random_model(rng, L, 2, 2, EdgeStateMode::full, true, false);
    FactorTables t = build_factor_tables(model, s);
    CHECK(loss_augmented_infer(s, t, truth, {0.0, 0.0}, idx, exact_opts) ==
          infer_map(s, t, idx, exact_opts));
  }

  SUBCASE("random tables: matches brute-force enumeration of loss + score") {
    for (int trial = 0; trial < 20; ++trial) {
      FactorModel model = test_util::random_model(
          rng, L, 2, 2, EdgeStateMode::full, trial % 2 == 0, true);
      FactorTables t = build_factor_tables(model, s);
      std::vector<double> eta = {0.5 + rng.uniform(), 0.5 + rng.uniform()};

      Labeling got = loss_augmented_infer(s, t, truth, eta, idx, exact_opts);

      Labeling best;
      double best_v = -std::numeric_limits<double>::infinity();
      for (const auto& y : test_util::all_labelings(n, L)) {
        double delta = 0.0;
        for (int i = 0; i < n; ++i)
          if (y[i] != truth[i]) delta += eta[truth[i]];
        double v = delta + compatibility(t, s, y, idx);
        if (v > best_v + 1e-12) {
          best_v = v;
          best = y;
        }
      }
      CHECK(got == best);
      double got_v = compatibility(t, s, got, idx);
      for (int i = 0; i < n; ++i)
        if (got[i] != truth[i]) got_v += eta[truth[i]];
      CHECK(got_v == doctest::Approx(best_v).epsilon(1e-9));
    }
  }

  SUBCASE("auto backend defers to alpha-expansion above the cap") {
    FactorModel model =
        test_util::random_model(rng, L, 2, 2, EdgeStateMode::full, false, false);
    FactorTables t = build_factor_tables(model, s);
    InferOptions tiny_cap{InferBackend::auto_select, 8, 20};  // 2^5 > 8
    InferOptions alpha_opts{InferBackend::alpha, 2'000'000, 20};
    CHECK(loss_augmented_infer(s, t, truth, {1.0, 1.0}, idx, tiny_cap) ==
          loss_augmented_infer(s, t, truth, {1.0, 1.0}, idx, alpha_opts));
  }
}
