#include "ssvm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <ostream>

#include "CLI11.hpp"
#include "ssvm/dataio.hpp"
#include "ssvm/metrics.hpp"
#include "ssvm/objective.hpp"
#include "ssvm/rng.hpp"
#include "ssvm/training.hpp"

namespace ssvm {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// gradcheck
// ---------------------------------------------------------------------------

// Sign pattern of every relu preactivation the objective evaluates. A
// finite-difference probe is only trusted when the pattern is identical at
// both displaced points: crossing a kink makes the central difference
// meaningless, so such coordinates are skipped rather than misjudged.
std::vector<int> relu_signature(const FactorModel& m,
                                const FactorGraphSample& s) {
  std::vector<int> sig;
  auto scan = [&](const NeuralFactorNet& net, const std::vector<double>& x) {
    NeuralFactorNet::Trace tr;
    net.forward_trace(x, tr);
    for (size_t l = 0; l < net.layers.size(); ++l) {
      if (net.layers[l].act != Activation::relu) continue;
      for (double v : tr.pre[l])
        sig.push_back(v > 1e-12 ? 1 : (v < -1e-12 ? -1 : 0));
    }
  };
  if (m.unary_is_neural())
    for (const auto& f : s.node_features) scan(*m.unary_net, f);
  if (m.inter_is_neural())
    for (const Edge& e : s.edges) scan(*m.inter_net, e.features);
  return sig;
}

bool signature_stable(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] == 0 || b[k] == 0 || a[k] != b[k]) return false;
  return true;
}

}  // namespace

void GradCheckOptions::validate() const {
  if (trials < 0) throw std::invalid_argument("trials must be >= 0");
  for (int w : hidden)
    if (w < 1) throw std::invalid_argument("hidden layer widths must be >= 1");
  if (static_cast<int>(hidden.size()) > 8)
    throw std::invalid_argument("at most 8 hidden layers");
  if (act != "random" && act != "tanh" && act != "relu")
    throw std::invalid_argument("act must be tanh, relu, or random");
  if (step <= 0.0) throw std::invalid_argument("step must be > 0");
  if (coords < 1) throw std::invalid_argument("coords must be >= 1");
  if (tol <= 0.0) throw std::invalid_argument("tol must be > 0");
}

GradCheckReport run_gradcheck(const GradCheckOptions& opts,
                              std::ostream& log) {
  opts.validate();
  GradCheckReport rep;
  rep.trials = opts.trials;
  if (opts.trials == 0) {
    log << "gradcheck: warning: 0 trials requested, result is vacuous\n";
    rep.pass = true;
    return rep;
  }

  const double h = opts.step;
  for (int t = 0; t < opts.trials; ++t) {
    Rng rng(mix_seed(opts.seed, 7000 + static_cast<std::uint64_t>(t)));
    const int L = 2 + static_cast<int>(rng.uniform_int(3));
    const int d_u = 1 + static_cast<int>(rng.uniform_int(5));
    const int d_i = 1 + static_cast<int>(rng.uniform_int(4));
    std::vector<int> widths = opts.hidden;
    if (widths.empty()) {
      const int layers = 1 + static_cast<int>(rng.uniform_int(3));
      for (int l = 0; l < layers; ++l)
        widths.push_back(1 + static_cast<int>(rng.uniform_int(64)));
    }
    Activation act = Activation::tanh;
    if (opts.act == "relu" || (opts.act == "random" && rng.uniform() < 0.5))
      act = Activation::relu;

    ModelArch arch;
    arch.labels = LabelSet(L);
    arch.edge_mode = rng.uniform() < 0.5 ? EdgeStateMode::full
                                         : EdgeStateMode::symmetric;
    arch.d_u = d_u;
    arch.d_i = d_i;
    arch.unary = {SideKind::neural, widths, act};
    arch.inter = {SideKind::neural, widths, act};
    FactorModel m = init_model(arch, mix_seed(opts.seed, 9000 + t));
    for (double& p : m.unary_net->params) p = 0.6 * rng.gaussian();
    for (double& p : m.inter_net->params) p = 0.6 * rng.gaussian();

    FactorGraphSample s;
    const int n = 4;
    for (int i = 0; i < n; ++i) {
      std::vector<double> f(d_u);
      for (double& v : f) v = rng.gaussian();
      s.node_features.push_back(std::move(f));
    }
    auto edge_feats = [&] {
      std::vector<double> f(d_i);
      for (double& v : f) v = rng.gaussian();
      return f;
    };
    for (int i = 0; i + 1 < n; ++i) s.edges.push_back({i, i + 1, edge_feats()});
    s.edges.push_back({0, 2, edge_feats()});

    Labeling truth(n), z(n);
    for (int& v : truth) v = static_cast<int>(rng.uniform_int(L));
    do {
      for (int& v : z) v = static_cast<int>(rng.uniform_int(L));
    } while (z == truth);

    const double lambda = 0.8;
    ClassWeights w = ClassWeights::uniform_for(L);
    const double delta = structured_loss(truth, z, w);
    auto objective_at = [&] {
      FactorTables tab = build_factor_tables(m, s);
      return 0.5 * m.param_norm_sq() +
             lambda * (delta - compatibility(tab, s, truth, m.idx) +
                       compatibility(tab, s, z, m.idx));
    };

    SampleGradient g = sample_gradient(m, s, z, truth, true, lambda);
    std::vector<double>& pu = unary_param_block(m);
    std::vector<double>& pi = inter_param_block(m);
    const int total = static_cast<int>(pu.size() + pi.size());

    // Distinct probe coordinates, uniformly sampled when there are more
    // parameters than the probe budget.
    std::vector<int> order(total);
    std::iota(order.begin(), order.end(), 0);
    const int probes = std::min(opts.coords, total);
    for (int k = 0; k < probes; ++k) {
      int j = k + static_cast<int>(rng.uniform_int(total - k));
      std::swap(order[k], order[j]);
    }

    for (int k = 0; k < probes; ++k) {
      const int c = order[k];
      double* slot = c < static_cast<int>(pu.size())
                         ? &pu[c]
                         : &pi[c - static_cast<int>(pu.size())];
      const double analytic = c < static_cast<int>(pu.size())
                                  ? g.unary[c]
                                  : g.inter[c - pu.size()];
      const double orig = *slot;
      *slot = orig + h;
      const double fp = objective_at();
      const auto sig_p = relu_signature(m, s);
      *slot = orig - h;
      const double fm = objective_at();
      const auto sig_m = relu_signature(m, s);
      *slot = orig;
      if (act == Activation::relu && !signature_stable(sig_p, sig_m)) {
        ++rep.coords_skipped;
        continue;
      }
      const double fd = (fp - fm) / (2.0 * h);
      const double rel = std::fabs(fd - analytic) /
                         std::max({1.0, std::fabs(fd), std::fabs(analytic)});
      rep.max_rel_err = std::max(rep.max_rel_err, rel);
      ++rep.coords_checked;
    }
  }

  rep.pass = rep.coords_checked > 0 && rep.max_rel_err < opts.tol;
  log << "gradcheck: " << rep.trials << " trials, " << rep.coords_checked
      << " coordinates checked, " << rep.coords_skipped
      << " skipped at relu kinks\n";
  log << "gradcheck: max relative error " << fmt17(rep.max_rel_err)
      << " (tolerance " << fmt17(opts.tol) << ") -> "
      << (rep.pass ? "PASS" : "FAIL") << "\n";
  return rep;
}

// ---------------------------------------------------------------------------
// infercheck
// ---------------------------------------------------------------------------

void InferCheckOptions::validate() const {
  if (trials < 0) throw std::invalid_argument("trials must be >= 0");
  if (max_nodes < 2 || max_nodes > 12)
    throw std::invalid_argument("max_nodes must lie in [2, 12]");
  if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
  if (gap_tol <= 0.0) throw std::invalid_argument("gap_tol must be > 0");
}

namespace {

int int_cost(Rng& rng) { return static_cast<int>(rng.uniform_int(21)) - 10; }

// Random connected instance with integer costs: a path plus random chords.
EnergyInstance random_instance(Rng& rng, int max_nodes, int L) {
  EnergyInstance inst;
  inst.num_labels = L;
  const int n = 2 + static_cast<int>(rng.uniform_int(max_nodes - 1));
  inst.unary.resize(static_cast<size_t>(n) * L);
  for (double& u : inst.unary) u = int_cost(rng);
  for (int i = 0; i + 1 < n; ++i) inst.edges.push_back({i, i + 1});
  const int extra = static_cast<int>(rng.uniform_int(n));
  for (int t = 0; t < extra; ++t) {
    int i = static_cast<int>(rng.uniform_int(n));
    int j = static_cast<int>(rng.uniform_int(n));
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (std::find(inst.edges.begin(), inst.edges.end(),
                  std::make_pair(i, j)) == inst.edges.end())
      inst.edges.push_back({i, j});
  }
  return inst;
}

bool trace_monotone(const std::vector<double>& trace) {
  for (size_t k = 1; k < trace.size(); ++k)
    if (trace[k] > trace[k - 1]) return false;
  return true;
}

}  // namespace

InferCheckReport run_infercheck(const InferCheckOptions& opts,
                                std::ostream& log) {
  opts.validate();
  InferCheckReport rep;
  rep.binary_trials = opts.trials;

  // Battery 1: binary submodular instances, exact agreement required.
  for (int t = 0; t < opts.trials; ++t) {
    Rng rng(mix_seed(opts.seed, 3000 + static_cast<std::uint64_t>(t)));
    EnergyInstance inst = random_instance(rng, opts.max_nodes, 2);
    for (size_t e = 0; e < inst.edges.size(); ++e) {
      double a = int_cost(rng), b = int_cost(rng);
      double c = int_cost(rng), d = int_cost(rng);
      if (a + d > b + c) {
        std::swap(a, b);
        std::swap(c, d);
      }
      inst.pairwise.push_back({a, b, c, d});
    }
    const Labeling ex = infer_exact(inst);
    AlphaExpansionResult ax =
        alpha_expansion(inst, unary_argmin_init(inst), opts.max_sweeps);
    if (ax.energy == inst.energy(ex)) ++rep.binary_exact;
    if (!trace_monotone(ax.energy_trace)) ++rep.monotone_violations;
  }

  // Battery 2: 3-label Potts-style instances; single-move optimality and a
  // monotone trace are hard requirements, the optimality gap is reported.
  double gap_sum = 0.0;
  for (int t = 0; t < opts.trials; ++t) {
    Rng rng(mix_seed(opts.seed, 4000 + static_cast<std::uint64_t>(t)));
    EnergyInstance inst = random_instance(rng, opts.max_nodes, 3);
    for (size_t e = 0; e < inst.edges.size(); ++e) {
      const double w = static_cast<double>(rng.uniform_int(11));
      std::vector<double> table(9, w);
      for (int a = 0; a < 3; ++a) table[static_cast<size_t>(a) * 3 + a] = 0.0;
      inst.pairwise.push_back(std::move(table));
    }
    const Labeling ex = infer_exact(inst);
    const double e_exact = inst.energy(ex);
    AlphaExpansionResult ax =
        alpha_expansion(inst, unary_argmin_init(inst), opts.max_sweeps);
    if (!trace_monotone(ax.energy_trace)) ++rep.monotone_violations;
    for (int alpha = 0; alpha < 3; ++alpha) {
      ExpansionMove mv = expansion_move(inst, ax.labeling, alpha);
      if (inst.energy(mv.labeling) < ax.energy) ++rep.local_opt_violations;
    }
    const double gap =
        (ax.energy - e_exact) / std::max(1.0, std::fabs(e_exact));
    gap_sum += gap;
    rep.max_gap = std::max(rep.max_gap, gap);
  }
  rep.mean_gap = opts.trials > 0 ? gap_sum / opts.trials : 0.0;

  rep.pass = rep.binary_exact == rep.binary_trials &&
             rep.local_opt_violations == 0 && rep.monotone_violations == 0 &&
             rep.mean_gap <= opts.gap_tol;

  log << "infercheck: binary submodular " << rep.binary_exact << "/"
      << rep.binary_trials << " exact matches\n";
  log << "infercheck: 3-label local-optimality violations "
      << rep.local_opt_violations << ", monotone-trace violations "
      << rep.monotone_violations << "\n";
  log << "infercheck: 3-label mean relative gap " << fmt17(rep.mean_gap)
      << " (max " << fmt17(rep.max_gap) << ", tolerance "
      << fmt17(opts.gap_tol) << ") -> " << (rep.pass ? "PASS" : "FAIL")
      << "\n";
  return rep;
}

// ---------------------------------------------------------------------------
// Command implementations.
// ---------------------------------------------------------------------------

namespace {

struct TrainFlags {
  std::string data;
  std::string regime = "int_nrl";
  std::string out;
  std::string trace;
  std::string weights = "class_balanced";
  std::string edge_mode = "symmetric";
  std::string act = "tanh";
  std::string backend = "auto";
  std::string batch = "full";
  int threads = 0;
  TrainConfig cfg;
};

BatchMode batch_from_name(const std::string& name) {
  if (name == "full") return BatchMode::full;
  if (name == "per_sample") return BatchMode::per_sample;
  throw std::invalid_argument("unknown batch mode: " + name);
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::string out = "iteration,objective,best_objective,mean_hinge,seconds\n";
  for (const TraceRow& r : rows) {
    out += std::to_string(r.iteration) + "," + fmt17(r.objective) + "," +
           fmt17(r.best_objective) + "," + fmt17(r.mean_hinge) + "," +
           fmt17(r.seconds) + "\n";
  }
  return out;
}

std::vector<Labeling> ground_truths(const Dataset& data) {
  std::vector<Labeling> ys;
  for (const FactorGraphSample& s : data.samples) ys.push_back(*s.ground_truth);
  return ys;
}

void cmd_synth(const std::string& grid, SynthConfig cfg,
               const std::string& out) {
  const size_t x = grid.find('x');
  try {
    size_t used = 0;
    cfg.width = std::stoi(grid, &used);
    if (x == std::string::npos || used != x)
      throw std::invalid_argument("bad grid");
    cfg.height = std::stoi(grid.substr(x + 1), &used);
    if (x + 1 + used != grid.size()) throw std::invalid_argument("bad grid");
  } catch (const std::exception&) {
    throw std::invalid_argument("--grid expects WIDTHxHEIGHT, e.g. 8x8");
  }
  Dataset data = generate_synthetic(cfg);
  write_dataset(data, out);
  std::cout << "wrote " << data.sample_count() << " samples ("
            << cfg.width << "x" << cfg.height << " grid, " << cfg.num_labels
            << " labels) to " << out << "\n";
}

void cmd_train(const TrainFlags& f) {
  TrainConfig cfg = f.cfg;
  cfg.weight_mode = weight_mode_from_name(f.weights);
  cfg.edge_mode = edge_mode_from_name(f.edge_mode);
  cfg.hidden_act = activation_from_name(f.act);
  cfg.infer.backend = backend_from_name(f.backend);
  cfg.batch = batch_from_name(f.batch);
  cfg.validate();
  const TrainRegime regime = regime_from_name(f.regime);
  const ExecPolicy exec{f.threads};

  Dataset data = read_dataset(f.data);
  TrainedModel tm =
      train_regime(data.samples, data.num_labels, regime, cfg, exec);
  save_model(tm, f.out);

  const std::string trace_path = f.trace.empty() ? f.out + ".trace.csv"
                                                 : f.trace;
  if (tm.state) {
    write_text_atomic(trace_path, trace_csv(tm.state->trace));
    std::cout << "best objective  " << fmt17(tm.state->best_objective)
              << " after " << tm.state->iterations_run << " iterations\n";
  } else {
    write_text_atomic(trace_path, trace_csv({}));
    std::cout << "classifier-only regime, no structured objective trace\n";
  }

  auto preds = predict_trained(tm, data.samples, cfg.infer, exec);
  MetricsReport rep =
      compute_metrics(ground_truths(data), preds, data.num_labels);
  std::cout << "train pixel accuracy  " << fmt17(rep.pixel_accuracy) << "\n";
  std::cout << "train class-mean      " << fmt17(rep.class_mean_accuracy)
            << "\n";
  std::cout << "model written to " << f.out << ", trace to " << trace_path
            << "\n";
}

void cmd_eval(const std::string& data_path, const std::string& model_path,
              const std::string& backend, const std::string& ablate,
              const std::string& out, int threads) {
  const InferOptions opts{backend_from_name(backend), 2'000'000, 20};
  const AblateKeep keep = ablate_from_name(ablate);
  Dataset data = read_dataset(data_path);
  TrainedModel tm = load_model(model_path);
  check_compatible(tm, data);
  auto preds =
      predict_trained(tm, data.samples, opts, ExecPolicy{threads}, keep);
  MetricsReport rep =
      compute_metrics(ground_truths(data), preds, data.num_labels);
  std::cout << "regime " << regime_name(tm.regime) << ", factors "
            << ablate_name(keep) << "\n\n";
  std::cout << format_metrics(rep, data.class_names);
  if (!out.empty()) {
    write_text_atomic(out, metrics_csv(rep, data.class_names));
    std::cout << "\nmetrics csv written to " << out << "\n";
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"structured prediction with pairwise factor graphs"};
  app.require_subcommand(1);
  int status = 0;

  // synth ------------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a synthetic grid dataset");
  std::string grid = "8x8";
  SynthConfig synth_cfg;
  std::string synth_out = "dataset.txt";
  synth->add_option("--grid", grid, "grid size WIDTHxHEIGHT")
      ->capture_default_str();
  synth->add_option("--labels", synth_cfg.num_labels, "label count")
      ->capture_default_str();
  synth->add_option("--sigma-u", synth_cfg.sigma_u, "unary noise level")
      ->capture_default_str();
  synth->add_option("--rho", synth_cfg.rho,
                    "interaction gating strength in [0,1]")
      ->capture_default_str();
  synth->add_option("--samples", synth_cfg.samples, "sample count")
      ->capture_default_str();
  synth->add_option("--seed", synth_cfg.seed, "generator seed")
      ->capture_default_str();
  synth->add_option("--out", synth_out, "output dataset path")
      ->capture_default_str();
  synth->callback([&] { cmd_synth(grid, synth_cfg, synth_out); });

  // train ------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "train a model on a dataset");
  TrainFlags tf;
  train->add_option("--data", tf.data, "dataset path")->required();
  train->add_option("--regime", tf.regime,
                    "unary | bif_lin | bif_nrl | int_lin | int_nrl")
      ->capture_default_str();
  train->add_option("--out", tf.out, "model output path")->required();
  train->add_option("--trace", tf.trace,
                    "objective trace csv path (default: <out>.trace.csv)");
  train->add_option("--iters", tf.cfg.iterations, "subgradient iterations")
      ->capture_default_str();
  train->add_option("--lambda", tf.cfg.lambda, "hinge weight")
      ->capture_default_str();
  train->add_option("--mu", tf.cfg.mu, "rate numerator: rate = mu/(t0+t)")
      ->capture_default_str();
  train->add_option("--t0", tf.cfg.t0, "rate offset")->capture_default_str();
  train->add_option("--momentum", tf.cfg.momentum, "momentum in [0,1)")
      ->capture_default_str();
  train->add_option("--unary-scale", tf.cfg.unary_rate_scale,
                    "unary-side rate multiplier")
      ->capture_default_str();
  train->add_option("--inter-scale", tf.cfg.inter_rate_scale,
                    "interaction-side rate multiplier")
      ->capture_default_str();
  train->add_option("--weights", tf.weights,
                    "loss weighting: uniform | class_balanced")
      ->capture_default_str();
  train->add_option("--edge-mode", tf.edge_mode,
                    "pairwise state space: full | symmetric")
      ->capture_default_str();
  train->add_option("--unary-hidden", tf.cfg.unary_hidden,
                    "unary net hidden widths");
  train->add_option("--inter-hidden", tf.cfg.inter_hidden,
                    "interaction net hidden widths");
  train->add_option("--act", tf.act, "hidden activation: tanh | relu")
      ->capture_default_str();
  train->add_option("--backend", tf.backend,
                    "inference: exact | alpha | icm | auto")
      ->capture_default_str();
  train->add_option("--sweeps", tf.cfg.infer.max_sweeps,
                    "max expansion sweeps")
      ->capture_default_str();
  train->add_option("--enum-cap", tf.cfg.infer.enum_cap,
                    "auto backend: exact enumeration cap")
      ->capture_default_str();
  train->add_option("--batch", tf.batch, "update cadence: full | per_sample")
      ->capture_default_str();
  train->add_option("--seed", tf.cfg.seed, "training seed")
      ->capture_default_str();
  train->add_option("--clf-epochs", tf.cfg.clf_epochs,
                    "classifier epochs (bifurcated regimes)")
      ->capture_default_str();
  train->add_option("--clf-rate", tf.cfg.clf_rate, "classifier learning rate")
      ->capture_default_str();
  train->add_option("--threads", tf.threads,
                    "worker threads (0 = all, 1 = serial)")
      ->capture_default_str();
  train->callback([&] { cmd_train(tf); });

  // eval -------------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "evaluate a model on a dataset");
  std::string eval_data, eval_model, eval_out;
  std::string eval_backend = "auto", eval_ablate = "both";
  int eval_threads = 0;
  eval->add_option("--data", eval_data, "dataset path")->required();
  eval->add_option("--model", eval_model, "model path")->required();
  eval->add_option("--backend", eval_backend,
                   "inference: exact | alpha | icm | auto")
      ->capture_default_str();
  eval->add_option("--ablate", eval_ablate,
                   "factors kept: both | unary_only | interaction_only")
      ->capture_default_str();
  eval->add_option("--out", eval_out, "optional metrics csv path");
  eval->add_option("--threads", eval_threads,
                   "worker threads (0 = all, 1 = serial)")
      ->capture_default_str();
  eval->callback([&] {
    cmd_eval(eval_data, eval_model, eval_backend, eval_ablate, eval_out,
             eval_threads);
  });

  // gradcheck --------------------------------------------------------------
  auto* gc = app.add_subcommand(
      "gradcheck", "finite-difference check of factor-network gradients");
  GradCheckOptions gco;
  gc->add_option("--trials", gco.trials, "random model/sample trials")
      ->capture_default_str();
  gc->add_option("--seed", gco.seed, "seed")->capture_default_str();
  gc->add_option("--hidden", gco.hidden,
                 "fixed hidden widths (default: randomized per trial)");
  gc->add_option("--act", gco.act, "tanh | relu | random")
      ->capture_default_str();
  gc->add_option("--step", gco.step, "finite-difference step")
      ->capture_default_str();
  gc->add_option("--coords", gco.coords, "coordinates probed per trial")
      ->capture_default_str();
  gc->add_option("--tol", gco.tol, "max relative error tolerance")
      ->capture_default_str();
  gc->callback([&] {
    if (!run_gradcheck(gco, std::cout).pass) status = 3;
  });

  // infercheck -------------------------------------------------------------
  auto* ic = app.add_subcommand(
      "infercheck", "expansion-move solver checks against exact enumeration");
  InferCheckOptions ico;
  ic->add_option("--trials", ico.trials, "instances per battery")
      ->capture_default_str();
  ic->add_option("--seed", ico.seed, "seed")->capture_default_str();
  ic->add_option("--nodes", ico.max_nodes, "max nodes per instance")
      ->capture_default_str();
  ic->add_option("--sweeps", ico.max_sweeps, "max expansion sweeps")
      ->capture_default_str();
  ic->add_option("--gap-tol", ico.gap_tol, "mean relative gap tolerance")
      ->capture_default_str();
  ic->callback([&] {
    if (!run_infercheck(ico, std::cout).pass) status = 3;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}

}  // namespace ssvm
