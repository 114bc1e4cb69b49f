#include <algorithm>
#include <numeric>

#include "ssvm/dataio.hpp"
#include "ssvm/rng.hpp"

namespace ssvm {

namespace {

// Contiguous random partition of a width x height grid. Seeds are dropped on
// distinct cells and grown by repeatedly expanding a uniformly chosen
// frontier entry, so region shapes are irregular but connected. The first
// num_labels seeds take labels 0..L-1, which guarantees every label occurs.
std::vector<int> region_partition(Rng& rng, int width, int height,
                                  int num_labels) {
  const int n = width * height;
  int regions = num_labels + static_cast<int>(rng.uniform_int(num_labels));
  regions = std::min(regions, n);

  std::vector<int> cells(n);
  std::iota(cells.begin(), cells.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.uniform_int(i + 1));
    std::swap(cells[i], cells[j]);
  }

  std::vector<int> label(n, -1);
  struct Front {
    int cell;
    int lab;
  };
  std::vector<Front> frontier;
  auto push_neighbors = [&](int cell, int lab) {
    const int r = cell / width, c = cell % width;
    if (c > 0) frontier.push_back({cell - 1, lab});
    if (c + 1 < width) frontier.push_back({cell + 1, lab});
    if (r > 0) frontier.push_back({cell - width, lab});
    if (r + 1 < height) frontier.push_back({cell + width, lab});
  };

  for (int k = 0; k < regions; ++k) {
    int lab = k < num_labels ? k : static_cast<int>(rng.uniform_int(num_labels));
    label[cells[k]] = lab;
    push_neighbors(cells[k], lab);
  }
  while (!frontier.empty()) {
    size_t pick = rng.uniform_int(frontier.size());
    Front f = frontier[pick];
    frontier[pick] = frontier.back();
    frontier.pop_back();
    if (label[f.cell] != -1) continue;
    label[f.cell] = f.lab;
    push_neighbors(f.cell, f.lab);
  }
  return label;
}

}  // namespace

void SynthConfig::validate() const {
  if (width < 1 || height < 1)
    throw std::invalid_argument("grid dimensions must be positive");
  if (num_labels < 2) throw std::invalid_argument("need at least 2 labels");
  if (width * height < num_labels)
    throw std::invalid_argument("grid too small to host every label");
  if (sigma_u < 0.0) throw std::invalid_argument("sigma_u must be >= 0");
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("rho must lie in [0, 1]");
  if (samples < 1) throw std::invalid_argument("samples must be positive");
}

Dataset generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  Dataset data;
  data.num_labels = cfg.num_labels;
  data.d_u = cfg.num_labels;  // one prototype coordinate per class
  data.d_i = 4;
  for (int c = 0; c < cfg.num_labels; ++c)
    data.class_names.push_back("class" + std::to_string(c));

  const int n = cfg.width * cfg.height;
  for (int s = 0; s < cfg.samples; ++s) {
    Rng rng(mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(s)));
    std::vector<int> y = region_partition(rng, cfg.width, cfg.height,
                                          cfg.num_labels);

    FactorGraphSample sample;
    sample.node_features.reserve(n);
    for (int i = 0; i < n; ++i) {
      std::vector<double> f(cfg.num_labels, 0.0);
      f[y[i]] = 1.0;
      for (double& v : f) v += cfg.sigma_u * rng.gaussian();
      sample.node_features.push_back(std::move(f));
    }

    // Edge channels: [0] direct agreement signal, attenuated by rho;
    // [1] a random gate; [2] gate * agreement, which is informative only
    // through its product with channel 1; [3] constant bias.
    auto edge_features = [&](int i, int j) {
      const double s_ij = y[i] == y[j] ? 1.0 : -1.0;
      const double gate = rng.uniform() < 0.5 ? -1.0 : 1.0;
      return std::vector<double>{
          (1.0 - cfg.rho) * s_ij + 0.4 * rng.gaussian(),
          gate + 0.1 * rng.gaussian(),
          cfg.rho * gate * s_ij + 0.1 * rng.gaussian(),
          1.0,
      };
    };
    for (int r = 0; r < cfg.height; ++r)
      for (int c = 0; c < cfg.width; ++c) {
        const int i = r * cfg.width + c;
        if (c + 1 < cfg.width)
          sample.edges.push_back({i, i + 1, edge_features(i, i + 1)});
        if (r + 1 < cfg.height)
          sample.edges.push_back({i, i + cfg.width,
                                  edge_features(i, i + cfg.width)});
      }
    sample.ground_truth = std::move(y);
    data.samples.push_back(std::move(sample));
  }
  return data;
}

}  // namespace ssvm
