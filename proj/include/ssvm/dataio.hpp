#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssvm/graph.hpp"
#include "ssvm/training.hpp"

namespace ssvm {

// Raised on malformed files, failed I/O, and model/dataset mismatches.
// Messages carry the file path plus a line or record reference.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

struct Dataset {
  int num_labels = 0;
  int d_u = 0;
  int d_i = 0;
  std::vector<std::string> class_names;  // empty or num_labels entries
  std::vector<FactorGraphSample> samples;

  int sample_count() const { return static_cast<int>(samples.size()); }
};

// Checks header dims, runs validate_sample on every record, and verifies
// class_names cardinality. Throws DataError naming the first bad record.
void validate_dataset(const Dataset& data);

// Writes content to path via a temp file plus rename, so a reader never
// sees a torn file. Throws DataError on I/O failure.
void write_text_atomic(const std::string& path, const std::string& content);

// Line-delimited text format with an explicit versioned header. Doubles are
// written with 17 significant digits so write/read round-trips bit-exactly.
// Writes go to a temp file in the same directory, then rename.
void write_dataset(const Dataset& data, const std::string& path);
Dataset read_dataset(const std::string& path);

void save_model(const TrainedModel& trained, const std::string& path);
TrainedModel load_model(const std::string& path);

// Model/dataset compatibility: label counts agree, and the feature
// dimensions the model consumes (raw, or classifier-transformed) match.
// Throws DataError describing the mismatch.
void check_compatible(const TrainedModel& trained, const Dataset& data);

// ---------------------------------------------------------------------------
// Synthetic structured-segmentation benchmark. Grids are partitioned into
// contiguous same-label regions; node features are noisy class prototypes
// (weakly informative on their own) and edge features mix a direct
// agreement indicator with a gated channel whose product structure only a
// nonlinear interaction factor can exploit.
// ---------------------------------------------------------------------------

struct SynthConfig {
  int width = 8;
  int height = 8;
  int num_labels = 3;
  double sigma_u = 1.1;  // unary feature noise level
  double rho = 0.75;     // 0: edges plainly informative, 1: gated channel only
  int samples = 40;
  std::uint64_t seed = 0;

  void validate() const;
};

Dataset generate_synthetic(const SynthConfig& cfg);

}  // namespace ssvm
