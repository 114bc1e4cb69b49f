#include "ssvm/dataio.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ssvm/objective.hpp"

namespace ssvm {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_vector(std::string& out, const std::vector<double>& v) {
  for (double x : v) {
    out += ' ';
    out += fmt(x);
  }
  out += '\n';
}

// Line-oriented reader with positional diagnostics. Every line is a keyword
// followed by whitespace-separated fields.
class LineReader {
 public:
  LineReader(const std::string& path) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open");
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines_.push_back(line);
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw DataError(path_ + ":" + std::to_string(lineno_) + ": " + msg +
                    (context_.empty() ? "" : " (" + context_ + ")"));
  }

  void set_context(const std::string& c) { context_ = c; }

  // Next line split into tokens; the first token must equal `keyword`.
  std::vector<std::string> expect(const std::string& keyword) {
    if (next_ >= lines_.size()) {
      lineno_ = lines_.size() + 1;
      fail("unexpected end of file, expected '" + keyword + "'");
    }
    lineno_ = next_ + 1;
    std::istringstream ss(lines_[next_++]);
    std::vector<std::string> tok;
    std::string t;
    while (ss >> t) tok.push_back(t);
    if (tok.empty() || tok[0] != keyword)
      fail("expected '" + keyword + "', got '" + (tok.empty() ? "" : tok[0]) +
           "'");
    return tok;
  }

  // Peek at the keyword of the next line without consuming it.
  std::string peek() const {
    if (next_ >= lines_.size()) return "";
    std::istringstream ss(lines_[next_]);
    std::string t;
    ss >> t;
    return t;
  }

  long long to_int(const std::string& tok) const {
    size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      fail("expected integer, got '" + tok + "'");
    }
    if (pos != tok.size()) fail("expected integer, got '" + tok + "'");
    return v;
  }

  double to_double(const std::string& tok) const {
    const char* s = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end != s + tok.size()) fail("expected number, got '" + tok + "'");
    return v;
  }

  // Fields of `tok` after the keyword, parsed as exactly `n` doubles.
  std::vector<double> doubles(const std::vector<std::string>& tok, size_t skip,
                              size_t n) const {
    if (tok.size() != skip + n)
      fail("expected " + std::to_string(n) + " numbers, got " +
           std::to_string(tok.size() - skip));
    std::vector<double> v(n);
    for (size_t k = 0; k < n; ++k) v[k] = to_double(tok[skip + k]);
    return v;
  }

  long long field_int(const std::vector<std::string>& tok, size_t k) const {
    if (k >= tok.size()) fail("missing field " + std::to_string(k));
    return to_int(tok[k]);
  }

  const std::string& field(const std::vector<std::string>& tok,
                           size_t k) const {
    if (k >= tok.size()) fail("missing field " + std::to_string(k));
    return tok[k];
  }

 private:
  std::string path_;
  std::vector<std::string> lines_;
  size_t next_ = 0;
  size_t lineno_ = 0;
  std::string context_;
};

void append_net(std::string& out, const char* side,
                const NeuralFactorNet& net) {
  out += std::string(side) + " neural\n";
  out += "net_layers " + std::to_string(net.layers.size()) + "\n";
  for (const Layer& l : net.layers)
    out += "layer " + std::to_string(l.in) + " " + std::to_string(l.out) +
           " " + activation_name(l.act) + "\n";
  out += "params " + std::to_string(net.params.size());
  append_vector(out, net.params);
}

void append_linear(std::string& out, const char* side,
                   const std::vector<double>& w) {
  out += std::string(side) + " linear\n";
  out += "params " + std::to_string(w.size());
  append_vector(out, w);
}

NeuralFactorNet read_net(LineReader& r) {
  NeuralFactorNet net;
  auto lt = r.expect("net_layers");
  long long n = r.field_int(lt, 1);
  if (n < 1 || n > 64) r.fail("bad layer count");
  for (long long l = 0; l < n; ++l) {
    auto tok = r.expect("layer");
    Layer layer;
    layer.in = static_cast<int>(r.field_int(tok, 1));
    layer.out = static_cast<int>(r.field_int(tok, 2));
    try {
      layer.act = activation_from_name(r.field(tok, 3));
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
    net.layers.push_back(layer);
  }
  auto pt = r.expect("params");
  long long count = r.field_int(pt, 1);
  if (count < 0) r.fail("negative param count");
  net.params = r.doubles(pt, 2, static_cast<size_t>(count));
  try {
    net.check_consistent();
  } catch (const std::exception& e) {
    r.fail(e.what());
  }
  return net;
}

std::vector<double> read_linear(LineReader& r, size_t expect_len) {
  auto pt = r.expect("params");
  long long count = r.field_int(pt, 1);
  if (count < 0 || static_cast<size_t>(count) != expect_len)
    r.fail("linear block has " + std::to_string(count) +
           " params, expected " + std::to_string(expect_len));
  return r.doubles(pt, 2, expect_len);
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(tmp + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw DataError(tmp + ": write failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::string err = std::strerror(errno);
    std::remove(tmp.c_str());
    throw DataError(path + ": rename failed: " + err);
  }
}

void validate_dataset(const Dataset& data) {
  if (data.num_labels < 2) throw DataError("dataset needs at least 2 labels");
  if (data.d_u < 1) throw DataError("dataset needs d_u >= 1");
  if (data.d_i < 0) throw DataError("dataset needs d_i >= 0");
  if (!data.class_names.empty() &&
      static_cast<int>(data.class_names.size()) != data.num_labels)
    throw DataError("class_names count does not match label count");
  LabelSet labels(data.num_labels);
  for (int n = 0; n < data.sample_count(); ++n) {
    auto bad = validate_sample(data.samples[n], labels, data.d_u, data.d_i);
    if (!bad.empty())
      throw DataError("sample " + std::to_string(n) + ": " + bad.front());
  }
}

void write_dataset(const Dataset& data, const std::string& path) {
  validate_dataset(data);
  std::string out;
  out += "ssvm-dataset 1\n";
  out += "labels " + std::to_string(data.num_labels) + "\n";
  out += "d_u " + std::to_string(data.d_u) + "\n";
  out += "d_i " + std::to_string(data.d_i) + "\n";
  if (!data.class_names.empty()) {
    out += "class_names";
    for (const std::string& c : data.class_names) out += " " + c;
    out += "\n";
  }
  out += "samples " + std::to_string(data.sample_count()) + "\n";
  for (int n = 0; n < data.sample_count(); ++n) {
    const FactorGraphSample& s = data.samples[n];
    if (!s.ground_truth)
      throw DataError("sample " + std::to_string(n) + " has no ground truth");
    out += "sample " + std::to_string(n) + "\n";
    out += "nodes " + std::to_string(s.node_count()) + "\n";
    for (const auto& f : s.node_features) {
      out += "node";
      append_vector(out, f);
    }
    out += "edges " + std::to_string(s.edge_count()) + "\n";
    for (const Edge& e : s.edges) {
      out += "edge " + std::to_string(e.i) + " " + std::to_string(e.j);
      append_vector(out, e.features);
    }
    out += "truth";
    for (int y : *s.ground_truth) out += " " + std::to_string(y);
    out += "\n";
  }
  write_text_atomic(path, out);
}

Dataset read_dataset(const std::string& path) {
  LineReader r(path);
  auto head = r.expect("ssvm-dataset");
  if (r.field_int(head, 1) != 1) r.fail("unsupported dataset format version");

  Dataset data;
  data.num_labels = static_cast<int>(r.field_int(r.expect("labels"), 1));
  data.d_u = static_cast<int>(r.field_int(r.expect("d_u"), 1));
  data.d_i = static_cast<int>(r.field_int(r.expect("d_i"), 1));
  if (r.peek() == "class_names") {
    auto tok = r.expect("class_names");
    data.class_names.assign(tok.begin() + 1, tok.end());
  }
  long long count = r.field_int(r.expect("samples"), 1);
  if (count < 0) r.fail("negative sample count");

  for (long long n = 0; n < count; ++n) {
    r.set_context("sample record " + std::to_string(n));
    auto st = r.expect("sample");
    if (r.field_int(st, 1) != n) r.fail("sample records out of order");

    FactorGraphSample s;
    long long nodes = r.field_int(r.expect("nodes"), 1);
    if (nodes < 1) r.fail("sample needs at least one node");
    for (long long i = 0; i < nodes; ++i) {
      auto tok = r.expect("node");
      s.node_features.push_back(
          r.doubles(tok, 1, static_cast<size_t>(data.d_u)));
    }
    long long edges = r.field_int(r.expect("edges"), 1);
    if (edges < 0) r.fail("negative edge count");
    for (long long k = 0; k < edges; ++k) {
      auto tok = r.expect("edge");
      Edge e;
      e.i = static_cast<int>(r.field_int(tok, 1));
      e.j = static_cast<int>(r.field_int(tok, 2));
      e.features = r.doubles(tok, 3, static_cast<size_t>(data.d_i));
      s.edges.push_back(std::move(e));
    }
    auto tt = r.expect("truth");
    if (tt.size() != static_cast<size_t>(nodes) + 1)
      r.fail("truth has " + std::to_string(tt.size() - 1) + " labels for " +
             std::to_string(nodes) + " nodes");
    Labeling y(nodes);
    for (long long i = 0; i < nodes; ++i)
      y[i] = static_cast<int>(r.field_int(tt, static_cast<size_t>(i) + 1));
    s.ground_truth = std::move(y);
    data.samples.push_back(std::move(s));
  }
  r.set_context("");
  try {
    validate_dataset(data);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
  return data;
}

void save_model(const TrainedModel& trained, const std::string& path) {
  const FactorModel& m = trained.model;
  m.check_consistent();
  std::string out;
  out += "ssvm-model 1\n";
  out += std::string("regime ") + regime_name(trained.regime) + "\n";
  out += "labels " + std::to_string(m.labels.count) + "\n";
  out += "d_u " + std::to_string(m.d_u) + "\n";
  out += "d_i " + std::to_string(m.d_i) + "\n";
  out += std::string("edge_mode ") + edge_mode_name(m.idx.mode) + "\n";
  // A hand-assembled TrainedModel may carry an unset eta; default it rather
  // than writing a file that cannot be read back.
  ClassWeights cw = trained.weights;
  if (static_cast<int>(cw.eta.size()) != m.labels.count)
    cw = ClassWeights::uniform_for(m.labels.count);
  out += std::string("weights ") + weight_mode_name(cw.mode);
  append_vector(out, cw.eta);
  if (trained.classifier) {
    const UnaryClassifier& c = *trained.classifier;
    out += "classifier " + std::to_string(c.d_u) + " " +
           std::to_string(c.num_labels);
    append_vector(out, c.weights);
  } else {
    out += "classifier none\n";
  }
  if (m.unary_is_neural())
    append_net(out, "unary", *m.unary_net);
  else
    append_linear(out, "unary", *m.w_unary);
  if (m.inter_is_neural())
    append_net(out, "inter", *m.inter_net);
  else
    append_linear(out, "inter", *m.w_inter);
  write_text_atomic(path, out);
}

TrainedModel load_model(const std::string& path) {
  LineReader r(path);
  auto head = r.expect("ssvm-model");
  if (r.field_int(head, 1) != 1) r.fail("unsupported model format version");

  TrainedModel tm;
  try {
    tm.regime = regime_from_name(r.field(r.expect("regime"), 1));
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  int labels = static_cast<int>(r.field_int(r.expect("labels"), 1));
  if (labels < 2) r.fail("model needs at least 2 labels");
  tm.model.labels = LabelSet(labels);
  tm.model.d_u = static_cast<int>(r.field_int(r.expect("d_u"), 1));
  tm.model.d_i = static_cast<int>(r.field_int(r.expect("d_i"), 1));
  try {
    tm.model.idx = EdgeStateIndex(
        edge_mode_from_name(r.field(r.expect("edge_mode"), 1)), labels);
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }

  auto wt = r.expect("weights");
  try {
    tm.weights.mode = weight_mode_from_name(r.field(wt, 1));
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  tm.weights.eta = r.doubles(wt, 2, static_cast<size_t>(labels));

  auto ct = r.expect("classifier");
  if (r.field(ct, 1) != "none") {
    UnaryClassifier c;
    c.d_u = static_cast<int>(r.to_int(ct[1]));
    c.num_labels = static_cast<int>(r.field_int(ct, 2));
    if (c.d_u < 1 || c.num_labels != labels)
      r.fail("classifier dims inconsistent with model header");
    c.weights = r.doubles(ct, 3, static_cast<size_t>(c.d_u + 1) * labels);
    tm.classifier = std::move(c);
  }

  const EdgeStateIndex& idx = tm.model.idx;
  for (int side = 0; side < 2; ++side) {
    const char* key = side == 0 ? "unary" : "inter";
    auto tok = r.expect(key);
    const std::string& kind = r.field(tok, 1);
    size_t linear_len = side == 0
                            ? static_cast<size_t>(tm.model.d_u) * labels
                            : static_cast<size_t>(tm.model.d_i) * idx.dim();
    if (kind == "linear") {
      auto w = read_linear(r, linear_len);
      if (side == 0)
        tm.model.w_unary = std::move(w);
      else
        tm.model.w_inter = std::move(w);
    } else if (kind == "neural") {
      NeuralFactorNet net = read_net(r);
      if (side == 0)
        tm.model.unary_net = std::move(net);
      else
        tm.model.inter_net = std::move(net);
    } else {
      r.fail(std::string("unknown ") + key + " factor kind '" + kind + "'");
    }
  }

  try {
    tm.model.check_consistent();
  } catch (const std::exception& e) {
    throw DataError(path + ": inconsistent model: " + e.what());
  }
  return tm;
}

void check_compatible(const TrainedModel& trained, const Dataset& data) {
  const FactorModel& m = trained.model;
  if (m.labels.count != data.num_labels)
    throw DataError("model has " + std::to_string(m.labels.count) +
                    " labels, dataset has " + std::to_string(data.num_labels));
  if (trained.classifier) {
    if (trained.classifier->d_u != data.d_u)
      throw DataError("classifier expects d_u=" +
                      std::to_string(trained.classifier->d_u) +
                      ", dataset has d_u=" + std::to_string(data.d_u));
    if (m.d_u != data.num_labels)
      throw DataError("bifurcated factor model must consume " +
                      std::to_string(data.num_labels) +
                      " probabilities, has d_u=" + std::to_string(m.d_u));
  } else if (m.d_u != data.d_u) {
    throw DataError("model expects d_u=" + std::to_string(m.d_u) +
                    ", dataset has d_u=" + std::to_string(data.d_u));
  }
  if (data.d_i > 0 && m.d_i != data.d_i)
    throw DataError("model expects d_i=" + std::to_string(m.d_i) +
                    ", dataset has d_i=" + std::to_string(data.d_i));
}

}  // namespace ssvm
