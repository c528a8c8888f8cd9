// Copyright 2026 The Sommelier Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sommelier/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sommelier/error.hpp"
#include "sommelier/io.hpp"

namespace sommelier {
namespace {

// Per-entry constants reused by every pass.
struct PairTerm {
  std::uint32_t i;
  std::uint32_t j;
  double weight;      // f(X_ij)
  double log_count;   // log X_ij
};

std::vector<PairTerm> prepare_pairs(const CooccurrenceMatrix& matrix,
                                    const WeightingConfig& config) {
  std::vector<PairTerm> pairs;
  pairs.reserve(matrix.pair_count());
  for (const auto& e : matrix.entries()) {
    pairs.push_back({e.i, e.j, cooccurrence_weight(e.weight, config), std::log(e.weight)});
  }
  return pairs;
}

void require_same_vocabulary(const EmbeddingModel& model,
                             const CooccurrenceMatrix& matrix) {
  if (model.terms != matrix.terms()) {
    throw Error(ErrorKind::kStructure,
                "embedding model and co-occurrence matrix vocabularies differ");
  }
}

double residual(const EmbeddingModel& m, std::uint32_t row, std::uint32_t col,
                double log_count) {
  const double* w = m.word.data() + static_cast<std::size_t>(row) * m.dim;
  const double* c = m.context.data() + static_cast<std::size_t>(col) * m.dim;
  double dot = 0.0;
  for (std::size_t d = 0; d < m.dim; ++d) dot += w[d] * c[d];
  return dot + m.word_bias[row] + m.context_bias[col] - log_count;
}

template <bool kShared>
double load(double& x) {
  if constexpr (kShared) {
    return std::atomic_ref<double>(x).load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

template <bool kShared>
void store(double& x, double value) {
  if constexpr (kShared) {
    std::atomic_ref<double>(x).store(value, std::memory_order_relaxed);
  } else {
    x = value;
  }
}

template <bool kShared>
void adagrad_step(double& param, double& grad_sq, double grad, double rate) {
  const double acc = load<kShared>(grad_sq) + grad * grad;
  store<kShared>(grad_sq, acc);
  store<kShared>(param, load<kShared>(param) - rate * grad / std::sqrt(acc));
}

// Gradient step on the (row, col) orientation of one pair.
template <bool kShared>
void update_orientation(EmbeddingModel& m, std::uint32_t row, std::uint32_t col,
                        const PairTerm& pair, double rate) {
  const std::size_t dim = m.dim;
  double* w = m.word.data() + static_cast<std::size_t>(row) * dim;
  double* c = m.context.data() + static_cast<std::size_t>(col) * dim;
  double* w_sq = m.word_grad_sq.data() + static_cast<std::size_t>(row) * dim;
  double* c_sq = m.context_grad_sq.data() + static_cast<std::size_t>(col) * dim;

  double diff = load<kShared>(m.word_bias[row]) + load<kShared>(m.context_bias[col]) -
                pair.log_count;
  for (std::size_t d = 0; d < dim; ++d) diff += load<kShared>(w[d]) * load<kShared>(c[d]);
  if (!std::isfinite(diff)) {
    throw Error(ErrorKind::kTraining, "non-finite residual for pair (" +
                                          m.terms[row] + ", " + m.terms[col] + ")");
  }
  const double scale = 2.0 * pair.weight * diff;
  for (std::size_t d = 0; d < dim; ++d) {
    const double wd = load<kShared>(w[d]);
    const double cd = load<kShared>(c[d]);
    adagrad_step<kShared>(w[d], w_sq[d], scale * cd, rate);
    adagrad_step<kShared>(c[d], c_sq[d], scale * wd, rate);
  }
  adagrad_step<kShared>(m.word_bias[row], m.word_bias_grad_sq[row], scale, rate);
  adagrad_step<kShared>(m.context_bias[col], m.context_bias_grad_sq[col], scale, rate);
}

template <bool kShared>
void run_slice(EmbeddingModel& m, const std::vector<PairTerm>& pairs,
               std::span<const std::uint32_t> order, double rate) {
  for (std::uint32_t slot : order) {
    const PairTerm& pair = pairs[slot >> 1];
    if (slot & 1u) {
      update_orientation<kShared>(m, pair.j, pair.i, pair, rate);
    } else {
      update_orientation<kShared>(m, pair.i, pair.j, pair, rate);
    }
  }
}

double loss_of(const EmbeddingModel& model, const std::vector<PairTerm>& pairs) {
  double total = 0.0;
  for (const auto& p : pairs) {
    const double forward = residual(model, p.i, p.j, p.log_count);
    const double backward = residual(model, p.j, p.i, p.log_count);
    total += p.weight * (forward * forward + backward * backward);
  }
  return total;
}

// Uniform double in [0, 1) from the top 53 bits, independent of the
// standard library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void WeightingConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::kConfig, "alpha must lie in (0, 1]");
  }
  if (!(x_max > 0.0) || !std::isfinite(x_max)) {
    throw Error(ErrorKind::kConfig, "x_max must be positive");
  }
}

double cooccurrence_weight(double x, const WeightingConfig& config) {
  if (!(x > 0.0)) {
    throw Error(ErrorKind::kDomain, "co-occurrence weight must be positive");
  }
  return x <= config.x_max ? std::pow(x / config.x_max, config.alpha) : 1.0;
}

EmbeddingModel init_model(std::vector<std::string> terms, std::size_t dim,
                          std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorKind::kConfig, "embedding dimension must be >= 1");
  if (terms.empty()) throw Error(ErrorKind::kConfig, "cannot embed an empty vocabulary");
  EmbeddingModel m;
  m.dim = dim;
  m.seed = seed;
  m.terms = std::move(terms);
  const std::size_t n = m.terms.size();
  std::mt19937_64 rng(seed);
  const double half_width = 0.5 / static_cast<double>(dim);
  auto draw = [&] { return (2.0 * unit_uniform(rng) - 1.0) * half_width; };
  m.word.resize(n * dim);
  m.context.resize(n * dim);
  std::generate(m.word.begin(), m.word.end(), draw);
  std::generate(m.context.begin(), m.context.end(), draw);
  m.word_bias.assign(n, 0.0);
  m.context_bias.assign(n, 0.0);
  m.word_grad_sq.assign(n * dim, kAccumulatorEpsilon);
  m.context_grad_sq.assign(n * dim, kAccumulatorEpsilon);
  m.word_bias_grad_sq.assign(n, kAccumulatorEpsilon);
  m.context_bias_grad_sq.assign(n, kAccumulatorEpsilon);
  return m;
}

double loss(const EmbeddingModel& model, const CooccurrenceMatrix& matrix,
            const WeightingConfig& config) {
  require_same_vocabulary(model, matrix);
  return loss_of(model, prepare_pairs(matrix, config));
}

EmbeddingGradient loss_gradient(const EmbeddingModel& model,
                                const CooccurrenceMatrix& matrix,
                                const WeightingConfig& config) {
  require_same_vocabulary(model, matrix);
  const std::size_t dim = model.dim;
  EmbeddingGradient g;
  g.word.assign(model.word.size(), 0.0);
  g.context.assign(model.context.size(), 0.0);
  g.word_bias.assign(model.word_bias.size(), 0.0);
  g.context_bias.assign(model.context_bias.size(), 0.0);
  auto accumulate = [&](std::uint32_t row, std::uint32_t col, const PairTerm& p) {
    const double scale = 2.0 * p.weight * residual(model, row, col, p.log_count);
    for (std::size_t d = 0; d < dim; ++d) {
      g.word[row * dim + d] += scale * model.context[col * dim + d];
      g.context[col * dim + d] += scale * model.word[row * dim + d];
    }
    g.word_bias[row] += scale;
    g.context_bias[col] += scale;
  };
  for (const auto& p : prepare_pairs(matrix, config)) {
    accumulate(p.i, p.j, p);
    accumulate(p.j, p.i, p);
  }
  return g;
}

TrainingReport train(EmbeddingModel& model, const CooccurrenceMatrix& matrix,
                     const WeightingConfig& config, const TrainOptions& options) {
  config.validate();
  if (options.iterations < 1) {
    throw Error(ErrorKind::kConfig, "iterations must be >= 1");
  }
  if (!(options.learning_rate > 0.0)) {
    throw Error(ErrorKind::kConfig, "learning rate must be positive");
  }
  require_same_vocabulary(model, matrix);

  const auto start = std::chrono::steady_clock::now();
  const std::vector<PairTerm> pairs = prepare_pairs(matrix, config);
  std::vector<std::uint32_t> order(pairs.size() * 2);

  TrainingReport report;
  report.initial_loss = loss_of(model, pairs);
  const std::size_t threads = std::max<std::size_t>(1, options.threads);
  for (std::size_t it = 0; it < options.iterations; ++it) {
    std::seed_seq seq{static_cast<std::uint32_t>(model.seed),
                      static_cast<std::uint32_t>(model.seed >> 32),
                      static_cast<std::uint32_t>(model.iterations_done)};
    std::mt19937_64 rng(seq);
    // Restart from the identity so the visiting order depends only on the
    // seed and the iteration number, which keeps resumed training exact.
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);

    const std::span<const std::uint32_t> all(order);
    if (threads == 1) {
      run_slice<false>(model, pairs, all, options.learning_rate);
    } else {
      const std::size_t chunk = (all.size() + threads - 1) / threads;
      std::vector<std::exception_ptr> failures(threads);
      {
        std::vector<std::jthread> workers;
        for (std::size_t t = 0; t < threads; ++t) {
          const std::size_t begin = std::min(all.size(), t * chunk);
          const std::size_t end = std::min(all.size(), begin + chunk);
          workers.emplace_back([&, t, begin, end] {
            try {
              run_slice<true>(model, pairs, all.subspan(begin, end - begin),
                              options.learning_rate);
            } catch (...) {
              failures[t] = std::current_exception();
            }
          });
        }
      }
      for (auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
      }
    }
    ++model.iterations_done;
    const double current = loss_of(model, pairs);
    if (!std::isfinite(current)) {
      throw Error(ErrorKind::kTraining,
                  "loss became non-finite in iteration " + std::to_string(it + 1));
    }
    report.losses.push_back(current);
  }
  report.iterations = options.iterations;
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

VectorStore::VectorStore(std::vector<std::string> terms, std::size_t dim,
                         std::vector<double> values)
    : terms_(std::move(terms)), dim_(dim), values_(std::move(values)) {
  if (values_.size() != terms_.size() * dim_) {
    throw Error(ErrorKind::kStructure, "vector table size does not match terms x dim");
  }
  for (std::size_t k = 1; k < terms_.size(); ++k) {
    if (!(terms_[k - 1] < terms_[k])) {
      throw Error(ErrorKind::kStructure, "vector terms must be strictly ascending");
    }
  }
}

std::optional<std::size_t> VectorStore::index_of(std::string_view term) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
  if (it == terms_.end() || *it != term) return std::nullopt;
  return static_cast<std::size_t>(it - terms_.begin());
}

std::optional<std::span<const double>> VectorStore::find(std::string_view term) const {
  auto index = index_of(term);
  if (!index) return std::nullopt;
  return vector(*index);
}

void VectorStore::scale_row(std::size_t index, double factor) {
  for (std::size_t d = 0; d < dim_; ++d) values_[index * dim_ + d] *= factor;
}

VectorStore export_vectors(const EmbeddingModel& model) {
  std::vector<double> values(model.word.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = model.word[k] + model.context[k];
  }
  return VectorStore(model.terms, model.dim, std::move(values));
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::kDomain, "cosine of vectors with different lengths");
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t d = 0; d < u.size(); ++d) {
    dot += u[d] * v[d];
    uu += u[d] * u[d];
    vv += v[d] * v[d];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw Error(ErrorKind::kDomain, "cosine of a zero vector");
  }
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

namespace {

void write_rows(std::ostream& out, const std::vector<std::string>& terms,
                const std::vector<double>& values, std::size_t width) {
  for (std::size_t r = 0; r < terms.size(); ++r) {
    out << terms[r] << '\t';
    for (std::size_t d = 0; d < width; ++d) {
      if (d) out << ' ';
      out << io::format_double(values[r * width + d]);
    }
    out << '\n';
  }
}

struct Rows {
  std::vector<std::string> terms;
  std::vector<double> values;
  std::size_t width = 0;
};

Rows read_rows(std::istream& in, const std::string& what) {
  Rows rows;
  std::string line;
  std::size_t line_number = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::string where = what + " line " + std::to_string(line_number);
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorKind::kParse, where + ": expected term<TAB>values");
    }
    rows.terms.emplace_back(line.substr(0, tab));
    const auto fields = io::split(std::string_view(line).substr(tab + 1), ' ');
    if (first) {
      rows.width = fields.size();
      first = false;
    } else if (fields.size() != rows.width) {
      throw Error(ErrorKind::kParse, where + ": inconsistent vector length");
    }
    for (auto field : fields) rows.values.push_back(io::parse_double(field));
  }
  return rows;
}

Rows read_rows_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_rows(in, path.filename().string());
}

void save_rows(const std::filesystem::path& path, const std::vector<std::string>& terms,
               const std::vector<double>& values, std::size_t width) {
  std::ostringstream out;
  write_rows(out, terms, values, width);
  io::write_file_atomic(path, out.str());
}

}  // namespace

void write_vectors_tsv(std::ostream& out, const VectorStore& vectors) {
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    out << vectors.terms()[r] << '\t';
    const auto row = vectors.vector(r);
    for (std::size_t d = 0; d < row.size(); ++d) {
      if (d) out << ' ';
      out << io::format_double(row[d]);
    }
    out << '\n';
  }
}

VectorStore read_vectors_tsv(std::istream& in) {
  Rows rows = read_rows(in, "vectors");
  if (rows.terms.empty()) throw Error(ErrorKind::kParse, "vectors file is empty");
  return VectorStore(std::move(rows.terms), rows.width, std::move(rows.values));
}

VectorStore read_vectors_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_vectors_tsv(in);
}

void save_checkpoint(const std::filesystem::path& dir, const EmbeddingModel& model,
                     const WeightingConfig& config) {
  std::filesystem::create_directories(dir);
  nlohmann::json header = {
      {"e", model.dim},
      {"alpha", config.alpha},
      {"x_max", config.x_max},
      {"seed", model.seed},
      {"iterations_done", model.iterations_done},
  };
  const auto& t = model.terms;
  save_rows(dir / "w.tsv", t, model.word, model.dim);
  save_rows(dir / "w_context.tsv", t, model.context, model.dim);
  save_rows(dir / "b.tsv", t, model.word_bias, 1);
  save_rows(dir / "b_context.tsv", t, model.context_bias, 1);
  save_rows(dir / "adagrad_w.tsv", t, model.word_grad_sq, model.dim);
  save_rows(dir / "adagrad_w_context.tsv", t, model.context_grad_sq, model.dim);
  save_rows(dir / "adagrad_b.tsv", t, model.word_bias_grad_sq, 1);
  save_rows(dir / "adagrad_b_context.tsv", t, model.context_bias_grad_sq, 1);
  io::write_file_atomic(dir / "header.json", header.dump(2) + "\n");
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  const auto header = nlohmann::json::parse(io::read_file(dir / "header.json"),
                                            nullptr, false);
  if (header.is_discarded() || !header.is_object()) {
    throw Error(ErrorKind::kParse, "checkpoint header.json is not a JSON object");
  }
  Checkpoint cp;
  try {
    cp.model.dim = header.at("e").get<std::size_t>();
    cp.model.seed = header.at("seed").get<std::uint64_t>();
    cp.model.iterations_done = header.at("iterations_done").get<std::size_t>();
    cp.config.alpha = header.at("alpha").get<double>();
    cp.config.x_max = header.at("x_max").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("checkpoint header: ") + e.what());
  }
  cp.config.validate();

  auto load_into = [&](const char* name, std::vector<double>& target,
                       std::size_t width) {
    Rows rows = read_rows_file(dir / name);
    if (cp.model.terms.empty()) cp.model.terms = rows.terms;
    if (rows.terms != cp.model.terms || rows.width != width) {
      throw Error(ErrorKind::kStructure,
                  std::string("checkpoint file ") + name + " does not match the header");
    }
    target = std::move(rows.values);
  };
  load_into("w.tsv", cp.model.word, cp.model.dim);
  load_into("w_context.tsv", cp.model.context, cp.model.dim);
  load_into("b.tsv", cp.model.word_bias, 1);
  load_into("b_context.tsv", cp.model.context_bias, 1);
  load_into("adagrad_w.tsv", cp.model.word_grad_sq, cp.model.dim);
  load_into("adagrad_w_context.tsv", cp.model.context_grad_sq, cp.model.dim);
  load_into("adagrad_b.tsv", cp.model.word_bias_grad_sq, 1);
  load_into("adagrad_b_context.tsv", cp.model.context_bias_grad_sq, 1);
  return cp;
}

}  // namespace sommelier
