//
// Copyright 2026 The advtext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef ADVTEXT_MODEL_HPP_
#define ADVTEXT_MODEL_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "advtext/errors.hpp"
#include "advtext/rng.hpp"
#include "advtext/text_core.hpp"

namespace advtext {

using Probabilities = std::vector<double>;

inline std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// cos(a, b) = a.b / sqrt(|a|^2 |b|^2). Written this way so that identical
// vectors score exactly 1.0 (sqrt(x*x) == x in IEEE arithmetic).
inline double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return dot / std::sqrt(aa * bb);
}

// ---------------------------------------------------------------------------
// Classifier contract

// What attacks and defenses see of a model. predict() is the only call that
// counts as a query; the remaining calls are white-box reads.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::size_t num_classes() const = 0;
  virtual Probabilities predict(const Document& doc) const = 0;
  // One non-negative score per token.
  virtual std::vector<double> attention_importance(const Document& doc) const = 0;
  virtual std::vector<std::string> mask_candidates(const Document& doc, std::size_t position,
                                                   std::size_t k) const = 0;
  virtual std::vector<double> doc_embedding(const Document& doc) const = 0;

  // Two documents with equal keys get identical predictions. Models that
  // cannot tell return nullopt and every query reaches predict().
  virtual std::optional<std::string> input_key(const Document& doc) const {
    (void)doc;
    return std::nullopt;
  }
};

// Forwards everything to another classifier and counts predict() calls.
class CountingClassifier : public Classifier {
 public:
  explicit CountingClassifier(const Classifier& inner) : inner_(inner) {}

  std::size_t num_classes() const override { return inner_.num_classes(); }
  Probabilities predict(const Document& doc) const override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_.predict(doc);
  }
  std::vector<double> attention_importance(const Document& doc) const override {
    return inner_.attention_importance(doc);
  }
  std::vector<std::string> mask_candidates(const Document& doc, std::size_t position,
                                           std::size_t k) const override {
    return inner_.mask_candidates(doc, position, k);
  }
  std::vector<double> doc_embedding(const Document& doc) const override {
    return inner_.doc_embedding(doc);
  }
  std::optional<std::string> input_key(const Document& doc) const override {
    return inner_.input_key(doc);
  }

  std::size_t calls() const { return calls_.load(std::memory_order_relaxed); }
  void reset() { calls_.store(0, std::memory_order_relaxed); }

 private:
  const Classifier& inner_;
  mutable std::atomic<std::size_t> calls_{0};
};

// ---------------------------------------------------------------------------
// POS lexicon

enum class PosTag { kNoun, kVerb, kAdj, kAdv, kPron, kDet, kOther };

inline const char* pos_tag_name(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun: return "NOUN";
    case PosTag::kVerb: return "VERB";
    case PosTag::kAdj: return "ADJ";
    case PosTag::kAdv: return "ADV";
    case PosTag::kPron: return "PRON";
    case PosTag::kDet: return "DET";
    case PosTag::kOther: return "OTHER";
  }
  return "OTHER";
}

inline std::optional<PosTag> parse_pos_tag(std::string_view name) {
  for (PosTag t : {PosTag::kNoun, PosTag::kVerb, PosTag::kAdj, PosTag::kAdv, PosTag::kPron,
                   PosTag::kDet, PosTag::kOther}) {
    if (name == pos_tag_name(t)) return t;
  }
  return std::nullopt;
}

struct PosLexicon {
  std::map<std::string, PosTag, std::less<>> entries;
  // Checked in order; the first matching suffix wins.
  std::vector<std::pair<std::string, PosTag>> suffix_rules;

  bool operator==(const PosLexicon&) const = default;
};

inline PosTag pos_tag(const PosLexicon& lexicon, std::string_view token_text) {
  if (auto it = lexicon.entries.find(token_text); it != lexicon.entries.end()) return it->second;
  for (const auto& [suffix, tag] : lexicon.suffix_rules) {
    if (token_text.size() > suffix.size() && token_text.ends_with(suffix)) return tag;
  }
  return PosTag::kOther;
}

// ---------------------------------------------------------------------------
// Dense storage

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  bool operator==(const Matrix&) const = default;
};

// out = a * b, where a is n x d and b is d x m.
inline void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
  out = Matrix(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* o = out.data.data() + i * out.cols;
    for (std::size_t r = 0; r < a.cols; ++r) {
      const double av = a(i, r);
      const double* br = b.data.data() + r * b.cols;
      for (std::size_t c = 0; c < b.cols; ++c) o[c] += av * br[c];
    }
  }
}

// ---------------------------------------------------------------------------
// Vocabulary

class Vocabulary {
 public:
  static constexpr std::size_t kUnk = 0;
  static constexpr std::size_t kMask = 1;
  static constexpr std::string_view kUnkText = "[UNK]";
  static constexpr std::string_view kMaskText = "[MASK]";

  Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

  // `words` may contain duplicates and specials; both are dropped. Words keep
  // their sorted order after the two special tokens.
  explicit Vocabulary(std::vector<std::string> words) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    tokens_ = {std::string(kUnkText), std::string(kMaskText)};
    for (auto& w : words) {
      if (w.empty() || w == kUnkText || w == kMaskText) continue;
      tokens_.push_back(std::move(w));
    }
    for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
  }

  static Vocabulary from_documents(std::span<const Document> docs) {
    std::vector<std::string> words;
    for (const auto& d : docs) {
      for (const auto& t : d.tokens) words.push_back(t.text);
    }
    return Vocabulary(std::move(words));
  }

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(std::size_t id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::size_t id(std::string_view text) const {
    auto it = index_.find(std::string(text));
    return it == index_.end() ? kUnk : it->second;
  }
  bool contains(std::string_view text) const { return index_.count(std::string(text)) != 0; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Toy self-attention classifier

struct ToyModelConfig {
  std::size_t embed_dim = 32;
  std::size_t num_classes = 2;
  std::uint64_t seed = 0;
  double learning_rate = 0.05;
  std::size_t epochs = 30;
  // Mini-batch size; 0 means full batch. Batches follow dataset order.
  std::size_t batch_size = 8;

  bool operator==(const ToyModelConfig&) const = default;
};

inline void validate(const ToyModelConfig& c) {
  if (c.embed_dim < 4) throw Error(ErrorKind::kConfiguration, "embed_dim must be >= 4");
  if (c.num_classes < 2) throw Error(ErrorKind::kConfiguration, "num_classes must be >= 2");
  if (!(c.learning_rate > 0.0)) throw Error(ErrorKind::kConfiguration, "learning_rate must be > 0");
  if (c.epochs == 0) throw Error(ErrorKind::kConfiguration, "epochs must be >= 1");
}

struct ToyParameters {
  Matrix embeddings;  // |vocab| x d
  Matrix query;       // d x d
  Matrix key;         // d x d
  Matrix value;       // d x d
  Matrix output;      // classes x d
  std::vector<double> bias;

  bool operator==(const ToyParameters&) const = default;

  static ToyParameters zeros_like(const ToyParameters& p) {
    ToyParameters z;
    z.embeddings = Matrix(p.embeddings.rows, p.embeddings.cols);
    z.query = Matrix(p.query.rows, p.query.cols);
    z.key = Matrix(p.key.rows, p.key.cols);
    z.value = Matrix(p.value.rows, p.value.cols);
    z.output = Matrix(p.output.rows, p.output.cols);
    z.bias.assign(p.bias.size(), 0.0);
    return z;
  }

  // Flat view in a fixed order: embeddings, query, key, value, output, bias.
  std::vector<std::vector<double>*> blocks() {
    return {&embeddings.data, &query.data, &key.data, &value.data, &output.data, &bias};
  }

  std::size_t size() const {
    return embeddings.data.size() + query.data.size() + key.data.size() + value.data.size() +
           output.data.size() + bias.size();
  }

  double& at(std::size_t flat_index) {
    for (auto* b : blocks()) {
      if (flat_index < b->size()) return (*b)[flat_index];
      flat_index -= b->size();
    }
    throw Error(ErrorKind::kPosition, "parameter index out of range");
  }

  // this += alpha * other
  void add_scaled(ToyParameters& other, double alpha) {
    auto mine = blocks();
    auto theirs = other.blocks();
    for (std::size_t b = 0; b < mine.size(); ++b) {
      auto& x = *mine[b];
      const auto& g = *theirs[b];
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += alpha * g[i];
    }
  }

  bool all_finite() {
    for (auto* b : blocks()) {
      for (double v : *b) {
        if (!std::isfinite(v)) return false;
      }
    }
    return true;
  }
};

// Activations kept for the backward pass.
struct ForwardPass {
  std::vector<std::size_t> ids;
  Matrix x;       // n x d input embeddings
  Matrix q, k, v; // n x d
  Matrix attn;    // n x n, row-stochastic
  Matrix hidden;  // n x d, attn * v
  std::vector<double> pooled;
  std::vector<double> logits;
  std::vector<double> probs;
};

inline std::vector<double> softmax(std::span<const double> z) {
  std::vector<double> p(z.begin(), z.end());
  const double m = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (auto& x : p) {
    x = std::exp(x - m);
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

// A single-head, single-layer self-attention encoder, mean pooling and a
// linear softmax head. Mean pooling of attn * v equals the value vectors
// weighted by the attention each position receives, so the importance
// scores are exactly the pooling weights (times n). Out-of-vocabulary
// tokens are read as [UNK].
class ToyModel : public Classifier {
 public:
  ToyModel(Vocabulary vocab, ToyModelConfig config)
      : vocab_(std::move(vocab)), config_(config) {
    validate(config_);
    initialize();
  }

  ToyModel(Vocabulary vocab, ToyModelConfig config, ToyParameters params)
      : vocab_(std::move(vocab)), config_(config), params_(std::move(params)) {
    validate(config_);
    const std::size_t d = config_.embed_dim;
    if (params_.embeddings.rows != embedding_rows() || params_.embeddings.cols != d ||
        params_.query.rows != d || params_.query.cols != d || params_.key.rows != d ||
        params_.key.cols != d || params_.value.rows != d || params_.value.cols != d ||
        params_.output.rows != config_.num_classes || params_.output.cols != d ||
        params_.bias.size() != config_.num_classes) {
      throw Error(ErrorKind::kConfiguration, "parameter shapes do not match config/vocab");
    }
  }

  const Vocabulary& vocab() const { return vocab_; }
  const ToyModelConfig& config() const { return config_; }
  const ToyParameters& params() const { return params_; }
  ToyParameters& mutable_params() { return params_; }

  std::size_t num_classes() const override { return config_.num_classes; }

  std::size_t embedding_rows() const { return vocab_.size(); }

  // Embedding row of a token; unknown tokens share the [UNK] row.
  std::size_t token_row(std::string_view text) const { return vocab_.id(text); }

  std::vector<std::size_t> encode(const Document& doc) const {
    std::vector<std::size_t> ids;
    ids.reserve(doc.tokens.size());
    for (const auto& t : doc.tokens) ids.push_back(token_row(t.text));
    return ids;
  }

  Probabilities predict(const Document& doc) const override {
    return forward(checked_ids(doc)).probs;
  }

  std::optional<std::string> input_key(const Document& doc) const override {
    std::string key;
    for (std::size_t id : encode(doc)) {
      key += std::to_string(id);
      key += ',';
    }
    return key;
  }

  // Column sums of the attention matrix: attention received by each position.
  std::vector<double> attention_importance(const Document& doc) const override {
    const ForwardPass f = forward(checked_ids(doc));
    const std::size_t n = f.ids.size();
    std::vector<double> scores(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) scores[j] += f.attn(i, j);
    }
    return scores;
  }

  std::vector<std::string> mask_candidates(const Document& doc, std::size_t position,
                                           std::size_t k) const override {
    const auto ids = checked_ids(doc);
    if (position >= ids.size()) {
      throw Error(ErrorKind::kPosition, "mask position " + std::to_string(position) +
                                            " >= token count " + std::to_string(ids.size()));
    }
    if (k == 0) throw Error(ErrorKind::kConfiguration, "candidate count k must be >= 1");
    const ForwardPass f = forward(ids, position);
    const auto context = f.hidden.row(position);
    const std::string& original = doc.tokens[position].text;
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(vocab_.size());
    for (std::size_t id = 0; id < vocab_.size(); ++id) {
      if (id == Vocabulary::kUnk || id == Vocabulary::kMask || vocab_.token(id) == original) {
        continue;
      }
      scored.emplace_back(cosine(context, params_.embeddings.row(id)), id);
    }
    const std::size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                      scored.end(), [](const auto& a, const auto& b) {
                        return a.first != b.first ? a.first > b.first : a.second < b.second;
                      });
    std::vector<std::string> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(vocab_.token(scored[i].second));
    return out;
  }

  // Mean of the contextual (post-attention) token vectors.
  std::vector<double> doc_embedding(const Document& doc) const override {
    return forward(checked_ids(doc)).pooled;
  }

  ForwardPass forward(std::span<const std::size_t> ids,
                      std::optional<std::size_t> masked_position = std::nullopt) const {
    const std::size_t n = ids.size();
    const std::size_t d = config_.embed_dim;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    ForwardPass f;
    f.ids.assign(ids.begin(), ids.end());
    f.x = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t id =
          (masked_position && *masked_position == i) ? Vocabulary::kMask : ids[i];
      const auto src = params_.embeddings.row(id);
      std::copy(src.begin(), src.end(), f.x.row(i).begin());
    }
    matmul(f.x, params_.query, f.q);
    matmul(f.x, params_.key, f.k);
    matmul(f.x, params_.value, f.v);

    f.attn = Matrix(n, n);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) s += f.q(i, c) * f.k(j, c);
        scores[j] = s * scale;
      }
      const auto row = softmax(scores);
      std::copy(row.begin(), row.end(), f.attn.row(i).begin());
    }

    f.hidden = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double a = f.attn(i, j);
        for (std::size_t c = 0; c < d; ++c) f.hidden(i, c) += a * f.v(j, c);
      }
    }

    f.pooled.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < d; ++c) f.pooled[c] += f.hidden(i, c);
    }
    for (auto& p : f.pooled) p /= static_cast<double>(n);

    f.logits = params_.bias;
    for (std::size_t c = 0; c < config_.num_classes; ++c) {
      for (std::size_t r = 0; r < d; ++r) f.logits[c] += params_.output(c, r) * f.pooled[r];
    }
    f.probs = softmax(f.logits);
    return f;
  }

  // Accumulates weight * d(-log p[label]) / d(params) into grad. Returns the
  // unweighted loss.
  double backward(const ForwardPass& f, std::size_t label, double weight,
                  ToyParameters& grad) const {
    const std::size_t n = f.ids.size();
    const std::size_t d = config_.embed_dim;
    const std::size_t classes = config_.num_classes;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));

    std::vector<double> dz(f.probs);
    dz[label] -= 1.0;
    std::vector<double> dpooled(d, 0.0);
    for (std::size_t c = 0; c < classes; ++c) {
      grad.bias[c] += weight * dz[c];
      for (std::size_t r = 0; r < d; ++r) {
        grad.output(c, r) += weight * dz[c] * f.pooled[r];
        dpooled[r] += params_.output(c, r) * dz[c];
      }
    }

    // d hidden = d pooled / n for every row.
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> dh(d);
    for (std::size_t r = 0; r < d; ++r) dh[r] = dpooled[r] * inv_n;

    Matrix dx(n, d);

    // ctx = attn * v with d ctx(i,:) = dh for every i.
    Matrix dv(n, d);
    Matrix dscore(n, n);
    std::vector<double> dattn_row(n);
    for (std::size_t i = 0; i < n; ++i) {
      double weighted = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) s += dh[c] * f.v(j, c);
        dattn_row[j] = s;
        weighted += f.attn(i, j) * s;
        for (std::size_t c = 0; c < d; ++c) dv(j, c) += f.attn(i, j) * dh[c];
      }
      for (std::size_t j = 0; j < n; ++j) {
        dscore(i, j) = f.attn(i, j) * (dattn_row[j] - weighted) * scale;
      }
    }

    Matrix dq(n, d);
    Matrix dk(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double g = dscore(i, j);
        if (g == 0.0) continue;
        for (std::size_t c = 0; c < d; ++c) {
          dq(i, c) += g * f.k(j, c);
          dk(j, c) += g * f.q(i, c);
        }
      }
    }

    auto project_back = [&](const Matrix& dproj, const Matrix& w, Matrix& gw) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < d; ++r) {
          const double xv = f.x(i, r);
          double acc = 0.0;
          for (std::size_t c = 0; c < d; ++c) {
            gw(r, c) += weight * xv * dproj(i, c);
            acc += dproj(i, c) * w(r, c);
          }
          dx(i, r) += acc;
        }
      }
    };
    project_back(dq, params_.query, grad.query);
    project_back(dk, params_.key, grad.key);
    project_back(dv, params_.value, grad.value);

    for (std::size_t i = 0; i < n; ++i) {
      auto g = grad.embeddings.row(f.ids[i]);
      for (std::size_t c = 0; c < d; ++c) g[c] += weight * dx(i, c);
    }
    return -std::log(std::max(f.probs[label], 1e-300));
  }

  // Mean cross-entropy over the examples; adds the mean gradient to `grad`
  // when given.
  double loss(std::span<const std::vector<std::size_t>> ids, std::span<const std::size_t> labels,
              ToyParameters* grad = nullptr) const {
    double total = 0.0;
    const double w = 1.0 / static_cast<double>(ids.size());
    for (std::size_t e = 0; e < ids.size(); ++e) {
      const ForwardPass f = forward(ids[e]);
      if (grad) {
        total += backward(f, labels[e], w, *grad);
      } else {
        total += -std::log(std::max(f.probs[labels[e]], 1e-300));
      }
    }
    return total * w;
  }

 private:
  std::vector<std::size_t> checked_ids(const Document& doc) const {
    if (doc.tokens.empty()) throw Error(ErrorKind::kEmptyInput, "document has no tokens");
    return encode(doc);
  }

  void initialize() {
    const std::size_t d = config_.embed_dim;
    Rng rng(config_.seed);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    auto fill = [&](Matrix& m, double stddev) {
      for (auto& v : m.data) v = rng.normal(0.0, stddev);
    };
    params_.embeddings = Matrix(embedding_rows(), d);
    params_.query = Matrix(d, d);
    params_.key = Matrix(d, d);
    params_.value = Matrix(d, d);
    params_.output = Matrix(config_.num_classes, d);
    fill(params_.embeddings, s);
    // Sharper initial attention than 1/sqrt(d) gives more peaked importances.
    fill(params_.query, 0.5);
    fill(params_.key, 0.5);
    // Value projection starts close to the identity.
    fill(params_.value, 0.1 * s);
    for (std::size_t i = 0; i < d; ++i) params_.value(i, i) += 1.0;
    fill(params_.output, 0.1 * s);
    params_.bias.assign(config_.num_classes, 0.0);
  }

  Vocabulary vocab_;
  ToyModelConfig config_;
  ToyParameters params_;
};

// ---------------------------------------------------------------------------
// Training

struct TrainingHistory {
  // Mean training loss over the full dataset, measured after each epoch.
  std::vector<double> epoch_loss;
};

inline void check_training_set(std::span<const Document> dataset, std::size_t num_classes) {
  if (dataset.empty()) throw Error(ErrorKind::kConfiguration, "training set is empty");
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& d = dataset[i];
    if (!d.label) {
      throw Error(ErrorKind::kConfiguration, "training document " + std::to_string(i) + " has no label");
    }
    if (*d.label >= num_classes) {
      throw Error(ErrorKind::kConfiguration, "training label " + std::to_string(*d.label) +
                                                 " out of range for " +
                                                 std::to_string(num_classes) + " classes");
    }
    if (d.tokens.empty()) {
      throw Error(ErrorKind::kEmptyInput, "training document " + std::to_string(i) + " is empty");
    }
  }
}

// Plain mini-batch gradient descent on mean cross-entropy, batches taken in
// dataset order. Continues from the model's current parameters.
inline TrainingHistory fit(ToyModel& model, std::span<const Document> dataset, double learning_rate,
                           std::size_t epochs, std::size_t batch_size) {
  check_training_set(dataset, model.num_classes());
  std::vector<std::vector<std::size_t>> ids;
  std::vector<std::size_t> labels;
  for (const auto& d : dataset) {
    ids.push_back(model.encode(d));
    labels.push_back(*d.label);
  }
  const std::size_t batch = batch_size == 0 ? ids.size() : std::min(batch_size, ids.size());
  TrainingHistory history;
  ToyParameters grad = ToyParameters::zeros_like(model.params());
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t begin = 0; begin < ids.size(); begin += batch) {
      const std::size_t end = std::min(begin + batch, ids.size());
      grad = ToyParameters::zeros_like(model.params());
      model.loss(std::span(ids).subspan(begin, end - begin),
                 std::span(labels).subspan(begin, end - begin), &grad);
      model.mutable_params().add_scaled(grad, -learning_rate);
    }
    history.epoch_loss.push_back(model.loss(ids, labels));
    if (!model.mutable_params().all_finite()) {
      throw Error(ErrorKind::kConfiguration, "training diverged (non-finite parameters)");
    }
  }
  return history;
}

inline ToyModel train_toy_classifier(std::span<const Document> dataset, const ToyModelConfig& config,
                                     TrainingHistory* history = nullptr) {
  validate(config);
  check_training_set(dataset, config.num_classes);
  ToyModel model(Vocabulary::from_documents(dataset), config);
  auto h = fit(model, dataset, config.learning_rate, config.epochs, config.batch_size);
  if (history) *history = std::move(h);
  return model;
}

inline double accuracy(const Classifier& model, std::span<const Document> docs) {
  if (docs.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& d : docs) {
    if (d.label && argmax(model.predict(d)) == *d.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(docs.size());
}

}  // namespace advtext

#endif  // ADVTEXT_MODEL_HPP_
