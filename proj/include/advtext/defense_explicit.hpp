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

// Explicit character-level defense: a character-similarity token embedder,
// the vocabulary embedding index, and nearest-vocabulary restoration of
// tokens whose best cosine falls in [accept_low, accept_high).

#ifndef ADVTEXT_DEFENSE_EXPLICIT_HPP_
#define ADVTEXT_DEFENSE_EXPLICIT_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "advtext/errors.hpp"
#include "advtext/model.hpp"
#include "advtext/rng.hpp"
#include "advtext/text_core.hpp"

namespace advtext {

using SparseFeatures = std::vector<std::pair<std::size_t, double>>;

class CharEmbedder {
 public:
  static constexpr int kVersion = 1;
  static constexpr std::size_t kDefaultDim = 128;
  static constexpr std::uint64_t kDefaultHashSeed = 0x7a3c5e11ULL;

  explicit CharEmbedder(std::size_t dim = kDefaultDim, std::uint64_t hash_seed = kDefaultHashSeed)
      : dim_(dim), hash_seed_(hash_seed) {
    if (dim_ == 0) throw Error(ErrorKind::kConfiguration, "embedder dimension must be >= 1");
  }

  CharEmbedder(std::size_t dim, std::uint64_t hash_seed, Matrix refinement)
      : CharEmbedder(dim, hash_seed) {
    if (refinement.rows != dim_ || refinement.cols != dim_) {
      throw Error(ErrorKind::kConfiguration, "refinement must be a dim x dim matrix");
    }
    refinement_ = std::move(refinement);
  }

  std::size_t dim() const { return dim_; }
  std::uint64_t hash_seed() const { return hash_seed_; }
  const std::optional<Matrix>& refinement() const { return refinement_; }

  CharEmbedder without_refinement() const { return CharEmbedder(dim_, hash_seed_); }

  // Hashed trigram counts of "^token$", sorted by bucket.
  SparseFeatures base_features(std::string_view token) const {
    std::u32string padded = U"^";
    padded += utf8_decode(token);
    padded += U"$";
    std::map<std::size_t, double> counts;
    const std::uint64_t basis = splitmix64(hash_seed_);
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
      const std::string gram = utf8_encode(std::u32string_view(padded).substr(i, 3));
      counts[fnv1a64(gram, basis) % dim_] += 1.0;
    }
    if (counts.empty()) {
      // "^$" for the empty string still gets a feature of its own.
      counts[fnv1a64(utf8_encode(padded), basis) % dim_] += 1.0;
    }
    return {counts.begin(), counts.end()};
  }

  std::vector<double> project(const SparseFeatures& f) const {
    std::vector<double> out(dim_, 0.0);
    if (!refinement_) {
      for (const auto& [i, v] : f) out[i] = v;
      return out;
    }
    const Matrix& m = *refinement_;
    for (std::size_t r = 0; r < dim_; ++r) {
      double acc = 0.0;
      for (const auto& [i, v] : f) acc += m(r, i) * v;
      out[r] = acc;
    }
    return out;
  }

  // Unit-normalized embedding of one token.
  std::vector<double> embed(std::string_view token) const {
    const SparseFeatures f = base_features(token);
    std::vector<double> y = project(f);
    double norm2 = 0.0;
    for (double v : y) norm2 += v * v;
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
      y = without_refinement().project(f);
      norm2 = 0.0;
      for (double v : y) norm2 += v * v;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : y) v *= inv;
    return y;
  }

  bool operator==(const CharEmbedder&) const = default;

 private:
  std::size_t dim_;
  std::uint64_t hash_seed_;
  std::optional<Matrix> refinement_;
};

// ---------------------------------------------------------------------------
// Siamese fit of the refinement matrix

struct CharEmbedderTrainingConfig {
  std::size_t epochs = 10;
  double learning_rate = 0.05;
  // Extra (corrupted, other vocabulary word) pairs per misspelling pair,
  // labelled with the same Levenshtein similarity.
  double negative_ratio = 1.0;
  std::uint64_t seed = 0;
};

struct CharEmbedderFit {
  CharEmbedder embedder;
  double identity_loss = 0.0;
  double final_loss = 0.0;
  std::vector<double> epoch_loss;
};

namespace detail {

struct EncodedPair {
  SparseFeatures a;
  SparseFeatures b;
  double target = 0.0;
};

inline double pair_loss(const CharEmbedder& e, const std::vector<EncodedPair>& pairs) {
  double total = 0.0;
  for (const auto& p : pairs) {
    const double c = cosine(e.project(p.a), e.project(p.b));
    total += (c - p.target) * (c - p.target);
  }
  return total / static_cast<double>(pairs.size());
}

}  // namespace detail

// Training pairs: the misspelling pairs plus sampled negatives.
inline std::vector<MisspellingPair> siamese_training_pairs(const std::vector<MisspellingPair>& pairs,
                                                           const CharEmbedderTrainingConfig& config) {
  std::vector<MisspellingPair> out = pairs;
  std::set<std::string> words;
  for (const auto& p : pairs) words.insert(p.correct);
  const std::vector<std::string> vocab(words.begin(), words.end());
  if (vocab.size() < 2 || config.negative_ratio <= 0.0) return out;
  Rng rng(derive_seed(config.seed, "negatives"));
  const auto negatives = static_cast<std::size_t>(config.negative_ratio * static_cast<double>(pairs.size()));
  for (std::size_t i = 0; i < negatives; ++i) {
    const auto& p = pairs[rng.uniform_index(pairs.size())];
    const std::string* other = &vocab[rng.uniform_index(vocab.size())];
    while (*other == p.correct) other = &vocab[rng.uniform_index(vocab.size())];
    out.push_back(make_pair_labelled(p.corrupted, *other));
  }
  return out;
}

// Minimizes mean (cos(M a, M b) - similarity)^2 by per-pair gradient descent
// starting from M = I. Returns the lowest-loss matrix seen, which is never
// worse than the identity.
inline CharEmbedderFit train_char_embedder(const std::vector<MisspellingPair>& pairs,
                                           const CharEmbedder& base,
                                           const CharEmbedderTrainingConfig& config) {
  if (pairs.empty()) throw Error(ErrorKind::kConfiguration, "no misspelling pairs to train on");
  if (config.epochs == 0 || !(config.learning_rate > 0.0)) {
    throw Error(ErrorKind::kConfiguration, "embedder training needs epochs >= 1 and learning_rate > 0");
  }
  const std::size_t dim = base.dim();
  std::vector<detail::EncodedPair> encoded;
  for (const auto& p : siamese_training_pairs(pairs, config)) {
    encoded.push_back({base.base_features(p.correct), base.base_features(p.corrupted), p.similarity});
  }

  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  CharEmbedderFit fit{CharEmbedder(dim, base.hash_seed(), m), 0.0, 0.0, {}};
  fit.identity_loss = detail::pair_loss(fit.embedder, encoded);
  fit.final_loss = fit.identity_loss;

  std::vector<std::size_t> order(encoded.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(config.seed, "order"));
  std::vector<double> u(dim), v(dim), gu(dim), gv(dim);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const auto& p = encoded[idx];
      std::fill(u.begin(), u.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      for (std::size_t r = 0; r < dim; ++r) {
        for (const auto& [i, x] : p.a) u[r] += m(r, i) * x;
        for (const auto& [i, x] : p.b) v[r] += m(r, i) * x;
      }
      double uu = 0.0, vv = 0.0, uv = 0.0;
      for (std::size_t r = 0; r < dim; ++r) {
        uu += u[r] * u[r];
        vv += v[r] * v[r];
        uv += u[r] * v[r];
      }
      if (uu == 0.0 || vv == 0.0) continue;
      const double nu = std::sqrt(uu), nv = std::sqrt(vv);
      const double c = uv / (nu * nv);
      const double dl = 2.0 * (c - p.target);
      for (std::size_t r = 0; r < dim; ++r) {
        gu[r] = dl * (v[r] / (nu * nv) - c * u[r] / uu);
        gv[r] = dl * (u[r] / (nu * nv) - c * v[r] / vv);
      }
      for (std::size_t r = 0; r < dim; ++r) {
        for (const auto& [i, x] : p.a) m(r, i) -= config.learning_rate * gu[r] * x;
        for (const auto& [i, x] : p.b) m(r, i) -= config.learning_rate * gv[r] * x;
      }
    }
    CharEmbedder candidate(dim, base.hash_seed(), m);
    const double loss = detail::pair_loss(candidate, encoded);
    fit.epoch_loss.push_back(loss);
    if (loss < fit.final_loss) {
      fit.final_loss = loss;
      fit.embedder = std::move(candidate);
    }
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Vocabulary index and restoration

struct VocabularyEmbeddingIndex {
  std::vector<std::string> tokens;  // sorted, unique
  Matrix embeddings;                // tokens.size() x dim, unit rows

  std::size_t size() const { return tokens.size(); }
  bool operator==(const VocabularyEmbeddingIndex&) const = default;
};

inline VocabularyEmbeddingIndex build_index(std::vector<std::string> vocab, const CharEmbedder& embedder) {
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  if (vocab.empty()) throw Error(ErrorKind::kConfiguration, "cannot index an empty vocabulary");
  VocabularyEmbeddingIndex index;
  index.embeddings = Matrix(vocab.size(), embedder.dim());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto e = embedder.embed(vocab[i]);
    std::copy(e.begin(), e.end(), index.embeddings.row(i).begin());
  }
  index.tokens = std::move(vocab);
  return index;
}

struct DefenseThresholds {
  double accept_low = 0.7;
  double accept_high_exclusive = 1.0;
};

inline void validate(const DefenseThresholds& t) {
  if (!(0.0 < t.accept_low && t.accept_low < t.accept_high_exclusive && t.accept_high_exclusive <= 1.0)) {
    throw Error(ErrorKind::kConfiguration, "thresholds must satisfy 0 < accept_low < accept_high <= 1");
  }
}

struct RestoreDecision {
  std::string token;
  double score = 0.0;           // max cosine over the index
  std::size_t best_index = 0;   // argmax, lowest index on ties
  bool replaced = false;
};

struct RestoreResult {
  std::vector<std::string> tokens;
  std::vector<RestoreDecision> trace;
};

// Best (max cosine, lowest index on ties) row of the index for `e`.
inline std::pair<double, std::size_t> nearest(const VocabularyEmbeddingIndex& index,
                                              const std::vector<double>& e) {
  double best = -2.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const double s = cosine(index.embeddings.row(i), e);
    if (s > best) {
      best = s;
      arg = i;
    }
  }
  return {best, arg};
}

inline RestoreResult restore(const std::vector<std::string>& tokens, const VocabularyEmbeddingIndex& index,
                             const CharEmbedder& embedder, const DefenseThresholds& thresholds) {
  validate(thresholds);
  if (index.embeddings.cols != embedder.dim()) {
    throw Error(ErrorKind::kMismatch, "index dimension does not match the embedder");
  }
  RestoreResult out;
  out.tokens.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto [score, arg] = nearest(index, embedder.embed(t));
    RestoreDecision d{t, score, arg, false};
    if (score >= thresholds.accept_low && score < thresholds.accept_high_exclusive) {
      d.replaced = true;
      out.tokens.push_back(index.tokens[arg]);
    } else {
      out.tokens.push_back(t);
    }
    out.trace.push_back(std::move(d));
  }
  return out;
}

// Restores a document and splices the restored tokens back into the raw
// text at their original offsets.
inline Document defend_document(const Document& doc, const VocabularyEmbeddingIndex& index,
                                const CharEmbedder& embedder, const DefenseThresholds& thresholds,
                                RestoreResult* trace = nullptr) {
  RestoreResult r = restore(doc.token_texts(), index, embedder, thresholds);
  std::u32string cps = utf8_decode(doc.raw);
  for (std::size_t i = doc.tokens.size(); i-- > 0;) {
    if (!r.trace[i].replaced) continue;
    const Token& t = doc.tokens[i];
    cps.replace(t.start, t.end - t.start, utf8_decode(r.tokens[i]));
  }
  Document out = make_document(utf8_encode(cps), doc.label);
  if (out.token_texts() != r.tokens) {
    // A replacement merged with neighbouring punctuation; fall back to a
    // whitespace-joined rendering.
    std::string joined;
    for (std::size_t i = 0; i < r.tokens.size(); ++i) {
      if (i) joined += ' ';
      joined += r.tokens[i];
    }
    out = make_document(std::move(joined), doc.label);
  }
  if (trace) *trace = std::move(r);
  return out;
}

}  // namespace advtext

#endif  // ADVTEXT_DEFENSE_EXPLICIT_HPP_
