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

// Synthetic two-class keyword corpus used as the desk-scale dataset.

#ifndef ADVTEXT_DATAGEN_HPP_
#define ADVTEXT_DATAGEN_HPP_

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "advtext/errors.hpp"
#include "advtext/model.hpp"
#include "advtext/rng.hpp"
#include "advtext/text_core.hpp"

namespace advtext {

struct DataGenConfig {
  std::size_t filler_vocab_size = 200;
  std::size_t filler_min_length = 4;
  std::size_t filler_max_length = 9;
  // One keyword list per class; the class count is the number of lists.
  std::vector<std::vector<std::string>> class_keywords;
  std::size_t doc_min_tokens = 5;
  std::size_t doc_max_tokens = 15;
  std::size_t keywords_min = 1;
  std::size_t keywords_max = 3;
  std::size_t train_size = 600;
  std::size_t validation_size = 200;
  std::size_t test_size = 200;
  bool balanced = true;
  // Probability that a document ends with '.', '!' or '?'.
  double punctuation_rate = 0.3;
};

inline std::vector<std::pair<std::string, PosTag>> default_suffix_rules() {
  return {{"schaft", PosTag::kNoun}, {"ung", PosTag::kNoun}, {"heit", PosTag::kNoun},
          {"keit", PosTag::kNoun},   {"tion", PosTag::kNoun}, {"lich", PosTag::kAdj},
          {"isch", PosTag::kAdj},    {"voll", PosTag::kAdj},  {"bar", PosTag::kAdj},
          {"ig", PosTag::kAdj},      {"en", PosTag::kVerb}};
}

struct SyntheticCorpus {
  std::vector<Document> train;
  std::vector<Document> validation;
  std::vector<Document> test;
  std::vector<std::string> filler;
  PosLexicon lexicon;
};

inline void validate(const DataGenConfig& c) {
  if (c.class_keywords.size() < 2) {
    throw Error(ErrorKind::kConfiguration, "need keyword lists for at least two classes");
  }
  std::set<std::string> seen;
  for (std::size_t k = 0; k < c.class_keywords.size(); ++k) {
    if (c.class_keywords[k].empty()) {
      throw Error(ErrorKind::kConfiguration, "class " + std::to_string(k) + " has no keywords");
    }
    for (const auto& w : c.class_keywords[k]) {
      const auto toks = tokenize(w);
      if (toks.size() != 1 || toks[0].text != w) {
        throw Error(ErrorKind::kConfiguration, "keyword '" + w + "' is not a single lowercase token");
      }
      if (!seen.insert(w).second) {
        throw Error(ErrorKind::kConfiguration, "keyword '" + w + "' appears in more than one class list");
      }
    }
  }
  if (c.filler_vocab_size == 0) throw Error(ErrorKind::kConfiguration, "filler_vocab_size must be >= 1");
  if (c.filler_min_length < 2 || c.filler_min_length > c.filler_max_length) {
    throw Error(ErrorKind::kConfiguration, "invalid filler length range");
  }
  if (c.keywords_min < 1 || c.keywords_min > c.keywords_max) {
    throw Error(ErrorKind::kConfiguration, "invalid keyword count range");
  }
  if (c.doc_min_tokens < c.keywords_max || c.doc_min_tokens > c.doc_max_tokens) {
    throw Error(ErrorKind::kConfiguration, "invalid document length range");
  }
  if (c.train_size == 0 || c.test_size == 0) {
    throw Error(ErrorKind::kConfiguration, "train and test splits must be non-empty");
  }
  if (c.punctuation_rate < 0.0 || c.punctuation_rate > 1.0) {
    throw Error(ErrorKind::kConfiguration, "punctuation_rate must lie in [0, 1]");
  }
}

// Pronounceable pseudo-words built from consonant-vowel syllables.
inline std::vector<std::string> generate_filler_words(const DataGenConfig& c,
                                                      const std::set<std::string>& reserved,
                                                      Rng& rng) {
  static const std::vector<std::string> onsets = {"b", "d", "f", "g", "h", "k", "l", "m", "n",
                                                  "p", "r", "s", "t", "w", "z", "st", "sch",
                                                  "br", "gr", "kl", "tr", "pf"};
  static const std::vector<std::string> vowels = {"a", "e", "i", "o", "u", "ei", "au", "ie"};
  static const std::vector<std::string> codas = {"", "", "n", "r", "l", "s", "t", "ck", "ng"};
  std::set<std::string> out;
  std::vector<std::string> ordered;
  std::size_t attempts = 0;
  while (ordered.size() < c.filler_vocab_size) {
    if (++attempts > 1000 * c.filler_vocab_size) {
      throw Error(ErrorKind::kConfiguration, "cannot generate enough distinct filler words");
    }
    const auto target = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(c.filler_min_length),
                        static_cast<std::int64_t>(c.filler_max_length)));
    std::string w;
    while (w.size() < target) {
      w += onsets[rng.uniform_index(onsets.size())];
      w += vowels[rng.uniform_index(vowels.size())];
      w += codas[rng.uniform_index(codas.size())];
    }
    if (w.size() > c.filler_max_length) w.resize(c.filler_max_length);
    if (w.size() < c.filler_min_length || reserved.count(w) || !out.insert(w).second) continue;
    ordered.push_back(w);
  }
  return ordered;
}

inline Document generate_document(const DataGenConfig& c, const std::vector<std::string>& filler,
                                  std::size_t label, Rng& rng) {
  const auto length = static_cast<std::size_t>(rng.uniform_int(
      static_cast<std::int64_t>(c.doc_min_tokens), static_cast<std::int64_t>(c.doc_max_tokens)));
  const auto keywords = static_cast<std::size_t>(rng.uniform_int(
      static_cast<std::int64_t>(c.keywords_min), static_cast<std::int64_t>(c.keywords_max)));
  std::vector<std::string> words(length);
  std::vector<std::size_t> slots(length);
  for (std::size_t i = 0; i < length; ++i) slots[i] = i;
  rng.shuffle(slots);
  const auto& list = c.class_keywords[label];
  for (std::size_t i = 0; i < length; ++i) {
    words[slots[i]] = i < keywords ? list[rng.uniform_index(list.size())]
                                   : filler[rng.uniform_index(filler.size())];
  }
  std::string raw;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) raw += ' ';
    raw += words[i];
  }
  if (!raw.empty() && raw[0] >= 'a' && raw[0] <= 'z') raw[0] = static_cast<char>(raw[0] - 'a' + 'A');
  if (rng.uniform01() < c.punctuation_rate) {
    static const char marks[] = {'.', '!', '?'};
    raw += marks[rng.uniform_index(3)];
  }
  return make_document(std::move(raw), label);
}

inline std::vector<Document> generate_split(const DataGenConfig& c,
                                            const std::vector<std::string>& filler,
                                            std::size_t size, Rng& rng) {
  const std::size_t classes = c.class_keywords.size();
  std::vector<std::size_t> labels(size);
  for (std::size_t i = 0; i < size; ++i) {
    labels[i] = c.balanced ? i % classes : rng.uniform_index(classes);
  }
  rng.shuffle(labels);
  std::vector<Document> docs;
  docs.reserve(size);
  for (std::size_t label : labels) docs.push_back(generate_document(c, filler, label, rng));
  return docs;
}

inline SyntheticCorpus generate_corpus(const DataGenConfig& c, std::uint64_t seed) {
  validate(c);
  Rng rng(seed);
  std::set<std::string> keywords;
  for (const auto& list : c.class_keywords) keywords.insert(list.begin(), list.end());
  SyntheticCorpus corpus;
  corpus.filler = generate_filler_words(c, keywords, rng);
  corpus.train = generate_split(c, corpus.filler, c.train_size, rng);
  corpus.validation = generate_split(c, corpus.filler, c.validation_size, rng);
  corpus.test = generate_split(c, corpus.filler, c.test_size, rng);

  corpus.lexicon.suffix_rules = default_suffix_rules();
  for (const auto& w : keywords) {
    PosTag tag = pos_tag(corpus.lexicon, w);
    corpus.lexicon.entries[w] = tag == PosTag::kOther ? PosTag::kNoun : tag;
  }
  static const PosTag filler_tags[] = {PosTag::kNoun, PosTag::kNoun, PosTag::kNoun,
                                       PosTag::kVerb, PosTag::kVerb, PosTag::kAdj,
                                       PosTag::kAdj,  PosTag::kAdv,  PosTag::kPron,
                                       PosTag::kDet};
  for (const auto& w : corpus.filler) {
    corpus.lexicon.entries[w] = filler_tags[rng.uniform_index(std::size(filler_tags))];
  }
  return corpus;
}

inline DataGenConfig desk_datagen_config() {
  DataGenConfig c;
  c.class_keywords = {
      {"freundlichkeit", "zusammenhalt", "hilfsbereit", "wertschaetzung", "gemeinschaft",
       "dankbarkeit", "respektvoll", "verstaendnis", "nachbarschaft", "hoffnungsvoll",
       "gastfreundschaft", "solidaritaet"},
      {"dreckspack", "vollidioten", "schmarotzer", "volksverraeter", "abschaum", "gesindel",
       "luegenpresse", "schwachkoepfe", "parasiten", "hetzerbande", "nichtsnutze",
       "drecksbande"}};
  return c;
}

}  // namespace advtext

#endif  // ADVTEXT_DATAGEN_HPP_
