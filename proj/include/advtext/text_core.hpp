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

// Text primitives shared by every other module: UTF-8 handling, the
// tokenizer, character edits, edit and set distances, and the synthetic
// misspelling-pair generator.

#ifndef ADVTEXT_TEXT_CORE_HPP_
#define ADVTEXT_TEXT_CORE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "advtext/errors.hpp"
#include "advtext/rng.hpp"

namespace advtext {

// ---------------------------------------------------------------------------
// UTF-8

inline std::u32string utf8_decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
    }
    if (len > 1) {
      bool ok = i + len <= s.size();
      char32_t v = b0 & (0xFF >> (len + 1));
      for (std::size_t k = 1; ok && k < len; ++k) {
        const auto bk = static_cast<unsigned char>(s[i + k]);
        if ((bk & 0xC0) != 0x80) {
          ok = false;
        } else {
          v = (v << 6) | (bk & 0x3F);
        }
      }
      if (ok) {
        cp = v;
      } else {
        len = 1;  // invalid sequence: emit U+FFFD for the lead byte only
      }
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void utf8_append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string utf8_encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) utf8_append(out, cp);
  return out;
}

inline std::size_t utf8_length(std::string_view s) { return utf8_decode(s).size(); }

// ---------------------------------------------------------------------------
// Character classes

inline bool is_unicode_whitespace(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 ||
         c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 ||
         c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000;
}

inline bool is_punctuation(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  return c == 0xA1 || c == 0xA7 || c == 0xAB || c == 0xB6 || c == 0xB7 ||
         c == 0xBB || c == 0xBF || (c >= 0x2010 && c <= 0x2027) ||
         (c >= 0x2030 && c <= 0x205E) || (c >= 0x3001 && c <= 0x3003);
}

// Simple one-to-one case mapping for Latin, Greek and Cyrillic. Multi-char
// foldings (e.g. German sharp s uppercase) are left alone.
inline char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  if (c < 0x80) return c;
  if ((c >= 0xC0 && c <= 0xDE) && c != 0xD7) return c + 0x20;
  if (c >= 0x100 && c <= 0x137 && c % 2 == 0) return c + 1;
  if (c >= 0x139 && c <= 0x148 && c % 2 == 1) return c + 1;
  if (c >= 0x14A && c <= 0x177 && c % 2 == 0) return c + 1;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E && c % 2 == 1) return c + 1;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

inline std::string to_lower_utf8(std::string_view s) {
  std::u32string cps = utf8_decode(s);
  for (auto& c : cps) c = to_lower(c);
  return utf8_encode(cps);
}

inline bool is_punctuation_only(std::string_view token_text) {
  const auto cps = utf8_decode(token_text);
  return !cps.empty() && std::all_of(cps.begin(), cps.end(), is_punctuation);
}

// ---------------------------------------------------------------------------
// Tokens and documents

// Offsets count Unicode scalar values (not bytes) into the original string.
struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

struct Document {
  std::string raw;
  std::vector<Token> tokens;
  std::optional<std::size_t> label;

  bool operator==(const Document&) const = default;

  std::vector<std::string> token_texts() const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.text);
    return out;
  }
};

// Lowercases, splits on Unicode whitespace and detaches leading and trailing
// punctuation, one token per punctuation character.
inline std::vector<Token> tokenize(std::string_view raw) {
  const std::u32string cps = utf8_decode(raw);
  std::vector<Token> tokens;
  auto emit = [&](std::size_t b, std::size_t e) {
    std::u32string piece(cps.begin() + b, cps.begin() + e);
    for (auto& c : piece) c = to_lower(c);
    tokens.push_back(Token{utf8_encode(piece), b, e});
  };
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_unicode_whitespace(cps[i])) {
      ++i;
      continue;
    }
    std::size_t chunk_end = i;
    while (chunk_end < cps.size() && !is_unicode_whitespace(cps[chunk_end])) ++chunk_end;
    std::size_t core_begin = i;
    while (core_begin < chunk_end && is_punctuation(cps[core_begin])) ++core_begin;
    std::size_t core_end = chunk_end;
    while (core_end > core_begin && is_punctuation(cps[core_end - 1])) --core_end;
    for (std::size_t p = i; p < core_begin; ++p) emit(p, p + 1);
    if (core_end > core_begin) emit(core_begin, core_end);
    for (std::size_t p = core_end; p < chunk_end; ++p) emit(p, p + 1);
    i = chunk_end;
  }
  return tokens;
}

inline Document make_document(std::string raw,
                              std::optional<std::size_t> label = std::nullopt) {
  Document doc;
  doc.tokens = tokenize(raw);
  doc.raw = std::move(raw);
  doc.label = label;
  return doc;
}

// Replaces the characters of token `index` inside the raw string and
// re-tokenizes. The label is carried over. If the plain splice would fuse
// with an adjacent token (a detached punctuation mark replaced by a word),
// the new text is separated from its neighbours by a space.
inline Document replace_token(const Document& doc, std::size_t index,
                              std::string_view new_text) {
  if (index >= doc.tokens.size()) {
    throw Error(ErrorKind::kPosition, "token index " + std::to_string(index) +
                                          " >= " + std::to_string(doc.tokens.size()));
  }
  const std::u32string cps = utf8_decode(doc.raw);
  const Token& t = doc.tokens[index];
  const std::u32string piece = utf8_decode(new_text);
  std::u32string spliced = cps;
  spliced.replace(t.start, t.end - t.start, piece);
  Document out = make_document(utf8_encode(spliced), doc.label);
  const std::size_t expected = doc.tokens.size() - 1 + tokenize(new_text).size();
  if (out.tokens.size() == expected) return out;
  std::u32string padded = cps.substr(0, t.start);
  if (t.start > 0 && !is_unicode_whitespace(cps[t.start - 1])) padded += U' ';
  padded += piece;
  if (t.end < cps.size() && !is_unicode_whitespace(cps[t.end])) padded += U' ';
  padded += cps.substr(t.end);
  return make_document(utf8_encode(padded), doc.label);
}

// Inserts a whitespace-separated token before token `gap` (gap == size
// appends at the end).
inline Document insert_token(const Document& doc, std::size_t gap,
                             std::string_view new_text) {
  if (gap > doc.tokens.size()) {
    throw Error(ErrorKind::kPosition, "insertion gap " + std::to_string(gap) +
                                          " > " + std::to_string(doc.tokens.size()));
  }
  std::u32string cps = utf8_decode(doc.raw);
  const std::u32string piece = utf8_decode(new_text);
  if (gap < doc.tokens.size()) {
    const std::size_t at = doc.tokens[gap].start;
    const bool glued = at > 0 && !is_unicode_whitespace(cps[at - 1]);
    cps.insert(at, (glued ? U" " : U"") + piece + U" ");
  } else if (doc.tokens.empty()) {
    cps.append(piece);
  } else {
    cps.insert(doc.tokens.back().end, U" " + piece);
  }
  return make_document(utf8_encode(cps), doc.label);
}

// ---------------------------------------------------------------------------
// Distances

inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(std::u32string_view(utf8_decode(a)),
                     std::u32string_view(utf8_decode(b)));
}

// Intersection over union of the two token SETS. Two empty sets give 1.
inline double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : sa) inter += sb.count(x);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

inline double jaccard(const Document& a, const Document& b) {
  return jaccard(a.token_texts(), b.token_texts());
}

// ---------------------------------------------------------------------------
// Character edits

enum class CharEditKind { kSwap, kInsert, kDelete, kSubstitute };

inline const char* char_edit_kind_name(CharEditKind k) {
  switch (k) {
    case CharEditKind::kSwap: return "swap";
    case CharEditKind::kInsert: return "insert";
    case CharEditKind::kDelete: return "delete";
    case CharEditKind::kSubstitute: return "substitute";
  }
  return "?";
}

struct CharEditOp {
  CharEditKind kind = CharEditKind::kSwap;
  std::size_t position = 0;
  std::optional<char32_t> ch;  // insert and substitute only

  bool operator==(const CharEditOp&) const = default;
};

// Insert/substitute characters: a-z then 0-9.
inline const std::u32string& character_inventory() {
  static const std::u32string inventory = U"abcdefghijklmnopqrstuvwxyz0123456789";
  return inventory;
}

inline bool char_edit_valid(std::size_t length, const CharEditOp& op) {
  switch (op.kind) {
    case CharEditKind::kSwap: return op.position + 1 < length && !op.ch;
    case CharEditKind::kInsert: return op.position <= length && op.ch.has_value();
    case CharEditKind::kDelete: return op.position < length && !op.ch;
    case CharEditKind::kSubstitute: return op.position < length && op.ch.has_value();
  }
  return false;
}

inline std::u32string apply_char_edit(std::u32string text, const CharEditOp& op) {
  if (!char_edit_valid(text.size(), op)) {
    throw Error(ErrorKind::kPosition,
                std::string(char_edit_kind_name(op.kind)) + " at " +
                    std::to_string(op.position) + " on token of length " +
                    std::to_string(text.size()));
  }
  switch (op.kind) {
    case CharEditKind::kSwap:
      std::swap(text[op.position], text[op.position + 1]);
      break;
    case CharEditKind::kInsert:
      text.insert(text.begin() + static_cast<std::ptrdiff_t>(op.position), *op.ch);
      break;
    case CharEditKind::kDelete:
      text.erase(op.position, 1);
      break;
    case CharEditKind::kSubstitute:
      text[op.position] = *op.ch;
      break;
  }
  return text;
}

inline std::string apply_char_edit(std::string_view token_text, const CharEditOp& op) {
  return utf8_encode(apply_char_edit(utf8_decode(token_text), op));
}

// ---------------------------------------------------------------------------
// Misspelling pairs

struct MisspellingPair {
  std::string correct;
  std::string corrupted;
  double similarity = 1.0;

  bool operator==(const MisspellingPair&) const = default;
};

// 1 - d / max(|a|, |b|), lengths in characters.
inline double levenshtein_similarity(std::string_view a, std::string_view b) {
  const auto ua = utf8_decode(a);
  const auto ub = utf8_decode(b);
  const std::size_t longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(std::u32string_view(ua), std::u32string_view(ub))) /
                   static_cast<double>(longest);
}

inline MisspellingPair make_pair_labelled(std::string correct, std::string corrupted) {
  const double sim = levenshtein_similarity(correct, corrupted);
  return MisspellingPair{std::move(correct), std::move(corrupted), sim};
}

// Draws one random edit that is valid for `text` and keeps it non-empty.
inline CharEditOp random_char_edit(const std::u32string& text, Rng& rng) {
  const auto& inventory = character_inventory();
  std::vector<CharEditKind> kinds = {CharEditKind::kInsert, CharEditKind::kSubstitute};
  if (text.size() >= 2) {
    kinds.push_back(CharEditKind::kSwap);
    kinds.push_back(CharEditKind::kDelete);
  }
  CharEditOp op;
  op.kind = kinds[rng.uniform_index(kinds.size())];
  switch (op.kind) {
    case CharEditKind::kSwap:
      op.position = rng.uniform_index(text.size() - 1);
      break;
    case CharEditKind::kInsert:
      op.position = rng.uniform_index(text.size() + 1);
      op.ch = inventory[rng.uniform_index(inventory.size())];
      break;
    case CharEditKind::kDelete:
      op.position = rng.uniform_index(text.size());
      break;
    case CharEditKind::kSubstitute:
      op.position = rng.uniform_index(text.size());
      op.ch = inventory[rng.uniform_index(inventory.size())];
      break;
  }
  return op;
}

// Corrupts words of `vocab` with one or two random character edits. A draw
// that reproduces the correct word is rejected and redrawn.
inline std::vector<MisspellingPair> generate_misspelling_pairs(
    const std::set<std::string>& vocab, std::size_t n, std::uint64_t seed) {
  if (vocab.empty()) throw Error(ErrorKind::kConfiguration, "misspelling vocabulary is empty");
  if (n == 0) throw Error(ErrorKind::kConfiguration, "requested zero misspelling pairs");
  std::vector<std::string> words;
  for (const auto& w : vocab) {
    if (!w.empty()) words.push_back(w);
  }
  if (words.empty()) throw Error(ErrorKind::kConfiguration, "misspelling vocabulary has only empty words");
  Rng rng(seed);
  std::vector<MisspellingPair> pairs;
  pairs.reserve(n);
  while (pairs.size() < n) {
    const std::string& word = words[rng.uniform_index(words.size())];
    const std::u32string original = utf8_decode(word);
    std::u32string corrupted = original;
    const auto edits = 1 + rng.uniform_index(2);
    for (std::size_t e = 0; e < edits; ++e) {
      corrupted = apply_char_edit(corrupted, random_char_edit(corrupted, rng));
    }
    if (corrupted == original) continue;
    pairs.push_back(make_pair_labelled(word, utf8_encode(corrupted)));
  }
  return pairs;
}

}  // namespace advtext

#endif  // ADVTEXT_TEXT_CORE_HPP_
