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

// Artifact persistence: atomic file writes, the dataset TSV, POS lexicon
// files, JSON checkpoints for the toy model, the character embedder and the
// vocabulary index, and the config hash every artifact carries.

#ifndef ADVTEXT_IO_HPP_
#define ADVTEXT_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "advtext/attacks.hpp"
#include "advtext/defense_abstain.hpp"
#include "advtext/defense_explicit.hpp"
#include "advtext/errors.hpp"
#include "advtext/model.hpp"
#include "advtext/rng.hpp"
#include "advtext/text_core.hpp"

namespace advtext {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kFileNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to a sibling temporary file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

inline json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, what + ": " + e.what());
  }
}

inline json read_json(const std::filesystem::path& path) { return parse_json(read_file(path), path.string()); }

inline void write_json(const std::filesystem::path& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

// Hex FNV-1a of the canonical (key-sorted) dump.
inline std::string config_hash(const json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

// Typed field access that reports which field was wrong.
template <typename T>
T get_field(const json& j, std::string_view key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::kParse, where + ": missing field '" + std::string(key) + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::kParse, where + ": field '" + std::string(key) + "' has the wrong type");
  }
}

// Checks format_version, kind and (when given) the config hash of an
// artifact header.
inline void check_header(const json& j, std::string_view kind, const std::string& where,
                         const std::optional<std::string>& expected_hash = std::nullopt) {
  if (!j.is_object()) throw Error(ErrorKind::kParse, where + ": expected a JSON object");
  const int version = get_field<int>(j, "format_version", where);
  if (version != kFormatVersion) {
    throw Error(ErrorKind::kMismatch, where + ": unsupported format_version " + std::to_string(version));
  }
  const auto k = get_field<std::string>(j, "kind", where);
  if (k != kind) throw Error(ErrorKind::kMismatch, where + ": expected kind '" + std::string(kind) + "', got '" + k + "'");
  if (expected_hash) {
    const auto h = get_field<std::string>(j, "config_hash", where);
    if (h != *expected_hash) {
      throw Error(ErrorKind::kMismatch,
                  where + ": config hash " + h + " does not match the current config (" + *expected_hash + ")");
    }
  }
}

inline json header(std::string_view kind, const std::string& hash) {
  return json{{"format_version", kFormatVersion}, {"kind", kind}, {"config_hash", hash}};
}

// ---------------------------------------------------------------------------
// Dataset TSV: header "text<TAB>label" (plus "<TAB>origin" for abstain
// mixes); tab, newline, carriage return and backslash escaped.

inline std::string tsv_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string tsv_unescape(std::string_view s, std::size_t line) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ": dangling backslash");
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default:
        throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ": unknown escape \\" + std::string(1, s[i]));
    }
  }
  return out;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) return out;
    start = tab + 1;
  }
}

inline std::size_t parse_label(std::string_view s, std::size_t line) {
  if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string_view::npos) {
    throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ": label must be a non-negative integer");
  }
  return static_cast<std::size_t>(std::stoul(std::string(s)));
}

struct DatasetFile {
  std::vector<Document> documents;
  std::vector<ExampleOrigin> origins;  // empty unless the file has an origin column

  bool operator==(const DatasetFile&) const = default;
};

inline std::string serialize_dataset(const DatasetFile& data) {
  const bool with_origin = !data.origins.empty();
  if (with_origin && data.origins.size() != data.documents.size()) {
    throw Error(ErrorKind::kConfiguration, "one origin per document expected");
  }
  std::string out = with_origin ? "text\tlabel\torigin\n" : "text\tlabel\n";
  for (std::size_t i = 0; i < data.documents.size(); ++i) {
    const Document& d = data.documents[i];
    if (!d.label) throw Error(ErrorKind::kConfiguration, "dataset documents need labels");
    out += tsv_escape(d.raw);
    out += '\t';
    out += std::to_string(*d.label);
    if (with_origin) {
      out += '\t';
      out += origin_name(data.origins[i]);
    }
    out += '\n';
  }
  return out;
}

inline DatasetFile parse_dataset(std::string_view text) {
  DatasetFile data;
  std::size_t line_no = 0;
  bool with_origin = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line_no == 1) {
      if (line == "text\tlabel") continue;
      if (line == "text\tlabel\torigin") {
        with_origin = true;
        continue;
      }
      throw Error(ErrorKind::kParse, "line 1: expected header 'text<TAB>label'");
    }
    const auto cols = split_tabs(line);
    if (cols.size() != (with_origin ? 3u : 2u)) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": wrong number of columns");
    }
    data.documents.push_back(make_document(tsv_unescape(cols[0], line_no), parse_label(cols[1], line_no)));
    if (with_origin) {
      try {
        data.origins.push_back(parse_origin(cols[2]));
      } catch (const Error& e) {
        throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": " + e.detail());
      }
    }
  }
  if (line_no == 0) throw Error(ErrorKind::kParse, "empty dataset file (missing header)");
  return data;
}

inline std::filesystem::path meta_path(const std::filesystem::path& p) {
  std::filesystem::path m = p;
  m += ".meta.json";
  return m;
}

// The TSV plus a sidecar "<file>.meta.json" header carrying version and hash.
inline void save_dataset(const std::filesystem::path& path, const DatasetFile& data, const std::string& hash) {
  json meta = header("dataset", hash);
  meta["rows"] = data.documents.size();
  write_file_atomic(path, serialize_dataset(data));
  write_json(meta_path(path), meta);
}

inline DatasetFile load_dataset(const std::filesystem::path& path,
                                const std::optional<std::string>& expected_hash = std::nullopt) {
  const std::string text = read_file(path);
  const json meta = read_json(meta_path(path));
  check_header(meta, "dataset", meta_path(path).string(), expected_hash);
  DatasetFile data;
  try {
    data = parse_dataset(text);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
  if (get_field<std::size_t>(meta, "rows", path.string()) != data.documents.size()) {
    throw Error(ErrorKind::kMismatch, path.string() + ": row count differs from its metadata");
  }
  return data;
}

// ---------------------------------------------------------------------------
// POS lexicon: "token<TAB>TAG" lines and "suffix<TAB>TAG" lines.

inline std::string serialize_pairs(const std::vector<std::pair<std::string, PosTag>>& rows) {
  std::string out;
  for (const auto& [text, tag] : rows) out += text + "\t" + pos_tag_name(tag) + "\n";
  return out;
}

inline std::vector<std::pair<std::string, PosTag>> parse_pairs(std::string_view text, const std::string& where) {
  std::vector<std::pair<std::string, PosTag>> rows;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto cols = split_tabs(line);
    const auto tag = cols.size() == 2 ? parse_pos_tag(cols[1]) : std::nullopt;
    if (!tag || cols[0].empty()) {
      throw Error(ErrorKind::kParse, where + " line " + std::to_string(line_no) + ": expected 'text<TAB>TAG'");
    }
    rows.emplace_back(std::string(cols[0]), *tag);
  }
  return rows;
}

inline void save_lexicon(const std::filesystem::path& entries_path, const std::filesystem::path& suffix_path,
                         const PosLexicon& lexicon) {
  write_file_atomic(entries_path, serialize_pairs({lexicon.entries.begin(), lexicon.entries.end()}));
  write_file_atomic(suffix_path, serialize_pairs(lexicon.suffix_rules));
}

inline PosLexicon load_lexicon(const std::filesystem::path& entries_path, const std::filesystem::path& suffix_path) {
  PosLexicon lexicon;
  for (auto& [text, tag] : parse_pairs(read_file(entries_path), entries_path.string())) {
    lexicon.entries[text] = tag;
  }
  lexicon.suffix_rules = parse_pairs(read_file(suffix_path), suffix_path.string());
  return lexicon;
}

// Plain UTF-8 word list, one token per line; blank lines ignored.
inline std::vector<std::string> load_wordlist(const std::filesystem::path& path) {
  std::vector<std::string> words;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return words;
}

// ---------------------------------------------------------------------------
// Matrices and models

inline json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

inline Matrix matrix_from_json(const json& j, const std::string& where) {
  Matrix m;
  m.rows = get_field<std::size_t>(j, "rows", where);
  m.cols = get_field<std::size_t>(j, "cols", where);
  m.data = get_field<std::vector<double>>(j, "data", where);
  if (m.data.size() != m.rows * m.cols) throw Error(ErrorKind::kParse, where + ": matrix data has the wrong size");
  return m;
}

inline json to_json(const ToyModelConfig& c) {
  return json{{"embed_dim", c.embed_dim},         {"num_classes", c.num_classes}, {"seed", c.seed},
              {"learning_rate", c.learning_rate}, {"epochs", c.epochs},           {"batch_size", c.batch_size}};
}

inline ToyModelConfig model_config_from_json(const json& j, const std::string& where) {
  ToyModelConfig c;
  c.embed_dim = get_field<std::size_t>(j, "embed_dim", where);
  c.num_classes = get_field<std::size_t>(j, "num_classes", where);
  c.seed = get_field<std::uint64_t>(j, "seed", where);
  c.learning_rate = get_field<double>(j, "learning_rate", where);
  c.epochs = get_field<std::size_t>(j, "epochs", where);
  c.batch_size = get_field<std::size_t>(j, "batch_size", where);
  return c;
}

inline json model_to_json(const ToyModel& model, const std::string& hash, const json& provenance = nullptr) {
  json j = header("toy_model", hash);
  j["config"] = to_json(model.config());
  j["vocab"] = model.vocab().tokens();
  const ToyParameters& p = model.params();
  j["params"] = json{{"embeddings", matrix_to_json(p.embeddings)},
                     {"query", matrix_to_json(p.query)},
                     {"key", matrix_to_json(p.key)},
                     {"value", matrix_to_json(p.value)},
                     {"output", matrix_to_json(p.output)},
                     {"bias", p.bias}};
  if (!provenance.is_null()) j["provenance"] = provenance;
  return j;
}

inline ToyModel model_from_json(const json& j, const std::string& where,
                                const std::optional<std::string>& expected_hash = std::nullopt) {
  check_header(j, "toy_model", where, expected_hash);
  const ToyModelConfig config = model_config_from_json(get_field<json>(j, "config", where), where);
  const auto tokens = get_field<std::vector<std::string>>(j, "vocab", where);
  if (tokens.size() < 2 || tokens[0] != Vocabulary::kUnkText || tokens[1] != Vocabulary::kMaskText) {
    throw Error(ErrorKind::kParse, where + ": vocabulary must start with [UNK], [MASK]");
  }
  Vocabulary vocab(std::vector<std::string>(tokens.begin() + 2, tokens.end()));
  if (vocab.tokens() != tokens) throw Error(ErrorKind::kParse, where + ": vocabulary is not in canonical order");
  const json params = get_field<json>(j, "params", where);
  ToyParameters p;
  p.embeddings = matrix_from_json(get_field<json>(params, "embeddings", where), where);
  p.query = matrix_from_json(get_field<json>(params, "query", where), where);
  p.key = matrix_from_json(get_field<json>(params, "key", where), where);
  p.value = matrix_from_json(get_field<json>(params, "value", where), where);
  p.output = matrix_from_json(get_field<json>(params, "output", where), where);
  p.bias = get_field<std::vector<double>>(params, "bias", where);
  try {
    return ToyModel(std::move(vocab), config, std::move(p));
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, where + ": " + e.detail());
  }
}

inline void save_model(const std::filesystem::path& path, const ToyModel& model, const std::string& hash,
                       const json& provenance = nullptr) {
  write_json(path, model_to_json(model, hash, provenance));
}

inline ToyModel load_model(const std::filesystem::path& path,
                           const std::optional<std::string>& expected_hash = std::nullopt) {
  return model_from_json(read_json(path), path.string(), expected_hash);
}

// ---------------------------------------------------------------------------
// Character embedder and vocabulary index

inline json embedder_to_json(const CharEmbedder& e, const std::string& hash) {
  json j = header("char_embedder", hash);
  j["embedder_version"] = CharEmbedder::kVersion;
  j["dim"] = e.dim();
  j["hash_seed"] = e.hash_seed();
  j["refinement"] = e.refinement() ? matrix_to_json(*e.refinement()) : json(nullptr);
  return j;
}

inline CharEmbedder embedder_from_json(const json& j, const std::string& where,
                                       const std::optional<std::string>& expected_hash = std::nullopt) {
  check_header(j, "char_embedder", where, expected_hash);
  if (get_field<int>(j, "embedder_version", where) != CharEmbedder::kVersion) {
    throw Error(ErrorKind::kMismatch, where + ": unsupported embedder_version");
  }
  const auto dim = get_field<std::size_t>(j, "dim", where);
  const auto seed = get_field<std::uint64_t>(j, "hash_seed", where);
  const json r = get_field<json>(j, "refinement", where);
  try {
    if (r.is_null()) return CharEmbedder(dim, seed);
    return CharEmbedder(dim, seed, matrix_from_json(r, where));
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, where + ": " + e.detail());
  }
}

// Header (D, m, hash seed, embedder version), token list, row-major matrix.
inline json index_to_json(const VocabularyEmbeddingIndex& index, const CharEmbedder& e, const std::string& hash) {
  json j = header("vocabulary_index", hash);
  j["dim"] = e.dim();
  j["size"] = index.size();
  j["hash_seed"] = e.hash_seed();
  j["embedder_version"] = CharEmbedder::kVersion;
  j["tokens"] = index.tokens;
  j["embeddings"] = index.embeddings.data;
  return j;
}

inline VocabularyEmbeddingIndex index_from_json(const json& j, const CharEmbedder& e, const std::string& where,
                                                const std::optional<std::string>& expected_hash = std::nullopt) {
  check_header(j, "vocabulary_index", where, expected_hash);
  const auto dim = get_field<std::size_t>(j, "dim", where);
  const auto m = get_field<std::size_t>(j, "size", where);
  if (dim != e.dim() || get_field<std::uint64_t>(j, "hash_seed", where) != e.hash_seed() ||
      get_field<int>(j, "embedder_version", where) != CharEmbedder::kVersion) {
    throw Error(ErrorKind::kMismatch, where + ": index was built with a different embedder");
  }
  VocabularyEmbeddingIndex index;
  index.tokens = get_field<std::vector<std::string>>(j, "tokens", where);
  index.embeddings = Matrix(m, dim);
  index.embeddings.data = get_field<std::vector<double>>(j, "embeddings", where);
  if (index.tokens.size() != m || index.embeddings.data.size() != m * dim || m == 0) {
    throw Error(ErrorKind::kParse, where + ": index sizes are inconsistent");
  }
  return index;
}

// ---------------------------------------------------------------------------
// Documents, edits and attack results

inline json to_json(const Document& d) {
  json tokens = json::array();
  for (const auto& t : d.tokens) tokens.push_back(json::array({t.text, t.start, t.end}));
  return json{{"raw", d.raw}, {"tokens", tokens}, {"label", d.label ? json(*d.label) : json(nullptr)}};
}

inline Document document_from_json(const json& j, const std::string& where) {
  Document d;
  d.raw = get_field<std::string>(j, "raw", where);
  for (const auto& t : get_field<json>(j, "tokens", where)) {
    if (!t.is_array() || t.size() != 3) throw Error(ErrorKind::kParse, where + ": malformed token");
    try {
      d.tokens.push_back(Token{t[0].get<std::string>(), t[1].get<std::size_t>(), t[2].get<std::size_t>()});
    } catch (const json::exception&) {
      throw Error(ErrorKind::kParse, where + ": malformed token");
    }
  }
  const json label = get_field<json>(j, "label", where);
  if (!label.is_null()) d.label = get_field<std::size_t>(j, "label", where);
  if (tokenize(d.raw) != d.tokens) throw Error(ErrorKind::kParse, where + ": tokens do not match the raw text");
  return d;
}

// Edits are tagged arrays: ["replace"|"insert_left"|"insert_right", position,
// token] or ["char", token_index, kind, position, char-or-null].
inline json to_json(const EditRecord& e) {
  if (const auto* w = std::get_if<WordEditOp>(&e)) {
    return json::array({word_edit_kind_name(w->kind), w->position, w->new_token});
  }
  const auto& c = std::get<CharEdit>(e);
  json ch = c.op.ch ? json(utf8_encode(std::u32string(1, *c.op.ch))) : json(nullptr);
  return json::array({"char", c.token_index, char_edit_kind_name(c.op.kind), c.op.position, ch});
}

inline EditRecord edit_from_json(const json& j, const std::string& where) {
  const auto bad = [&] { return Error(ErrorKind::kParse, where + ": malformed edit " + j.dump()); };
  if (!j.is_array() || j.empty() || !j[0].is_string()) throw bad();
  try {
    const std::string tag = j[0].get<std::string>();
    if (tag == "char") {
      if (j.size() != 5) throw bad();
      CharEdit c;
      c.token_index = j[1].get<std::size_t>();
      const std::string kind = j[2].get<std::string>();
      if (kind == "swap") c.op.kind = CharEditKind::kSwap;
      else if (kind == "insert") c.op.kind = CharEditKind::kInsert;
      else if (kind == "delete") c.op.kind = CharEditKind::kDelete;
      else if (kind == "substitute") c.op.kind = CharEditKind::kSubstitute;
      else throw bad();
      c.op.position = j[3].get<std::size_t>();
      if (!j[4].is_null()) {
        const std::u32string cps = utf8_decode(j[4].get<std::string>());
        if (cps.size() != 1) throw bad();
        c.op.ch = cps[0];
      }
      const bool needs_char = c.op.kind == CharEditKind::kInsert || c.op.kind == CharEditKind::kSubstitute;
      if (needs_char != c.op.ch.has_value()) throw bad();
      return c;
    }
    if (j.size() != 3) throw bad();
    WordEditOp w;
    if (tag == "replace") w.kind = WordEditKind::kReplace;
    else if (tag == "insert_left") w.kind = WordEditKind::kInsertLeft;
    else if (tag == "insert_right") w.kind = WordEditKind::kInsertRight;
    else throw bad();
    w.position = j[1].get<std::size_t>();
    w.new_token = j[2].get<std::string>();
    return w;
  } catch (const json::exception&) {
    throw bad();
  }
}

inline json to_json(const AttackResult& r) {
  json edits = json::array();
  for (const auto& e : r.edits) edits.push_back(to_json(e));
  return json{{"original", to_json(r.original)},
              {"perturbed", to_json(r.perturbed)},
              {"success", r.success},
              {"queries", r.queries},
              {"edits", edits},
              {"original_confidence", r.original_confidence},
              {"final_confidence", r.final_confidence},
              {"confidence_delta", r.confidence_delta},
              {"levenshtein_raw", r.levenshtein_raw},
              {"jaccard_tokens", r.jaccard_tokens},
              {"original_class", r.original_class},
              {"final_class", r.final_class}};
}

inline AttackResult attack_result_from_json(const json& j, const std::string& where) {
  AttackResult r;
  r.original = document_from_json(get_field<json>(j, "original", where), where);
  r.perturbed = document_from_json(get_field<json>(j, "perturbed", where), where);
  r.success = get_field<bool>(j, "success", where);
  r.queries = get_field<std::size_t>(j, "queries", where);
  for (const auto& e : get_field<json>(j, "edits", where)) r.edits.push_back(edit_from_json(e, where));
  r.original_confidence = get_field<double>(j, "original_confidence", where);
  r.final_confidence = get_field<double>(j, "final_confidence", where);
  r.confidence_delta = get_field<double>(j, "confidence_delta", where);
  r.levenshtein_raw = get_field<std::size_t>(j, "levenshtein_raw", where);
  r.jaccard_tokens = get_field<double>(j, "jaccard_tokens", where);
  r.original_class = get_field<std::size_t>(j, "original_class", where);
  r.final_class = get_field<std::size_t>(j, "final_class", where);
  return r;
}

inline json to_json(const AttackConfig& c) {
  return json{{"max_tokens_attacked", c.max_tokens_attacked},
              {"candidates_per_position", c.candidates_per_position},
              {"query_budget", c.query_budget},
              {"cosine_threshold", c.cosine_threshold},
              {"max_char_edits_per_token", c.max_char_edits_per_token},
              {"seed", c.seed}};
}

inline AttackConfig attack_config_from_json(const json& j, const std::string& where) {
  AttackConfig c;
  c.max_tokens_attacked = get_field<std::size_t>(j, "max_tokens_attacked", where);
  c.candidates_per_position = get_field<std::size_t>(j, "candidates_per_position", where);
  c.query_budget = get_field<std::size_t>(j, "query_budget", where);
  c.cosine_threshold = get_field<double>(j, "cosine_threshold", where);
  c.max_char_edits_per_token = get_field<std::size_t>(j, "max_char_edits_per_token", where);
  c.seed = get_field<std::uint64_t>(j, "seed", where);
  return c;
}

}  // namespace advtext

#endif  // ADVTEXT_IO_HPP_
