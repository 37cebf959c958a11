#include "tlab/featurize/external.h"

#include <json.hpp>

#include "tlab/common/base64.h"
#include "tlab/common/error.h"
#include "tlab/common/io.h"

namespace tlab::featurize {

std::string_view embedding_mode_name(EmbeddingMode mode) {
  return mode == EmbeddingMode::kPooled ? "pooled" : "sequence";
}

const ExternalDoc* ExternalEmbeddingSet::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &docs[it->second];
}

void ExternalEmbeddingSet::reindex() {
  by_id_.clear();
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!by_id_.emplace(docs[i].id, i).second) {
      throw Error(ErrorCode::kMalformedFile, "embeddings: duplicate id '" + docs[i].id + "'");
    }
  }
}

ExternalEmbeddingSet parse_external_embeddings(std::string_view text, std::size_t max_len) {
  auto lines = io::split(text, '\n');
  while (!lines.empty() && io::trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::kMalformedFile, "embeddings: missing header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(lines[0]);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, std::string("embeddings header: ") + e.what());
  }
  ExternalEmbeddingSet set;
  std::size_t count = 0;
  try {
    set.dim = header.at("dim").get<std::size_t>();
    count = header.at("count").get<std::size_t>();
    const auto mode = header.at("mode").get<std::string>();
    if (header.at("version").get<int>() != 1) {
      throw Error(ErrorCode::kMalformedFile, "embeddings: unsupported version");
    }
    if (mode == "pooled") set.mode = EmbeddingMode::kPooled;
    else if (mode == "sequence") set.mode = EmbeddingMode::kSequence;
    else throw Error(ErrorCode::kMalformedFile, "embeddings: unknown mode '" + mode + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, std::string("embeddings header: ") + e.what());
  }
  if (set.dim == 0) throw Error(ErrorCode::kMalformedFile, "embeddings: dim must be >= 1");
  if (lines.size() - 1 != count) {
    throw Error(ErrorCode::kMalformedFile, "embeddings: header count " + std::to_string(count) +
                                               " but " + std::to_string(lines.size() - 1) + " rows");
  }

  for (std::size_t li = 1; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw Error(ErrorCode::kMalformedFile, "embeddings line " + std::to_string(li + 1) + ": expected id<TAB>data");
    }
    ExternalDoc doc;
    doc.id = std::string(line.substr(0, tab));
    const auto bytes = base64::decode(line.substr(tab + 1));
    if (bytes.size() % 4 != 0) {
      throw Error(ErrorCode::kMalformedFile, "embeddings: payload for '" + doc.id + "' is not float32");
    }
    std::vector<float> values = base64::unpack_f32_le(bytes);
    if (set.mode == EmbeddingMode::kPooled) {
      if (values.size() != set.dim) {
        throw Error(ErrorCode::kDimensionMismatch, "embeddings: '" + doc.id + "' has " +
                                                       std::to_string(values.size()) + " values, dim is " +
                                                       std::to_string(set.dim));
      }
      doc.rows = 1;
      doc.source_tokens = 1;
      doc.values = std::move(values);
      doc.mask = {1};
    } else {
      if (values.empty() || values.size() % set.dim != 0) {
        throw Error(ErrorCode::kDimensionMismatch, "embeddings: '" + doc.id + "' has " +
                                                       std::to_string(values.size()) +
                                                       " values, not a multiple of dim " +
                                                       std::to_string(set.dim));
      }
      doc.source_tokens = values.size() / set.dim;
      const std::size_t kept = std::min(doc.source_tokens, max_len);
      values.resize(max_len * set.dim, 0.0f);
      doc.rows = max_len;
      doc.values = std::move(values);
      doc.mask.assign(max_len, 0);
      std::fill(doc.mask.begin(), doc.mask.begin() + static_cast<std::ptrdiff_t>(kept), 1);
    }
    set.docs.push_back(std::move(doc));
  }
  set.reindex();
  return set;
}

ExternalEmbeddingSet import_external_embeddings(const std::filesystem::path& path, std::size_t max_len) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedFile, e.what());
  }
  return parse_external_embeddings(text, max_len);
}

std::string format_external_embeddings(const ExternalEmbeddingSet& set) {
  nlohmann::ordered_json header = {{"dim", set.dim},
                           {"count", set.docs.size()},
                           {"mode", std::string(embedding_mode_name(set.mode))},
                           {"version", 1}};
  std::string out = header.dump() + "\n";
  for (const auto& doc : set.docs) {
    std::size_t rows = 0;
    for (std::size_t r = 0; r < doc.rows; ++r) rows += doc.mask.empty() || doc.mask[r] ? 1 : 0;
    std::vector<float> kept;
    kept.reserve(rows * set.dim);
    for (std::size_t r = 0; r < doc.rows; ++r) {
      if (!doc.mask.empty() && !doc.mask[r]) continue;
      kept.insert(kept.end(), doc.values.begin() + r * set.dim, doc.values.begin() + (r + 1) * set.dim);
    }
    out += doc.id + '\t' + base64::encode(base64::pack_f32_le(kept)) + '\n';
  }
  return out;
}

void export_external_embeddings(const std::filesystem::path& path, const ExternalEmbeddingSet& set) {
  io::write_file(path, format_external_embeddings(set));
}

}  // namespace tlab::featurize
