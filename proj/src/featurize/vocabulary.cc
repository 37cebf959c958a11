#include "tlab/featurize/vocabulary.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <unordered_set>

#include "tlab/common/error.h"
#include "tlab/common/io.h"

namespace tlab::featurize {

Vocabulary Vocabulary::build(std::span<const textprep::CleanDocument> corpus, std::size_t min_count,
                             bool allow_empty) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "cannot build a vocabulary from no documents");
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> stats;  // count, df
  for (const auto& doc : corpus) {
    std::unordered_set<std::string_view> seen;
    for (const std::string& token : doc.tokens) {
      auto& [count, df] = stats[token];
      ++count;
      if (seen.insert(token).second) ++df;
    }
  }
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> kept;
  for (auto& [token, s] : stats) {
    if (s.first >= min_count) kept.emplace_back(token, s);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.first < b.first;
  });
  if (kept.empty() && !allow_empty) {
    throw Error(ErrorCode::kEmptyCorpus, "no token reaches min_count " + std::to_string(min_count));
  }

  Vocabulary vocab;
  vocab.total_docs_ = corpus.size();
  for (auto& [token, s] : kept) {
    vocab.index_.emplace(token, vocab.tokens_.size());
    vocab.tokens_.push_back(token);
    vocab.counts_.push_back(s.first);
    vocab.doc_freq_.push_back(s.second);
  }
  return vocab;
}

std::optional<std::size_t> Vocabulary::index(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::document_frequency(std::string_view token) const {
  const auto i = index(token);
  return i ? doc_freq_[*i] : 0;
}

double Vocabulary::coverage(std::span<const std::string> tokens) const {
  if (tokens.empty()) return 1.0;
  std::size_t hits = 0;
  for (const auto& t : tokens) hits += index_.contains(t) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

std::string Vocabulary::serialize() const {
  std::string out = "# total_docs=" + std::to_string(total_docs_) + "\n";
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out += tokens_[i] + '\t' + std::to_string(counts_[i]) + '\t' + std::to_string(doc_freq_[i]) + '\n';
  }
  return out;
}

Vocabulary Vocabulary::parse(std::string_view text) {
  Vocabulary vocab;
  bool header = false;
  auto to_size = [](std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::kMalformedFile, "vocabulary: bad integer '" + std::string(s) + "'");
    }
    return v;
  };
  for (std::string_view line : io::split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.starts_with("# total_docs=")) {
      vocab.total_docs_ = to_size(line.substr(13));
      header = true;
      continue;
    }
    const auto parts = io::split(line, '\t');
    if (parts.size() != 3) throw Error(ErrorCode::kMalformedFile, "vocabulary: expected 3 columns");
    std::string token(parts[0]);
    if (!vocab.index_.emplace(token, vocab.tokens_.size()).second) {
      throw Error(ErrorCode::kMalformedFile, "vocabulary: duplicate token '" + token + "'");
    }
    vocab.tokens_.push_back(std::move(token));
    vocab.counts_.push_back(to_size(parts[1]));
    vocab.doc_freq_.push_back(to_size(parts[2]));
  }
  if (!header) throw Error(ErrorCode::kMalformedFile, "vocabulary: missing total_docs header");
  return vocab;
}

}  // namespace tlab::featurize
